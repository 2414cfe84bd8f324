// Copyright 2026 The invflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "invflow/polytopic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "invflow/error.hpp"
#include "invflow/numerics.hpp"

namespace invflow {

namespace {

void require_box(const BoxControl& box, std::size_t m) {
  if (box.lower.size() != m || box.upper.size() != m) {
    throw Error(ErrorCode::DimensionMismatch, "box bounds do not match the control count");
  }
}

constexpr double kRegionTol = 1e-9;
constexpr double kSpanTol = 1e-6;

}  // namespace

Vector clamp_to_box(std::span<const double> v, const BoxControl& box) {
  require_box(box, v.size());
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::clamp(v[i], box.lower[i], box.upper[i]);
  return out;
}

Vector saturated_control_box(std::span<const double> x, double k, const Matrix& H,
                             const BoxControl& box) {
  return clamp_to_box(scaled(H * x, -k), box);
}

Vector degree_of_saturation(std::span<const double> x, double k, const Matrix& H,
                            const BoxControl& box) {
  const Vector v = scaled(H * x, -k);
  require_box(box, v.size());
  Vector theta(v.size(), 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < box.lower[i]) {
      theta[i] = box.lower[i] / v[i];
    } else if (v[i] > box.upper[i]) {
      theta[i] = box.upper[i] / v[i];
    }
  }
  return theta;
}

Vector theta_lower_bounds(double k, const Matrix& H, const Matrix& P, double xi,
                          const BoxControl& box) {
  require_box(box, H.rows());
  const Matrix Q = symmetrized(inverse(P));
  Vector theta(H.rows(), 1.0);
  for (std::size_t i = 0; i < H.rows(); ++i) {
    const Vector hi = H.row(i);
    const double h = k * std::sqrt(xi * quad_form(Q, hi));
    double t = 1.0;
    if (h > box.upper[i]) t = std::min(t, box.upper[i] / h);
    if (h > -box.lower[i]) t = std::min(t, -box.lower[i] / h);
    theta[i] = t;
  }
  return theta;
}

PolytopicEmbedding enumerate_embedding(double k, const Matrix& H, std::span<const double> theta_lower,
                                       const Network& network) {
  const std::size_t m = network.controls();
  if (m > kMaxVertexControls) {
    throw Error(ErrorCode::VertexExplosion,
                std::to_string(m) + " controls exceed the 2^" +
                    std::to_string(kMaxVertexControls) + " vertex cap");
  }
  if (H.rows() != m || theta_lower.size() != m || H.cols() != network.buffers()) {
    throw Error(ErrorCode::DimensionMismatch, "H / theta_lower do not match B");
  }
  PolytopicEmbedding emb;
  emb.k = k;
  emb.B = network.B;
  emb.H = H;
  emb.theta_lower.assign(theta_lower.begin(), theta_lower.end());
  emb.psi_theta.resize(m);
  for (std::size_t i = 0; i < m; ++i) emb.psi_theta[i] = 1.0 / theta_lower[i];

  const std::size_t count = std::size_t{1} << m;
  emb.gammas.reserve(count);
  emb.A_list.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    Vector gamma(m);
    for (std::size_t i = 0; i < m; ++i) gamma[i] = ((j >> i) & 1U) ? theta_lower[i] : 1.0;
    emb.A_list.push_back(network.B * Matrix::diagonal(gamma) * H * (-k));
    emb.gammas.push_back(std::move(gamma));
  }
  return emb;
}

bool in_envelope(std::span<const double> x, const PolytopicEmbedding& emb, const BoxControl& box,
                 double tol) {
  const Vector theta = degree_of_saturation(x, emb.k, emb.H, box);
  for (std::size_t i = 0; i < theta.size(); ++i)
    if (theta[i] < emb.theta_lower[i] - tol) return false;
  return true;
}

Vector sigma_weights(std::span<const double> x, const PolytopicEmbedding& emb, const BoxControl& box) {
  const Vector theta = degree_of_saturation(x, emb.k, emb.H, box);
  const std::size_t m = theta.size();
  Vector t(m, 1.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double lo = emb.theta_lower[i];
    if (theta[i] < lo - 1e-12) {
      throw Error(ErrorCode::OutsideEnvelope,
                  "theta_" + std::to_string(i) + " below its lower bound");
    }
    if (lo < 1.0) t[i] = std::clamp((theta[i] - lo) / (1.0 - lo), 0.0, 1.0);
  }
  Vector sigma(emb.vertex_count());
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    double s = 1.0;
    for (std::size_t i = 0; i < m; ++i) s *= ((j >> i) & 1U) ? 1.0 - t[i] : t[i];
    sigma[j] = s;
  }
  return sigma;
}

Matrix Mj_matrix(const Matrix& Q, const Matrix& A, double alpha, const Matrix& R_w) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::AlphaNonPositive, "alpha must be positive");
  const Matrix qat = Q * A.transpose();
  return symmetrized(qat + qat.transpose() + Q * alpha + inverse(R_w) * (1.0 / alpha));
}

double vertex_max_eig(const Matrix& Q, const PolytopicEmbedding& emb, double alpha,
                      const Matrix& R_w_inverse, Exec exec) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::AlphaNonPositive, "alpha must be positive");
  const Matrix shift = Q * alpha + R_w_inverse * (1.0 / alpha);
  return max_over(
      emb.vertex_count(),
      [&](std::size_t j) {
        const Matrix qat = Q * emb.A_list[j].transpose();
        return lambda_max(symmetrized(qat + qat.transpose() + shift));
      },
      exec);
}

Theorem6Certificate check_theorem6(const Matrix& Q, const PolytopicEmbedding& emb, const Matrix& R_w,
                                   double tol, Exec exec) {
  const Matrix rw_inv = symmetrized(inverse(R_w));
  double spread = 0.0;
  for (const Matrix& a : emb.A_list) {
    const Matrix qat = Q * a.transpose();
    spread = std::max(spread, std::abs(lambda_min(symmetrized(qat + qat.transpose()))));
  }
  const double alpha_lo = 1e-6;
  const double alpha_hi = 2.0 * spread / lambda_min(Q) + 1.0;
  const ScalarMin best = golden_section_minimize(
      [&](double alpha) { return vertex_max_eig(Q, emb, alpha, rw_inv, exec); }, alpha_lo,
      alpha_hi, 1e-8);
  Theorem6Certificate cert;
  cert.alpha_star = best.x;
  cert.worst_eig = best.value;
  cert.feasible = best.value < -tol;
  return cert;
}

std::vector<EigenPair> theorem5_negative_eigenpairs(const Matrix& M, double tol) {
  const EigenResult eig = sym_eig(M);
  std::vector<EigenPair> out;
  for (std::size_t i = 0; i < eig.values.size(); ++i)
    if (eig.values[i] < -tol) out.push_back({eig.values[i], eig.vectors.col(i)});
  return out;
}

bool Theorem5Evidence::falsified() const {
  return std::any_of(regions.begin(), regions.end(),
                     [](const RegionEvidence& r) { return r.in_span < r.samples; });
}

std::vector<Vector> sample_envelope(const PolytopicEmbedding& emb, const BoxControl& box,
                                    std::size_t count, std::uint64_t seed) {
  const std::size_t n = emb.B.rows();
  const std::size_t m = emb.B.cols();
  // x = B H x = -B y / k with y = -kHx bounded by the scaled box.
  Vector half_width(n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < m; ++i) {
      const double reach = std::max(-box.lower[i], box.upper[i]) * emb.psi_theta[i];
      half_width[r] += std::abs(emb.B(r, i)) * reach / emb.k;
    }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Vector> out;
  out.reserve(count);
  const std::size_t max_draws = 1000 * count + 1000;
  for (std::size_t draw = 0; draw < max_draws && out.size() < count; ++draw) {
    Vector x(n);
    for (std::size_t r = 0; r < n; ++r) x[r] = half_width[r] * unit(rng);
    if (in_envelope(x, emb, box, 0.0)) out.push_back(std::move(x));
  }
  return out;
}

Theorem5Evidence theorem5_sampled_check(const PolytopicEmbedding& emb, const BoxControl& box,
                                        const Matrix& Q, const Matrix& R_w, double alpha,
                                        std::size_t samples, std::uint64_t seed, Exec exec) {
  const std::size_t count = emb.vertex_count();
  const std::size_t n = emb.B.rows();

  // Orthonormal basis of the negative eigenspace of each M_j.
  std::vector<Matrix> span_basis(count);
  for (std::size_t j = 0; j < count; ++j) {
    const auto pairs = theorem5_negative_eigenpairs(Mj_matrix(Q, emb.A_list[j], alpha, R_w));
    Matrix v(n, pairs.size());
    for (std::size_t c = 0; c < pairs.size(); ++c) v.set_col(c, pairs[c].vector);
    span_basis[j] = std::move(v);
  }

  const std::vector<Vector> xs = sample_envelope(emb, box, samples, seed);
  constexpr std::size_t kNoRegion = static_cast<std::size_t>(-1);
  std::vector<std::size_t> region(xs.size(), kNoRegion);
  std::vector<unsigned char> inside(xs.size(), 0);

  for_each_index(
      xs.size(),
      [&](std::size_t s) {
        const Vector& x = xs[s];
        const Vector theta = degree_of_saturation(x, emb.k, emb.H, box);
        for (std::size_t j = 0; j < count; ++j) {
          bool match = true;
          for (std::size_t i = 0; i < theta.size() && match; ++i)
            match = std::abs(theta[i] - emb.gammas[j][i]) <= kRegionTol;
          if (!match) continue;
          region[s] = j;
          const Matrix& v = span_basis[j];
          Vector residual = x;
          for (std::size_t c = 0; c < v.cols(); ++c) {
            const Vector vc = v.col(c);
            residual = axpy(-dot(vc, x), vc, residual);
          }
          inside[s] = norm2(residual) <= kSpanTol * norm2(x) ? 1 : 0;
          break;
        }
      },
      exec);

  Theorem5Evidence ev;
  ev.regions.resize(count);
  ev.total = xs.size();
  for (std::size_t s = 0; s < xs.size(); ++s) {
    if (region[s] == kNoRegion) {
      ++ev.unclassified;
      continue;
    }
    ++ev.regions[region[s]].samples;
    ev.regions[region[s]].in_span += inside[s];
  }
  return ev;
}

}  // namespace invflow
