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

#include "invflow/stabilizability.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "invflow/error.hpp"
#include "invflow/numerics.hpp"

namespace invflow {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "true";
    case Verdict::No: return "false";
    case Verdict::Marginal: return "marginal";
  }
  return "false";
}

BasisSplit split_basis(const Network& network) {
  const Matrix& B = network.B;
  const std::size_t n = B.rows();
  const std::size_t m = B.cols();
  const double norm = frobenius_norm(B);
  const double tol = kRankTol * norm;

  Matrix w = B;
  std::vector<bool> row_used(n, false);
  BasisSplit split;
  for (std::size_t c = 0; c < m && split.basis_indices.size() < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = 0; r < n; ++r)
      if (!row_used[r] && (piv == n || std::abs(w(r, c)) > std::abs(w(piv, c)))) piv = r;
    if (piv == n || !(std::abs(w(piv, c)) > tol)) continue;
    row_used[piv] = true;
    split.basis_indices.push_back(c);
    for (std::size_t r = 0; r < n; ++r) {
      if (row_used[r]) continue;
      const double f = w(r, c) / w(piv, c);
      for (std::size_t k = c; k < m; ++k) w(r, k) -= f * w(piv, k);
    }
  }
  if (split.basis_indices.size() != n) {
    throw Error(ErrorCode::RankDeficientB, "B has fewer than n independent columns");
  }

  std::vector<bool> in_basis(m, false);
  for (std::size_t c : split.basis_indices) in_basis[c] = true;
  for (std::size_t c = 0; c < m; ++c)
    if (!in_basis[c]) split.nonbasis_indices.push_back(c);

  split.basis = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) split.basis.set_col(j, B.col(split.basis_indices[j]));
  split.N = Matrix(n, m - n);
  for (std::size_t j = 0; j < m - n; ++j) split.N.set_col(j, B.col(split.nonbasis_indices[j]));

  if (!(std::abs(determinant(split.basis)) > 1e-9 * std::pow(norm, static_cast<double>(n)))) {
    throw Error(ErrorCode::RankDeficientB, "basis is numerically singular");
  }
  return split;
}

namespace {

Matrix permuted_weight(const BasisSplit& split, const Matrix& R_u) {
  const std::size_t m = R_u.rows();
  Matrix r(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) r(i, j) = R_u(split.original_index(i), split.original_index(j));
  return r;
}

}  // namespace

Matrix best_response_matrix(const BasisSplit& split, const Matrix& R_u) {
  const std::size_t n = split.basis.rows();
  const std::size_t free = split.N.cols();
  const std::size_t m = n + free;
  if (R_u.rows() != m || R_u.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "R_u does not match the control count");
  }
  if (free == 0) return Matrix(0, n);

  const Matrix basis_inv = inverse(split.basis);
  const Matrix binv_n = basis_inv * split.N;

  Matrix G(m, free);
  Matrix E(m, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < free; ++j) G(i, j) = -binv_n(i, j);
    for (std::size_t j = 0; j < n; ++j) E(i, j) = basis_inv(i, j);
  }
  for (std::size_t j = 0; j < free; ++j) G(n + j, j) = 1.0;

  const Matrix R = permuted_weight(split, R_u);
  const Matrix GtR = G.transpose() * R;
  const Matrix inner = GtR * G;
  return solve(inner, GtR * E);
}

Matrix gain_matrix(const BasisSplit& split, const Matrix& M) {
  const std::size_t n = split.basis.rows();
  const std::size_t free = split.N.cols();
  const Matrix basis_inv = inverse(split.basis);
  Matrix top = basis_inv;
  if (free > 0) top += basis_inv * split.N * M;

  Matrix H(n + free, n);
  for (std::size_t s = 0; s < n + free; ++s) {
    const std::size_t row = split.original_index(s);
    for (std::size_t j = 0; j < n; ++j) H(row, j) = s < n ? top(s, j) : -M(s - n, j);
  }
  return H;
}

Matrix phi_matrix(const Matrix& H, const Matrix& R_u) {
  if (R_u.rows() != H.rows() || !R_u.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "R_u does not match H");
  }
  return symmetrized(H.transpose() * R_u * H);
}

GainData compute_gains(const Network& network, const Matrix& R_u) {
  const BasisSplit split = split_basis(network);
  GainData g;
  g.M = best_response_matrix(split, R_u);
  g.H = gain_matrix(split, g.M);
  g.Phi = phi_matrix(g.H, R_u);
  return g;
}

StabilizabilityReport decide_stabilizable(const Matrix& Phi, const Matrix& R_w) {
  const PencilMax top = pencil_max_eig(Phi, R_w);
  StabilizabilityReport r;
  r.lambda_max = top.lambda;
  r.w_star = top.vector;
  r.value = quad_form(Phi, r.w_star);
  r.k_hat = 1.0 / std::sqrt(r.lambda_max);
  if (r.lambda_max < 1.0 - kMarginalBand) {
    r.verdict = Verdict::Yes;
  } else if (r.lambda_max > 1.0 + kMarginalBand) {
    r.verdict = Verdict::No;
  } else {
    r.verdict = Verdict::Marginal;
  }
  r.stabilizable = r.verdict == Verdict::Yes;
  return r;
}

Matrix inscribed_ellipsoid_weight(const BoxControl& box) {
  Vector d(box.lower.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double rho = std::min(box.upper[i], -box.lower[i]);
    d[i] = 1.0 / (rho * rho);
  }
  return Matrix::diagonal(d);
}

double oracle_inner_min(const BasisSplit& split, const Matrix& basis_inverse, const Matrix& R_u,
                        std::span<const double> w) {
  const std::size_t n = split.basis.rows();
  const std::size_t free = split.N.cols();
  const std::size_t m = n + free;

  Vector u(m);
  Vector rhs(n);
  auto objective = [&](std::span<const double> u_free) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = w[i];
      for (std::size_t j = 0; j < free; ++j) acc -= split.N(i, j) * u_free[j];
      rhs[i] = acc;
    }
    const Vector u_basis = basis_inverse * rhs;
    for (std::size_t s = 0; s < n; ++s) u[split.basis_indices[s]] = u_basis[s];
    for (std::size_t j = 0; j < free; ++j) u[split.nonbasis_indices[j]] = u_free[j];
    return quad_form(R_u, u);
  };

  Vector z(free, 0.0);
  double f0 = objective(z);
  for (int sweep = 0; sweep < 20000 && free > 0; ++sweep) {
    double largest_step = 0.0;
    for (std::size_t j = 0; j < free; ++j) {
      // f along coordinate j is an exact parabola a t^2 + b t + f0.
      const double h = 1.0 + std::abs(z[j]);
      z[j] += h;
      const double fp = objective(z);
      z[j] -= 2.0 * h;
      const double fm = objective(z);
      z[j] += h;
      const double curv = (fp + fm - 2.0 * f0) / (2.0 * h * h);
      const double slope = (fp - fm) / (2.0 * h);
      if (!(curv > 0.0)) continue;
      const double step = -slope / (2.0 * curv);
      z[j] += step;
      const double f_new = objective(z);
      if (f_new <= f0) {
        f0 = f_new;
        largest_step = std::max(largest_step, std::abs(step));
      } else {
        z[j] -= step;
      }
    }
    if (largest_step < 1e-12) break;
  }
  return f0;
}

double oracle_minmax(const Network& network, const Matrix& R_u, const Matrix& R_w,
                     std::size_t grid_resolution, Exec exec) {
  const std::size_t n = network.buffers();
  if (n > 2) {
    throw Error(ErrorCode::UnsupportedDimension, "oracle supports at most two buffers");
  }
  const BasisSplit split = split_basis(network);
  const Matrix basis_inv = inverse(split.basis);

  if (n == 1) {
    const double w = 1.0 / std::sqrt(R_w(0, 0));
    const double plus[1] = {w};
    const double minus[1] = {-w};
    return std::max(oracle_inner_min(split, basis_inv, R_u, plus),
                    oracle_inner_min(split, basis_inv, R_u, minus));
  }

  // Directions (cos t, sin t) radially scaled onto the ellipsoid boundary.
  auto value_at = [&](std::size_t i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) /
                     static_cast<double>(grid_resolution);
    double w[2] = {std::cos(t), std::sin(t)};
    const double scale = 1.0 / std::sqrt(quad_form(R_w, w));
    w[0] *= scale;
    w[1] *= scale;
    return oracle_inner_min(split, basis_inv, R_u, w);
  };
  return max_over(grid_resolution, value_at, exec);
}

}  // namespace invflow
