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

#include "invflow/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "invflow/error.hpp"

namespace invflow {

namespace {

void require_square(const Matrix& s, const char* what) {
  if (!s.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be square");
  }
}

void require_finite(const Matrix& s, const char* what) {
  if (!s.all_finite()) {
    throw Error(ErrorCode::NonFinite, std::string(what) + " has non-finite entries");
  }
}

void require_symmetric(const Matrix& s, const char* what) {
  require_square(s, what);
  require_finite(s, what);
  if (asymmetry(s) > kSymmetryTol * frobenius_norm(s)) {
    throw Error(ErrorCode::NonSymmetric, std::string(what) + " is not symmetric");
  }
}

struct LuFactor {
  Matrix lu;
  std::vector<std::size_t> perm;
  int parity = 1;
};

// Doolittle LU with partial pivoting. Pivots below tol * ||S||_F are singular.
LuFactor lu_factor(const Matrix& s, double tol, ErrorCode on_singular) {
  require_square(s, "LU input");
  require_finite(s, "LU input");
  const std::size_t n = s.rows();
  LuFactor f{s, std::vector<std::size_t>(n), 1};
  std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
  const double threshold = tol * frobenius_norm(s);
  Matrix& a = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
    if (!(std::abs(a(piv, k)) > threshold)) {
      throw Error(on_singular, "pivot " + std::to_string(k) + " below tolerance");
    }
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(piv, c));
      std::swap(f.perm[k], f.perm[piv]);
      f.parity = -f.parity;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double m = a(r, k) / a(k, k);
      a(r, k) = m;
      if (m == 0.0) continue;
      for (std::size_t c = k + 1; c < n; ++c) a(r, c) -= m * a(k, c);
    }
  }
  return f;
}

Vector lu_solve_vector(const LuFactor& f, std::span<const double> b) {
  const std::size_t n = f.lu.rows();
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) acc -= f.lu(i, j) * y[j];
    y[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = y[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= f.lu(i, j) * y[j];
    y[i] = acc / f.lu(i, i);
  }
  return y;
}

Matrix lu_solve_matrix(const LuFactor& f, const Matrix& rhs) {
  Matrix out(rhs.rows(), rhs.cols());
  for (std::size_t c = 0; c < rhs.cols(); ++c) out.set_col(c, lu_solve_vector(f, rhs.col(c)));
  return out;
}

constexpr double kSingularTol = 1e-12;

}  // namespace

EigenResult sym_eig(const Matrix& s) {
  require_symmetric(s, "sym_eig input");
  const std::size_t n = s.rows();
  Matrix a = symmetrized(s);
  Matrix v = Matrix::identity(n);
  const double scale = frobenius_norm(a);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-36 * scale * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  EigenResult out{Vector(n), Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, i) = v(k, order[i]);
  }
  return out;
}

double lambda_max(const Matrix& s) { return sym_eig(s).values.back(); }
double lambda_min(const Matrix& s) { return sym_eig(s).values.front(); }

Matrix cholesky(const Matrix& s) {
  require_symmetric(s, "cholesky input");
  const std::size_t n = s.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) {
      throw Error(ErrorCode::NotPositiveDefinite,
                  "non-positive pivot at column " + std::to_string(j));
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = 0.5 * (s(i, j) + s(j, i));
      for (std::size_t k = 0; k < j; ++k) acc -= l(i, k) * l(j, k);
      l(i, j) = acc / ljj;
    }
  }
  return l;
}

bool is_positive_definite(const Matrix& s) {
  try {
    (void)cholesky(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

Vector forward_substitute(const Matrix& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = b[i];
    for (std::size_t k = 0; k < i; ++k) acc -= lower(i, k) * y[k];
    y[i] = acc / lower(i, i);
  }
  return y;
}

Vector backward_substitute_transposed(const Matrix& lower, std::span<const double> y) {
  const std::size_t n = lower.rows();
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = y[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= lower(k, i) * x[k];
    x[i] = acc / lower(i, i);
  }
  return x;
}

PencilMax pencil_max_eig(const Matrix& phi, const Matrix& r) {
  require_symmetric(phi, "pencil matrix");
  require_symmetric(r, "pencil weight");
  if (phi.rows() != r.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "pencil matrices differ in size");
  }
  const std::size_t n = phi.rows();
  const Matrix l = cholesky(r);

  // C = L^{-1} phi L^{-T}
  Matrix x(n, n);
  for (std::size_t c = 0; c < n; ++c) x.set_col(c, forward_substitute(l, phi.col(c)));
  const Matrix xt = x.transpose();
  Matrix c(n, n);
  for (std::size_t col = 0; col < n; ++col) c.set_col(col, forward_substitute(l, xt.col(col)));

  const EigenResult eig = sym_eig(symmetrized(c));
  PencilMax out;
  out.lambda = eig.values.back();
  out.vector = backward_substitute_transposed(l, eig.vectors.col(n - 1));

  // Deterministic sign: largest-magnitude component positive.
  std::size_t lead = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(out.vector[i]) > std::abs(out.vector[lead]) + 1e-14) lead = i;
  if (out.vector[lead] < 0.0)
    for (double& w : out.vector) w = -w;
  return out;
}

namespace {

// Kronecker solve of AQ + QA^T = C without the absolute residual check.
Matrix lyap_kron(const Matrix& a, const Matrix& c) {
  require_square(a, "Lyapunov A");
  require_finite(a, "Lyapunov A");
  require_finite(c, "Lyapunov C");
  const std::size_t n = a.rows();
  if (c.rows() != n || c.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "Lyapunov C does not match A");
  }
  // Row-major vec: index i*n + j.  (AQ)_ij = sum_k A_ik Q_kj,  (QA^T)_ij = sum_k Q_ik A_jk.
  const std::size_t nn = n * n;
  Matrix k(nn, nn);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i * n + j;
      for (std::size_t m = 0; m < n; ++m) {
        k(row, m * n + j) += a(i, m);
        k(row, i * n + m) += a(j, m);
      }
    }
  Vector rhs(c.data().begin(), c.data().end());
  const LuFactor f = lu_factor(k, kSingularTol, ErrorCode::SingularLyapunov);
  const Vector q = lu_solve_vector(f, rhs);
  return symmetrized(Matrix(n, n, q));
}

double lyap_residual(const Matrix& a, const Matrix& q, const Matrix& c) {
  return frobenius_norm(a * q + q * a.transpose() - c);
}

}  // namespace

Matrix lyap_solve(const Matrix& a, const Matrix& c) {
  Matrix out = lyap_kron(a, c);
  if (!(lyap_residual(a, out, c) <= 1e-9 * (1.0 + frobenius_norm(c)))) {
    throw Error(ErrorCode::SingularLyapunov, "residual check failed");
  }
  return out;
}

DetInverse det_and_inverse(const Matrix& s) {
  const LuFactor f = lu_factor(s, kSingularTol, ErrorCode::Singular);
  double det = static_cast<double>(f.parity);
  for (std::size_t i = 0; i < s.rows(); ++i) det *= f.lu(i, i);
  return {det, lu_solve_matrix(f, Matrix::identity(s.rows()))};
}

double determinant(const Matrix& s) {
  const LuFactor f = lu_factor(s, kSingularTol, ErrorCode::Singular);
  double det = static_cast<double>(f.parity);
  for (std::size_t i = 0; i < s.rows(); ++i) det *= f.lu(i, i);
  return det;
}

Matrix inverse(const Matrix& s) { return det_and_inverse(s).inverse; }

Matrix solve(const Matrix& s, const Matrix& rhs) {
  if (rhs.rows() != s.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side rows differ");
  }
  return lu_solve_matrix(lu_factor(s, kSingularTol, ErrorCode::Singular), rhs);
}

bool is_hurwitz(const Matrix& a) {
  const std::size_t n = a.rows();
  const Matrix c = Matrix::identity(n) * -1.0;
  try {
    // Near the stability boundary ||X|| grows like 1/distance, so the
    // residual is judged relative to ||A|| ||X||.
    const Matrix x = lyap_kron(a, c);
    const double scale = frobenius_norm(c) + 2.0 * frobenius_norm(a) * frobenius_norm(x);
    if (!(lyap_residual(a, x, c) <= 1e-9 * scale)) return false;
    return is_positive_definite(x);
  } catch (const Error&) {
    return false;
  }
}

double spectral_abscissa(const Matrix& a, double rel_tol) {
  require_square(a, "abscissa input");
  if (!is_hurwitz(a)) {
    throw Error(ErrorCode::UnstableVertex, "matrix has an eigenvalue with nonnegative real part");
  }
  const std::size_t n = a.rows();
  const Matrix eye = Matrix::identity(n);
  double lo = 0.0;                       // A + lo*I Hurwitz
  double hi = frobenius_norm(a) + 1.0;   // A + hi*I certainly not
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (is_hurwitz(a + eye * mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return -0.5 * (lo + hi);
}

ScalarMin golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                  double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  const double mid = 0.5 * (a + b);
  const double fm = f(mid);
  ++evals;
  ScalarMin best{mid, fm, evals};
  if (fc < best.value) best = {c, fc, evals};
  if (fd < best.value) best = {d, fd, evals};
  return best;
}

}  // namespace invflow
