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

#include "invflow/approx_error.hpp"

#include <cmath>
#include <limits>

#include "invflow/error.hpp"
#include "invflow/numerics.hpp"

namespace invflow {

namespace {

Matrix boundary_solution(const Matrix& A, const Matrix& rw_inv, double alpha) {
  const std::size_t n = A.rows();
  const Matrix shifted = A + Matrix::identity(n) * (0.5 * alpha);
  return lyap_solve(shifted, rw_inv * (-1.0 / alpha));
}

}  // namespace

MinDetResult min_det_invariant(const Matrix& A, const Matrix& R_w) {
  if (!A.is_square() || A.rows() != R_w.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "vertex matrix and R_w differ in size");
  }
  const double abscissa = spectral_abscissa(A);  // throws UnstableVertex
  const Matrix rw_inv = symmetrized(inverse(R_w));
  const double lo = 1e-6;
  const double hi = 2.0 * std::abs(abscissa) * (1.0 - 1e-6);
  if (!(hi > lo)) {
    throw Error(ErrorCode::UnstableVertex, "stability margin too small for the alpha bracket");
  }

  auto log_det = [&](double alpha) {
    try {
      const Matrix q = boundary_solution(A, rw_inv, alpha);
      const double d = determinant(q);
      if (!(d > 0.0) || !is_positive_definite(q)) return std::numeric_limits<double>::infinity();
      return std::log(d);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  const ScalarMin best = golden_section_minimize(log_det, lo, hi, 1e-8);

  MinDetResult r;
  r.alpha = best.x;
  r.Q = boundary_solution(A, rw_inv, r.alpha);
  r.det_Q = determinant(r.Q);
  const Matrix qat = r.Q * A.transpose();
  const Matrix m = qat + qat.transpose() + r.Q * r.alpha + rw_inv * (1.0 / r.alpha);
  r.boundary_residual = frobenius_norm(m);
  r.boundary_candidate = A.rows() > 1;
  return r;
}

double approximation_error(const Matrix& Q_under, const Matrix& Q_over) {
  const double under = 1.0 / det_and_inverse(Q_under).determinant;
  const double over = 1.0 / det_and_inverse(Q_over).determinant;
  return (over - under) / under;
}

double error_vs_target(const Matrix& P, const Matrix& Q_over) {
  const double target = det_and_inverse(P).determinant;
  const double over = 1.0 / det_and_inverse(Q_over).determinant;
  return (target - over) / over;
}

}  // namespace invflow
