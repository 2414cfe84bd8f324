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

#include "invflow/ellipsoidal.hpp"

#include <cmath>

#include "invflow/error.hpp"
#include "invflow/numerics.hpp"

namespace invflow {

Matrix p_rwinv_p(const Matrix& P, const Matrix& R_w) {
  const Matrix l = cholesky(R_w);
  // Y = L^{-1} P, then P R_w^{-1} P = Y^T Y.
  Matrix y(P.rows(), P.cols());
  for (std::size_t c = 0; c < P.cols(); ++c) y.set_col(c, forward_substitute(l, P.col(c)));
  return symmetrized(y.transpose() * y);
}

bool quartic_condition(std::span<const double> x, const Matrix& P, const Matrix& R_w, double k) {
  const double v = quad_form(P, x);
  const double g = quad_form(p_rwinv_p(P, R_w), x);
  return k * k * v * v - g > 0.0;
}

EllipsoidalCertificate gain_bounds(const Matrix& P, const Matrix& R_w, const Matrix& Phi, double xi,
                                   std::optional<double> k, double tol) {
  EllipsoidalCertificate c;
  c.k_min_sq = pencil_max_eig(P, R_w).lambda;
  c.lambda_p_phi = pencil_max_eig(Phi, P).lambda;
  c.k = k.value_or(std::sqrt(c.k_min_sq));
  c.xi = xi;
  const double k2 = c.k * c.k;
  c.xi_max = 1.0 / (k2 * c.lambda_p_phi);
  c.saturated_ok = k2 >= c.k_min_sq * (1.0 - tol);
  c.target_in_linear_region = k2 * c.lambda_p_phi <= 1.0 + tol;
  c.linear_ok = c.saturated_ok && k2 * xi * c.lambda_p_phi <= 1.0 + tol;
  return c;
}

Vector saturated_control(std::span<const double> x, double k, const Matrix& H, const Matrix& R_u) {
  const Vector hx = H * x;
  const double effort = quad_form(R_u, hx);  // x^T Phi x
  if (k * k * effort <= 1.0) return scaled(hx, -k);
  return scaled(hx, -1.0 / std::sqrt(effort));
}

bool remark_lmi(const Matrix& P, const Matrix& R_w, double k, double tol) {
  const Matrix m = P * (2.0 * k - 1.0) - p_rwinv_p(P, R_w);
  return lambda_min(symmetrized(m)) >= -tol;
}

bool contains_PiR(const Matrix& P, const Matrix& R_w, double k, double tol) {
  return lambda_max(symmetrized(P - R_w * (k * k))) <= tol;
}

}  // namespace invflow
