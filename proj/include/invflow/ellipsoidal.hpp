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

#pragma once

#include <optional>
#include <span>

#include "invflow/matrix.hpp"

namespace invflow {

/// Default threshold for PSD / negative-definite verdicts. The CLI lets
/// INVFLOW_TOL override it.
inline constexpr double kVerdictTol = 1e-10;

/// Gain admissibility for the ellipsoidal control bound, evaluated at gain k.
struct EllipsoidalCertificate {
  double k = 0.0;
  double k_min_sq = 0.0;   ///< lambda_max(R_w^{-1} P)
  double lambda_p_phi = 0.0;  ///< lambda_max(P^{-1} Phi)
  double xi_max = 0.0;     ///< 1 / (k^2 lambda_max(P^{-1} Phi))
  double xi = 1.0;
  bool saturated_ok = false;  ///< k^2 >= k_min_sq
  bool linear_ok = false;     ///< saturated_ok and k^2 xi lambda_max(P^{-1} Phi) <= 1
  bool target_in_linear_region = false;  ///< k^2 lambda_max(P^{-1} Phi) <= 1, i.e. Pi inside X
};

/// k^2 (x^T P x)^2 - x^T P R_w^{-1} P x > 0, evaluated exactly as written.
bool quartic_condition(std::span<const double> x, const Matrix& P, const Matrix& R_w, double k);

/// Certificate at gain k; when k is absent the minimal admissible gain
/// sqrt(lambda_max(R_w^{-1} P)) is used, so linear_ok then answers whether
/// any admissible k exists for this xi.
EllipsoidalCertificate gain_bounds(const Matrix& P, const Matrix& R_w, const Matrix& Phi, double xi,
                                   std::optional<double> k = std::nullopt,
                                   double tol = kVerdictTol);

/// -kHx inside the control ellipsoid (k^2 x^T Phi x <= 1); otherwise the
/// radial projection -Hx / sqrt(x^T H^T R_u H x) onto its boundary.
Vector saturated_control(std::span<const double> x, double k, const Matrix& H, const Matrix& R_u);

/// (2k - 1) P - P R_w^{-1} P is PSD (min eigenvalue >= -tol).
bool remark_lmi(const Matrix& P, const Matrix& R_w, double k, double tol = kVerdictTol);

/// Pi contains {x : k^2 x^T R_w x <= 1}: lambda_max(P - k^2 R_w) <= tol.
bool contains_PiR(const Matrix& P, const Matrix& R_w, double k, double tol = kVerdictTol);

/// P R_w^{-1} P via the Cholesky factor of R_w.
Matrix p_rwinv_p(const Matrix& P, const Matrix& R_w);

}  // namespace invflow
