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

#include "invflow/matrix.hpp"

namespace invflow {

/// Smallest-determinant ellipsoid {x : x^T Q^{-1} x <= 1} on the boundary of
/// Q A^T + A Q + alpha Q + (1/alpha) R_w^{-1} < 0 for one vertex matrix A.
struct MinDetResult {
  Matrix Q;
  double alpha = 0.0;
  double det_Q = 0.0;
  double boundary_residual = 0.0;  ///< ||M(Q, alpha)||_F, zero up to roundoff
  /// True for n > 1: the per-alpha boundary solution is a feasible-boundary
  /// candidate, not a proven global determinant minimizer.
  bool boundary_candidate = false;
};

/// For each alpha in (1e-6, 2 |abscissa(A)| (1 - 1e-6)) solves
///   (A + alpha/2 I) Q + Q (A + alpha/2 I)^T = -(1/alpha) R_w^{-1}
/// and minimizes det Q over alpha by golden-section search (tolerance 1e-8).
/// Throws UnstableVertex when A is not Hurwitz.
MinDetResult min_det_invariant(const Matrix& A, const Matrix& R_w);

/// (det(Q_over^{-1}) - det(Q_under^{-1})) / det(Q_under^{-1}).
double approximation_error(const Matrix& Q_under, const Matrix& Q_over);

/// (det(P) - det(Q_over^{-1})) / det(Q_over^{-1}): target volume measured
/// against the invariant ellipsoid of the fully saturated vertex.
double error_vs_target(const Matrix& P, const Matrix& Q_over);

}  // namespace invflow
