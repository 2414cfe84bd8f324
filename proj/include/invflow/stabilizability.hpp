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

#include <cstddef>
#include <vector>

#include "invflow/matrix.hpp"
#include "invflow/model.hpp"
#include "invflow/parallel.hpp"

namespace invflow {

/// B = [basis | N] up to a column permutation.
struct BasisSplit {
  std::vector<std::size_t> basis_indices;     ///< n columns of B forming the basis, ascending
  std::vector<std::size_t> nonbasis_indices;  ///< the remaining m-n columns, ascending
  Matrix basis;                               ///< n x n, invertible
  Matrix N;                                   ///< n x (m-n)

  /// Split coordinate s (basis components first) -> original control index.
  std::size_t original_index(std::size_t s) const {
    return s < basis_indices.size() ? basis_indices[s] : nonbasis_indices[s - basis_indices.size()];
  }
};

struct GainData {
  Matrix M;    ///< (m-n) x n best response: u_N = -M w
  Matrix H;    ///< m x n right inverse of B
  Matrix Phi;  ///< H^T R_u H
};

enum class Verdict { Yes, No, Marginal };

const char* to_string(Verdict v);

struct StabilizabilityReport {
  Verdict verdict = Verdict::No;
  bool stabilizable = false;
  double lambda_max = 0.0;
  Vector w_star;       ///< worst demand direction, w^T R_w w = 1
  double value = 0.0;  ///< w*^T Phi w*
  double k_hat = 0.0;  ///< 1 / sqrt(value)
};

/// Half-width of the band around 1 reported as Marginal.
inline constexpr double kMarginalBand = 1e-12;

/// Leftmost n independent columns of B (pivoted elimination). Throws
/// RankDeficientB.
BasisSplit split_basis(const Network& network);

/// M = (G^T R G)^{-1} G^T R E with G = [-basis^{-1} N; I], E = [basis^{-1}; 0]
/// and R the control weight in split order. Empty (0 x n) when m = n.
Matrix best_response_matrix(const BasisSplit& split, const Matrix& R_u);

/// H = [basis^{-1} + basis^{-1} N M; -M] with rows returned to the original
/// control ordering. Satisfies B H = I.
Matrix gain_matrix(const BasisSplit& split, const Matrix& M);

/// Phi = H^T R_u H (symmetrized).
Matrix phi_matrix(const Matrix& H, const Matrix& R_u);

/// split -> M -> H -> Phi in one call.
GainData compute_gains(const Network& network, const Matrix& R_u);

/// Eigenvalue test on the pencil (Phi, R_w): stabilizable iff
/// lambda_max < 1 - kMarginalBand.
StabilizabilityReport decide_stabilizable(const Matrix& Phi, const Matrix& R_w);

/// Control weight used when the bound is a box: the largest centred
/// axis-aligned ellipsoid inside the box, R = diag(1 / rho_i^2) with
/// rho_i = min(upper_i, -lower_i). A "stabilizable" verdict computed with it
/// is sufficient for the box (the ellipsoid is an inner approximation).
Matrix inscribed_ellipsoid_weight(const BoxControl& box);

/// Brute-force value of max_{w^T R_w w = 1} min_{u : Bu = w} u^T R_u u.
/// Sweeps `grid_resolution` directions on the demand ellipsoid (n = 2; the
/// two points +-w for n = 1) and minimizes over the free controls u_N by
/// cyclic coordinate descent with exact parabolic line steps from u_N = 0.
/// Independent of M, H and Phi. Throws UnsupportedDimension for n > 2.
double oracle_minmax(const Network& network, const Matrix& R_u, const Matrix& R_w,
                     std::size_t grid_resolution, Exec exec = Exec::OpenMP);

/// The inner minimization of the oracle for one demand vector.
double oracle_inner_min(const BasisSplit& split, const Matrix& basis_inverse, const Matrix& R_u,
                        std::span<const double> w);

}  // namespace invflow
