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

#include <functional>
#include <span>

#include "invflow/matrix.hpp"

namespace invflow {

/// Eigenvalues ascending; vectors(:, i) is the unit eigenvector of values[i].
struct EigenResult {
  Vector values;
  Matrix vectors;
};

struct PencilMax {
  double lambda = 0.0;
  Vector vector;  ///< scaled so that v^T R v = 1
};

struct DetInverse {
  double determinant = 0.0;
  Matrix inverse;
};

/// Symmetry tolerance applied to inputs: |S - S^T| <= 1e-9 * ||S||_F.
inline constexpr double kSymmetryTol = 1e-9;

/// Full spectrum of a symmetric matrix by cyclic Jacobi rotations.
/// Throws NonSymmetric / NonFinite.
EigenResult sym_eig(const Matrix& s);

double lambda_max(const Matrix& s);
double lambda_min(const Matrix& s);

/// Lower-triangular L with L L^T = S. Throws NotPositiveDefinite.
Matrix cholesky(const Matrix& s);

bool is_positive_definite(const Matrix& s);

/// Largest eigenvalue of the symmetric pencil (phi, r), i.e. of r^{-1} phi,
/// computed by congruence with the Cholesky factor of r.
PencilMax pencil_max_eig(const Matrix& phi, const Matrix& r);

/// Q with A Q + Q A^T = C, by Kronecker vectorization. Throws
/// SingularLyapunov when the vectorized operator is singular.
Matrix lyap_solve(const Matrix& a, const Matrix& c);

/// Determinant and inverse by LU with partial pivoting. Throws Singular.
DetInverse det_and_inverse(const Matrix& s);

double determinant(const Matrix& s);
Matrix inverse(const Matrix& s);

/// Solves S X = rhs (LU with partial pivoting). Throws Singular.
Matrix solve(const Matrix& s, const Matrix& rhs);

/// L y = b for lower-triangular L; and L^T x = y.
Vector forward_substitute(const Matrix& lower, std::span<const double> b);
Vector backward_substitute_transposed(const Matrix& lower, std::span<const double> y);

/// True when every eigenvalue of A has negative real part. Decided by the
/// Lyapunov test: A X + X A^T = -I has a positive definite solution.
bool is_hurwitz(const Matrix& a);

/// Largest real part of the eigenvalues of a Hurwitz matrix, located by
/// bisecting the shift s for which A + sI stays Hurwitz. Throws
/// UnstableVertex if A itself is not Hurwitz.
double spectral_abscissa(const Matrix& a, double rel_tol = 1e-12);

/// Golden-section search for the minimizer of a unimodal f on [lo, hi].
struct ScalarMin {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};
ScalarMin golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                  double tol);

}  // namespace invflow
