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

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "invflow/ellipsoidal.hpp"
#include "invflow/matrix.hpp"
#include "invflow/model.hpp"
#include "invflow/parallel.hpp"

namespace invflow {

/// Largest control count for which the 2^m vertices are enumerated.
inline constexpr std::size_t kMaxVertexControls = 20;

/// Saturated closed loop x' = B sat(-kHx) - w rewritten as x' = A(t) x - w
/// with A(t) in the convex hull of A_j = -B k diag(gamma_j) H.
///
/// Vertex j uses gamma_j(i) = 1 when bit i of j is 0 and theta_lower(i) when
/// it is 1 (bit 0 = control 0), so j = 0 is the unsaturated vertex and
/// j = 2^m - 1 the fully saturated one.
struct PolytopicEmbedding {
  double k = 0.0;
  Matrix B;
  Matrix H;
  Vector theta_lower;
  Vector psi_theta;  ///< 1 / theta_lower
  std::vector<Vector> gammas;
  std::vector<Matrix> A_list;

  std::size_t vertex_count() const { return A_list.size(); }
  const Matrix& unsaturated() const { return A_list.front(); }
  const Matrix& fully_saturated() const { return A_list.back(); }
};

struct Theorem6Certificate {
  bool feasible = false;
  double alpha_star = 0.0;
  double worst_eig = 0.0;  ///< max_j lambda_max(M_j(alpha_star))
};

/// Componentwise clamp of v to [lower, upper].
Vector clamp_to_box(std::span<const double> v, const BoxControl& box);

/// u_i = sat_[lower_i, upper_i](-k H_i x).
Vector saturated_control_box(std::span<const double> x, double k, const Matrix& H,
                             const BoxControl& box);

/// theta_i(x) in (0, 1] with theta_i(x) * (-k H_i x) = sat(-k H_i x).
Vector degree_of_saturation(std::span<const double> x, double k, const Matrix& H,
                            const BoxControl& box);

/// min over {x^T P x <= xi} of theta_i(x), in closed form through
/// h_i = k sqrt(xi H_i P^{-1} H_i^T), the largest |k H_i x| on that set.
Vector theta_lower_bounds(double k, const Matrix& H, const Matrix& P, double xi,
                          const BoxControl& box);

/// Throws VertexExplosion when m > kMaxVertexControls.
PolytopicEmbedding enumerate_embedding(double k, const Matrix& H, std::span<const double> theta_lower,
                                       const Network& network);

/// Envelope where the embedding is valid: every theta_i(x) >= theta_lower_i,
/// i.e. lower_i psi_i <= -k H_i x <= upper_i psi_i.
bool in_envelope(std::span<const double> x, const PolytopicEmbedding& emb, const BoxControl& box,
                 double tol = 1e-12);

/// Convex weights with sum_j sigma_j A_j x = B sat(-kHx): product-form
/// interpolation t_i = (theta_i(x) - theta_lower_i) / (1 - theta_lower_i),
/// sigma_j = prod_i (bit_i(j) ? 1 - t_i : t_i). Throws OutsideEnvelope.
Vector sigma_weights(std::span<const double> x, const PolytopicEmbedding& emb, const BoxControl& box);

/// M = Q A^T + A Q + alpha Q + (1/alpha) R_w^{-1}. Throws AlphaNonPositive.
Matrix Mj_matrix(const Matrix& Q, const Matrix& A, double alpha, const Matrix& R_w);

/// max_j lambda_max(M_j(alpha)) given a precomputed R_w^{-1}.
double vertex_max_eig(const Matrix& Q, const PolytopicEmbedding& emb, double alpha,
                      const Matrix& R_w_inverse, Exec exec = Exec::OpenMP);

/// Minimizes f(alpha) = max_j lambda_max(M_j(alpha)) (convex in alpha) by
/// golden-section search on (1e-6, alpha_hi]; feasible iff f(alpha*) < -tol.
Theorem6Certificate check_theorem6(const Matrix& Q, const PolytopicEmbedding& emb, const Matrix& R_w,
                                   double tol = kVerdictTol, Exec exec = Exec::OpenMP);

struct EigenPair {
  double value;
  Vector vector;
};

/// Eigenpairs of a symmetric M with eigenvalue < -tol.
std::vector<EigenPair> theorem5_negative_eigenpairs(const Matrix& M, double tol = kVerdictTol);

struct RegionEvidence {
  std::size_t samples = 0;
  std::size_t in_span = 0;
  /// in_span / samples; absent when no sample landed in the region.
  std::optional<double> fraction() const {
    if (samples == 0) return std::nullopt;
    return static_cast<double>(in_span) / static_cast<double>(samples);
  }
};

struct Theorem5Evidence {
  std::vector<RegionEvidence> regions;  ///< one per vertex
  std::size_t total = 0;
  std::size_t unclassified = 0;  ///< samples matching no gamma_j
  /// True when some classified sample lies outside its region's span.
  bool falsified() const;
};

/// Uniform samples of the envelope (rejection from its bounding box),
/// deterministic in `seed`.
std::vector<Vector> sample_envelope(const PolytopicEmbedding& emb, const BoxControl& box,
                                    std::size_t count, std::uint64_t seed);

/// Sampled falsifier for the span condition: each sample is assigned to the
/// first region whose gamma_j matches theta(x) componentwise within 1e-9 and
/// tested for distance <= 1e-6 ||x|| to the span of the negative eigenvectors
/// of M_j(alpha). A fraction below 1 disproves the condition; fraction 1 is
/// only evidence.
Theorem5Evidence theorem5_sampled_check(const PolytopicEmbedding& emb, const BoxControl& box,
                                        const Matrix& Q, const Matrix& R_w, double alpha,
                                        std::size_t samples, std::uint64_t seed,
                                        Exec exec = Exec::OpenMP);

}  // namespace invflow
