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

#include <json.hpp>

#include "invflow/ellipsoidal.hpp"
#include "invflow/model.hpp"
#include "invflow/parallel.hpp"
#include "invflow/stabilizability.hpp"

namespace invflow {

/// Quantities shared by every report section.
struct Analysis {
  bool inscribed = false;  ///< box problem judged through its inscribed ellipsoid
  Matrix verdict_weight;   ///< R_u, or diag(1/rho^2) for a box
  GainData gains;          ///< computed with verdict_weight
  Matrix feedback_H;       ///< gain used by the controller
  StabilizabilityReport stabilizability;
  double k = 0.0;          ///< problem k, or sqrt(k_min_sq) when absent
  EllipsoidalCertificate certificate;
};

Analysis analyze_problem(const Problem& problem, double tol = kVerdictTol);

/// true / false / "marginal".
nlohmann::json verdict_json(Verdict v);

nlohmann::json stabilizability_section(const Analysis& a);
nlohmann::json gains_section(const Analysis& a);
nlohmann::json ellipsoidal_section(const Problem& problem, const Analysis& a, double tol);

struct PolytopicOptions {
  std::size_t samples = 4096;
  std::uint64_t seed = 1;
  Exec exec = Exec::OpenMP;
};

/// Sets `certified` to the Theorem 6 feasibility verdict.
nlohmann::json polytopic_section(const Problem& problem, const Analysis& a, double tol,
                                 const PolytopicOptions& options, bool& certified);

/// Min-det ellipsoids of the unsaturated and fully saturated vertices and
/// both error figures. Throws UnstableVertex naming the vertex.
nlohmann::json approx_error_section(const Problem& problem, const Analysis& a);

}  // namespace invflow
