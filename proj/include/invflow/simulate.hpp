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
#include <string>
#include <vector>

#include "invflow/matrix.hpp"
#include "invflow/model.hpp"
#include "invflow/parallel.hpp"

namespace invflow {

enum class ControlLaw { EllipsoidalSaturated, BoxSaturated, PureLinear };
enum class DemandKind { Worst, Constant, BoundaryRandom };

struct DemandModel {
  DemandKind kind = DemandKind::Worst;
  Vector w0;               ///< Constant
  std::uint64_t seed = 1;  ///< BoundaryRandom
  double hold = 0.1;       ///< BoundaryRandom: seconds between direction draws
};

struct Scenario {
  Problem problem;  ///< validated
  ControlLaw law = ControlLaw::EllipsoidalSaturated;
  double k = 1.0;
  Matrix H;
  DemandModel demand;
  Vector x0;
  double dt = 1e-3;
  double t_max = 50.0;
};

struct TrajectorySample {
  double t = 0.0;
  Vector x;
  Vector u;
  Vector w;
  double V = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::optional<double> converged_at;  ///< first t with V <= 1
  /// V dropped by more than 1e-12 between consecutive samples whenever the
  /// earlier one had V > 1 + 1e-9.
  bool v_monotone_outside = true;
  bool controls_feasible = true;  ///< u inside the declared bound (1e-9) at every sample
  bool demands_feasible = true;   ///< w^T R_w w <= 1 + 1e-9 at every sample
  bool aborted = false;           ///< NonFiniteState hit; samples are partial
  std::string abort_reason;
};

/// Adversarial demand maximizing dV/dt for x' = Bu - w:
/// w = -R_w^{-1} P x / sqrt(x^T P R_w^{-1} P x). Throws ZeroState at x = 0.
Vector worst_demand(std::span<const double> x, const Matrix& P, const Matrix& R_w);

/// Checks dt, t_max, the demand model and law/bound compatibility. Throws
/// InvalidScenario.
void check_scenario(const Scenario& s);

/// Fixed-step RK4 integration of the closed loop; the demand is re-evaluated
/// at every stage. Stops at t_max or 10 steps after entering the target.
Trajectory run(const Scenario& scenario);

/// Independent runs; results are in input order for either Exec.
std::vector<Trajectory> run_batch(std::span<const Scenario> scenarios, Exec exec = Exec::OpenMP);

}  // namespace invflow
