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

#include "invflow/model.hpp"
#include "invflow/simulate.hpp"

namespace invflow::testing {

/// One node, two arcs, unit demand and target.
inline Problem one_node_ellipsoid() {
  Problem p;
  p.network.B = Matrix{{1.0, 1.0}};
  p.demand.R_w = Matrix{{1.0}};
  p.control = EllipsoidControl{Matrix::identity(2)};
  p.target.P = Matrix{{1.0}};
  return validate(std::move(p));
}

/// Same network with -2 <= u1 <= 3, -2 <= u2 <= 1.
inline Problem one_node_box(double p_value = 1.0) {
  Problem p;
  p.network.B = Matrix{{1.0, 1.0}};
  p.demand.R_w = Matrix{{1.0}};
  p.control = BoxControl{{-2.0, -2.0}, {3.0, 1.0}};
  p.target.P = Matrix{{p_value}};
  return validate(std::move(p));
}

inline Scenario scalar_scenario(Problem problem, double k, double x0, DemandKind demand,
                                double t_max = 40.0) {
  Scenario s;
  s.law = problem.is_box() ? ControlLaw::BoxSaturated : ControlLaw::EllipsoidalSaturated;
  s.problem = std::move(problem);
  s.k = k;
  s.H = Matrix{{0.5}, {0.5}};
  s.demand.kind = demand;
  s.demand.seed = 17;
  if (demand == DemandKind::Constant) s.demand.w0 = Vector{-1.0};
  s.x0 = Vector{x0};
  s.t_max = t_max;
  return s;
}

}  // namespace invflow::testing
