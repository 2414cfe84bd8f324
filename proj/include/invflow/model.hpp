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
#include <string>
#include <variant>

#include "invflow/matrix.hpp"

namespace invflow {

/// Controlled process matrix B (n buffers x m controls), rank n.
struct Network {
  Matrix B;

  std::size_t buffers() const { return B.rows(); }
  std::size_t controls() const { return B.cols(); }

  friend bool operator==(const Network&, const Network&) = default;
};

/// Demand set {w : w^T R_w w <= 1}.
struct DemandBound {
  Matrix R_w;

  friend bool operator==(const DemandBound&, const DemandBound&) = default;
};

/// Control set {u : u^T R_u u <= 1}.
struct EllipsoidControl {
  Matrix R_u;

  friend bool operator==(const EllipsoidControl&, const EllipsoidControl&) = default;
};

/// Control set {u : lower <= u <= upper}; 0 must be interior.
struct BoxControl {
  Vector lower;
  Vector upper;

  friend bool operator==(const BoxControl&, const BoxControl&) = default;
};

using ControlBound = std::variant<EllipsoidControl, BoxControl>;

/// Target ellipsoid {x : x^T P x <= 1}; Q = P^{-1} is filled by validate().
struct TargetSet {
  Matrix P;
  Matrix Q;

  friend bool operator==(const TargetSet&, const TargetSet&) = default;
};

/// Initial condition: an explicit x0 or just the level xi of
/// {x : x^T P x <= xi}. When x0 is given, xi is derived from it.
struct InitialSet {
  std::optional<Vector> x0;
  std::optional<double> xi;

  friend bool operator==(const InitialSet&, const InitialSet&) = default;
};

struct Problem {
  Network network;
  DemandBound demand;
  ControlBound control;
  TargetSet target;
  InitialSet initial;
  std::optional<double> k;

  /// Set by validate() when x0 lies strictly inside the target (xi < 1).
  bool already_in_target = false;

  bool is_box() const { return std::holds_alternative<BoxControl>(control); }
  double xi_or(double fallback) const { return initial.xi.value_or(fallback); }

  friend bool operator==(const Problem&, const Problem&) = default;
};


/// Pivot tolerance of the rank test, relative to ||B||_F.
inline constexpr double kRankTol = 1e-9;

/// Number of linearly independent rows/columns found by pivoted elimination.
std::size_t numerical_rank(const Matrix& m, double rel_tol = kRankTol);

/// Checks every invariant of the problem types and returns a copy with the
/// derived fields (Q, xi, already_in_target) filled in. Throws Error with
/// RankDeficientB, NotPositiveDefinite (naming the matrix), BoxExcludesZero,
/// XiBelowOne or DimensionMismatch. Idempotent.
Problem validate(Problem problem);

}  // namespace invflow
