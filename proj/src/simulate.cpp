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

#include "invflow/simulate.hpp"

#include <cmath>
#include <random>

#include "invflow/ellipsoidal.hpp"
#include "invflow/error.hpp"
#include "invflow/numerics.hpp"
#include "invflow/polytopic.hpp"

namespace invflow {

namespace {

constexpr double kFeasibilityTol = 1e-9;
constexpr double kMonotoneDrop = 1e-12;
constexpr double kOutsideMargin = 1e-9;
constexpr std::size_t kStepsAfterConvergence = 10;

bool finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

/// Holds everything the right-hand side needs so the per-stage work is a
/// handful of small products.
class ClosedLoop {
 public:
  explicit ClosedLoop(const Scenario& s)
      : s_(s),
        rw_chol_(cholesky(s.problem.demand.R_w)),
        rng_(s.demand.seed) {}

  Vector control(std::span<const double> x) const {
    switch (s_.law) {
      case ControlLaw::EllipsoidalSaturated:
        return saturated_control(x, s_.k, s_.H, std::get<EllipsoidControl>(s_.problem.control).R_u);
      case ControlLaw::BoxSaturated:
        return saturated_control_box(x, s_.k, s_.H, std::get<BoxControl>(s_.problem.control));
      case ControlLaw::PureLinear:
        return scaled(s_.H * x, -s_.k);
    }
    return {};
  }

  Vector demand(double t, std::span<const double> x) {
    const std::size_t n = x.size();
    switch (s_.demand.kind) {
      case DemandKind::Worst: {
        bool zero = true;
        for (double v : x) zero = zero && v == 0.0;
        if (zero) return Vector(n, 0.0);
        return worst_demand(x, s_.problem.target.P, s_.problem.demand.R_w);
      }
      case DemandKind::Constant:
        return s_.demand.w0;
      case DemandKind::BoundaryRandom: {
        const auto slot = static_cast<std::size_t>(std::floor(t / s_.demand.hold));
        while (held_.size() <= slot) held_.push_back(draw_boundary(n));
        return held_[slot];
      }
    }
    return {};
  }

  Vector rhs(double t, std::span<const double> x) {
    const Vector bu = s_.problem.network.B * control(x);
    return subtract(bu, demand(t, x));
  }

  bool control_feasible(std::span<const double> u) const {
    if (const auto* ell = std::get_if<EllipsoidControl>(&s_.problem.control)) {
      return quad_form(ell->R_u, u) <= 1.0 + kFeasibilityTol;
    }
    const auto& box = std::get<BoxControl>(s_.problem.control);
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] < box.lower[i] - kFeasibilityTol || u[i] > box.upper[i] + kFeasibilityTol)
        return false;
    return true;
  }

 private:
  // Uniform direction on the unit sphere mapped onto w^T R_w w = 1.
  Vector draw_boundary(std::size_t n) {
    Vector z(n);
    double len = 0.0;
    while (len == 0.0) {
      for (double& v : z) v = normal_(rng_);
      len = norm2(z);
    }
    for (double& v : z) v /= len;
    return backward_substitute_transposed(rw_chol_, z);
  }

  const Scenario& s_;
  Matrix rw_chol_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
  std::vector<Vector> held_;
};

}  // namespace

Vector worst_demand(std::span<const double> x, const Matrix& P, const Matrix& R_w) {
  bool zero = true;
  for (double v : x) zero = zero && v == 0.0;
  if (zero) throw Error(ErrorCode::ZeroState, "worst demand is undefined at x = 0");
  const Vector px = P * x;
  const Matrix l = cholesky(R_w);
  const Vector rinv_px = backward_substitute_transposed(l, forward_substitute(l, px));
  const double lambda = std::sqrt(dot(px, rinv_px));
  return scaled(rinv_px, -1.0 / lambda);
}

void check_scenario(const Scenario& s) {
  const std::size_t n = s.problem.network.buffers();
  const std::size_t m = s.problem.network.controls();
  if (!(s.dt > 0.0) || !std::isfinite(s.dt)) throw Error(ErrorCode::InvalidScenario, "dt must be > 0");
  if (!(s.t_max >= s.dt) || !std::isfinite(s.t_max)) {
    throw Error(ErrorCode::InvalidScenario, "t_max must be >= dt");
  }
  if (!(s.k > 0.0)) throw Error(ErrorCode::InvalidScenario, "k must be positive");
  if (s.H.rows() != m || s.H.cols() != n) throw Error(ErrorCode::DimensionMismatch, "H must be m x n");
  if (s.x0.size() != n || !finite(s.x0)) throw Error(ErrorCode::InvalidScenario, "x0 must be a finite n-vector");
  if (s.law == ControlLaw::EllipsoidalSaturated && s.problem.is_box()) {
    throw Error(ErrorCode::InvalidScenario, "ellipsoidal law needs an ellipsoidal control bound");
  }
  if (s.law == ControlLaw::BoxSaturated && !s.problem.is_box()) {
    throw Error(ErrorCode::InvalidScenario, "box law needs a box control bound");
  }
  switch (s.demand.kind) {
    case DemandKind::Constant:
      if (s.demand.w0.size() != n || !finite(s.demand.w0)) {
        throw Error(ErrorCode::InvalidScenario, "w0 must be a finite n-vector");
      }
      if (quad_form(s.problem.demand.R_w, s.demand.w0) > 1.0 + 1e-12) {
        throw Error(ErrorCode::InvalidScenario, "w0 lies outside the demand ellipsoid");
      }
      break;
    case DemandKind::BoundaryRandom:
      if (!(s.demand.hold > 0.0)) throw Error(ErrorCode::InvalidScenario, "hold must be > 0");
      break;
    case DemandKind::Worst:
      break;
  }
}

Trajectory run(const Scenario& s) {
  check_scenario(s);
  ClosedLoop loop(s);
  const Matrix& P = s.problem.target.P;
  const Matrix& R_w = s.problem.demand.R_w;
  const auto steps = static_cast<std::size_t>(std::ceil(s.t_max / s.dt - 1e-9));

  Trajectory traj;
  traj.samples.reserve(steps + 1);
  Vector x = s.x0;
  std::size_t converged_step = 0;

  for (std::size_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * s.dt;
    TrajectorySample sample{t, x, loop.control(x), loop.demand(t, x), quad_form(P, x)};
    traj.controls_feasible = traj.controls_feasible && loop.control_feasible(sample.u);
    traj.demands_feasible =
        traj.demands_feasible && quad_form(R_w, sample.w) <= 1.0 + kFeasibilityTol;
    if (!traj.samples.empty()) {
      const double prev = traj.samples.back().V;
      if (prev > 1.0 + kOutsideMargin && !(sample.V < prev - kMonotoneDrop)) {
        traj.v_monotone_outside = false;
      }
    }
    if (!traj.converged_at && sample.V <= 1.0) {
      traj.converged_at = t;
      converged_step = i;
    }
    traj.samples.push_back(std::move(sample));

    if (i >= steps) break;
    if (traj.converged_at && i >= converged_step + kStepsAfterConvergence) break;

    const double h = s.dt;
    const Vector k1 = loop.rhs(t, x);
    const Vector k2 = loop.rhs(t + 0.5 * h, axpy(0.5 * h, k1, x));
    const Vector k3 = loop.rhs(t + 0.5 * h, axpy(0.5 * h, k2, x));
    const Vector k4 = loop.rhs(t + h, axpy(h, k3, x));
    for (std::size_t r = 0; r < x.size(); ++r) {
      x[r] += h / 6.0 * (k1[r] + 2.0 * k2[r] + 2.0 * k3[r] + k4[r]);
    }
    if (!finite(x)) {
      traj.aborted = true;
      traj.abort_reason = "NonFiniteState at t = " + std::to_string(t + h);
      break;
    }
  }
  return traj;
}

std::vector<Trajectory> run_batch(std::span<const Scenario> scenarios, Exec exec) {
  std::vector<Trajectory> out(scenarios.size());
  for_each_index(scenarios.size(), [&](std::size_t i) { out[i] = run(scenarios[i]); }, exec);
  return out;
}

}  // namespace invflow
