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

#include "invflow/report.hpp"

#include <cmath>
#include <sstream>

#include "invflow/approx_error.hpp"
#include "invflow/error.hpp"
#include "invflow/numerics.hpp"
#include "invflow/polytopic.hpp"
#include "invflow/problem_io.hpp"

namespace invflow {

using nlohmann::json;

namespace {

// Vertex listings are dropped from reports beyond this count.
constexpr std::size_t kListedVertices = 64;

const BoxControl& box_of(const Problem& problem) { return std::get<BoxControl>(problem.control); }

std::string describe_gamma(const Vector& gamma) {
  std::ostringstream out;
  out.precision(17);
  out << '[';
  for (std::size_t i = 0; i < gamma.size(); ++i) out << (i ? ", " : "") << gamma[i];
  out << ']';
  return out.str();
}

}  // namespace

Analysis analyze_problem(const Problem& problem, double tol) {
  Analysis a;
  if (const auto* ell = std::get_if<EllipsoidControl>(&problem.control)) {
    a.verdict_weight = ell->R_u;
    a.gains = compute_gains(problem.network, ell->R_u);
    a.feedback_H = a.gains.H;
  } else {
    a.inscribed = true;
    a.verdict_weight = inscribed_ellipsoid_weight(box_of(problem));
    a.gains = compute_gains(problem.network, a.verdict_weight);
    // Box feedback uses the minimum-norm right inverse of B.
    a.feedback_H = compute_gains(problem.network, Matrix::identity(problem.network.controls())).H;
  }
  a.stabilizability = decide_stabilizable(a.gains.Phi, problem.demand.R_w);
  a.certificate = gain_bounds(problem.target.P, problem.demand.R_w, a.gains.Phi,
                              problem.xi_or(1.0), problem.k, tol);
  a.k = a.certificate.k;
  return a;
}

json verdict_json(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return true;
    case Verdict::No:
      return false;
    case Verdict::Marginal:
      return "marginal";
  }
  return "marginal";
}

json stabilizability_section(const Analysis& a) {
  const auto& s = a.stabilizability;
  json out = {
      {"verdict", verdict_json(s.verdict)},
      {"stabilizable", s.stabilizable},
      {"lambda_max", s.lambda_max},
      {"k_hat", s.k_hat},
      {"w_star", to_json(s.w_star)},
      {"control_model", a.inscribed ? "inscribed_ellipsoid" : "ellipsoid"},
  };
  if (a.inscribed) out["sufficient_only"] = true;
  return out;
}

json gains_section(const Analysis& a) {
  return {
      {"M", to_json(a.gains.M)},
      {"H", to_json(a.gains.H)},
      {"feedback_H", to_json(a.feedback_H)},
      {"Phi", to_json(a.gains.Phi)},
      {"k", a.k},
      {"k_min_sq", a.certificate.k_min_sq},
      {"lambda_max_P_inv_Phi", a.certificate.lambda_p_phi},
      {"xi_max", a.certificate.xi_max},
  };
}

json ellipsoidal_section(const Problem& problem, const Analysis& a, double tol) {
  const auto& c = a.certificate;
  const bool theorem4 = c.saturated_ok && c.target_in_linear_region;
  json warnings = json::array();
  if (!c.saturated_ok) warnings.push_back("k^2 below lambda_max(R_w^-1 P): no saturated guarantee");
  if (c.saturated_ok && !c.target_in_linear_region) {
    warnings.push_back("target set not inside the linear region of the saturated law");
  }
  if (problem.already_in_target) warnings.push_back("initial state already inside the target set");
  return {
      {"k", c.k},
      {"xi", c.xi},
      {"xi_max", c.xi_max},
      {"k_min_sq", c.k_min_sq},
      {"lambda_max_P_inv_Phi", c.lambda_p_phi},
      {"theorem3", c.linear_ok},
      {"theorem4", theorem4},
      {"target_in_linear_region", c.target_in_linear_region},
      {"remark_lmi", remark_lmi(problem.target.P, problem.demand.R_w, c.k, tol)},
      {"contains_PiR", contains_PiR(problem.target.P, problem.demand.R_w, c.k, tol)},
      {"certified", c.linear_ok || theorem4},
      {"warnings", warnings},
  };
}

json polytopic_section(const Problem& problem, const Analysis& a, double tol,
                       const PolytopicOptions& options, bool& certified) {
  const BoxControl& box = box_of(problem);
  const double xi = problem.xi_or(1.0);
  const Vector theta = theta_lower_bounds(a.k, a.feedback_H, problem.target.P, xi, box);
  const PolytopicEmbedding emb = enumerate_embedding(a.k, a.feedback_H, theta, problem.network);
  const Theorem6Certificate t6 =
      check_theorem6(problem.target.Q, emb, problem.demand.R_w, tol, options.exec);
  certified = t6.feasible;

  json out = {
      {"k", a.k},
      {"xi", xi},
      {"theta_lower", to_json(theta)},
      {"psi_theta", to_json(emb.psi_theta)},
      {"vertex_count", emb.vertex_count()},
      {"theorem6",
       {{"feasible", t6.feasible}, {"alpha_star", t6.alpha_star}, {"worst_eig", t6.worst_eig}}},
  };
  if (emb.vertex_count() <= kListedVertices) {
    json vertices = json::array();
    for (std::size_t j = 0; j < emb.vertex_count(); ++j) {
      vertices.push_back({{"gamma", to_json(emb.gammas[j])}, {"A", to_json(emb.A_list[j])}});
    }
    out["vertices"] = vertices;
  }

  const Theorem5Evidence t5 =
      theorem5_sampled_check(emb, box, problem.target.Q, problem.demand.R_w, t6.alpha_star,
                             options.samples, options.seed, options.exec);
  json regions = json::array();
  for (std::size_t j = 0; j < t5.regions.size(); ++j) {
    const auto fraction = t5.regions[j].fraction();
    regions.push_back({{"vertex", j},
                       {"samples", t5.regions[j].samples},
                       {"in_span", t5.regions[j].in_span},
                       {"fraction", fraction ? json(*fraction) : json(nullptr)}});
  }
  out["theorem5"] = {
      {"alpha", t6.alpha_star},     {"seed", options.seed},
      {"samples", t5.total},        {"unclassified", t5.unclassified},
      {"falsified", t5.falsified()}, {"regions", regions},
  };
  return out;
}

json approx_error_section(const Problem& problem, const Analysis& a) {
  const BoxControl& box = box_of(problem);
  const Vector theta =
      theta_lower_bounds(a.k, a.feedback_H, problem.target.P, problem.xi_or(1.0), box);
  const PolytopicEmbedding emb = enumerate_embedding(a.k, a.feedback_H, theta, problem.network);

  auto solve_vertex = [&](std::size_t j, const char* label) {
    try {
      return min_det_invariant(emb.A_list[j], problem.demand.R_w);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnstableVertex) throw;
      throw Error(ErrorCode::UnstableVertex, std::string(label) + " vertex " + std::to_string(j) +
                                                 " with gamma " + describe_gamma(emb.gammas[j]) +
                                                 " is not Hurwitz");
    }
  };
  const MinDetResult under = solve_vertex(0, "unsaturated");
  const MinDetResult over = solve_vertex(emb.vertex_count() - 1, "fully saturated");

  return {
      {"A_under", to_json(emb.unsaturated())},
      {"A_over", to_json(emb.fully_saturated())},
      {"Q_under", to_json(under.Q)},
      {"Q_over", to_json(over.Q)},
      {"alpha_under", under.alpha},
      {"alpha_over", over.alpha},
      {"det_Q_under", under.det_Q},
      {"det_Q_over", over.det_Q},
      {"e", approximation_error(under.Q, over.Q)},
      {"error_vs_target", error_vs_target(problem.target.P, over.Q)},
      {"boundary_candidate", over.boundary_candidate || under.boundary_candidate},
      {"note",
       "e compares the min-det ellipsoids of the unsaturated and fully saturated vertices; "
       "error_vs_target compares the target set with the fully saturated one. The worked "
       "one-node example uses the latter arithmetic."},
  };
}

}  // namespace invflow
