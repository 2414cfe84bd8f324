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

#include "invflow/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>

#include <CLI11.hpp>

#include "invflow/error.hpp"
#include "invflow/numerics.hpp"

namespace invflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void append_number(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::Io, "cannot create directory " + dir.string());
  }
}

void emit(std::ostream& out, const json& report) { out << report.dump(2) << '\n'; }

int cmd_analyze(const fs::path& file, double tol, std::ostream& out) {
  const ProblemFile pf = load_problem_file(file);
  const Analysis a = analyze_problem(pf.problem, tol);
  emit(out, {{"stabilizability", stabilizability_section(a)}, {"gains", gains_section(a)}});
  return a.stabilizability.verdict == Verdict::Yes ? kExitOk : kExitNegative;
}

int cmd_verify(const fs::path& file, const std::string& mode, const PolytopicOptions& options,
               double tol, std::ostream& out) {
  const ProblemFile pf = load_problem_file(file);
  const bool box = pf.problem.is_box();
  if ((mode == "ellipsoidal") == box) {
    throw Error(ErrorCode::ModeMismatch, "mode " + mode + " does not match a " +
                                             (box ? "box" : "ellipsoidal") + " control bound");
  }
  const Analysis a = analyze_problem(pf.problem, tol);
  json report = {{"stabilizability", stabilizability_section(a)}, {"gains", gains_section(a)}};
  bool certified = false;
  if (box) {
    report["polytopic"] = polytopic_section(pf.problem, a, tol, options, certified);
  } else {
    report["ellipsoidal"] = ellipsoidal_section(pf.problem, a, tol);
    certified = report["ellipsoidal"]["certified"].get<bool>();
  }
  emit(out, report);
  return certified ? kExitOk : kExitNegative;
}

int cmd_approx_error(const fs::path& file, double tol, std::ostream& out) {
  const ProblemFile pf = load_problem_file(file);
  if (!pf.problem.is_box()) {
    throw Error(ErrorCode::ModeMismatch, "approx-error needs a box control bound");
  }
  const Analysis a = analyze_problem(pf.problem, tol);
  emit(out, {{"approx_error", approx_error_section(pf.problem, a)}});
  return kExitOk;
}

int cmd_simulate(const std::string& file, const std::string& batch, const fs::path& out_dir,
                 double tol, std::ostream& out) {
  std::vector<fs::path> paths;
  if (!file.empty()) paths.emplace_back(file);
  if (!batch.empty()) {
    const auto listed = read_batch_list(batch);
    paths.insert(paths.end(), listed.begin(), listed.end());
  }
  if (paths.empty()) throw Error(ErrorCode::Parse, "simulate needs a problem file or --batch");

  std::vector<ProblemFile> files;
  std::vector<Scenario> scenarios;
  for (const auto& p : paths) {
    files.push_back(load_problem_file(p));
    scenarios.push_back(make_scenario(files.back(), analyze_problem(files.back().problem, tol)));
  }

  // A lone file writes straight into out_dir; batches get one subdirectory per stem.
  std::vector<fs::path> dirs;
  if (batch.empty()) {
    dirs.push_back(out_dir);
  } else {
    std::map<std::string, int> seen;
    for (const auto& p : paths) {
      std::string stem = p.stem().string();
      const int count = seen[stem]++;
      if (count > 0) stem += "_" + std::to_string(count);
      dirs.push_back(out_dir / stem);
    }
  }
  for (const auto& d : dirs) ensure_directory(d);

  const std::vector<Trajectory> runs = run_batch(scenarios);
  bool aborted = false;
  json index = json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    write_trajectory_files(dirs[i], runs[i], files[i].problem);
    aborted = aborted || runs[i].aborted;
    json entry = trajectory_summary(runs[i], files[i].problem);
    entry["input"] = paths[i].string();
    entry["output"] = dirs[i].string();
    index.push_back(entry);
  }
  emit(out, {{"simulations", index}});
  return aborted ? kExitNegative : kExitOk;
}

}  // namespace

double verdict_tolerance_from_env() {
  const char* raw = std::getenv("INVFLOW_TOL");
  if (raw == nullptr || *raw == '\0') return kVerdictTol;
  const std::string s(raw);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value) || value <= 0.0) {
    throw Error(ErrorCode::Parse, "INVFLOW_TOL must be a positive number, got \"" + s + "\"");
  }
  return value;
}

Scenario make_scenario(const ProblemFile& file, const Analysis& analysis) {
  const Problem& p = file.problem;
  Scenario s;
  s.problem = p;
  s.law = p.is_box() ? ControlLaw::BoxSaturated : ControlLaw::EllipsoidalSaturated;
  s.k = analysis.k;
  s.H = analysis.feedback_H;
  if (file.sim) {
    s.dt = file.sim->dt;
    s.t_max = file.sim->t_max;
    s.demand = file.sim->demand;
  }
  if (p.initial.x0) {
    s.x0 = *p.initial.x0;
  } else if (p.initial.xi) {
    s.x0.assign(p.network.buffers(), 0.0);
    s.x0[0] = std::sqrt(*p.initial.xi / p.target.P(0, 0));
  } else {
    throw Error(ErrorCode::InvalidScenario, "simulate needs x0 or xi");
  }
  check_scenario(s);
  return s;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  const std::size_t n = trajectory.samples.empty() ? 0 : trajectory.samples.front().x.size();
  const std::size_t m = trajectory.samples.empty() ? 0 : trajectory.samples.front().u.size();
  std::string line = "t";
  for (std::size_t i = 1; i <= n; ++i) line += ",x" + std::to_string(i);
  for (std::size_t i = 1; i <= m; ++i) line += ",u" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i) line += ",w" + std::to_string(i);
  line += ",V\n";
  out << line;
  for (const auto& s : trajectory.samples) {
    line.clear();
    append_number(line, s.t);
    for (const auto* part : {&s.x, &s.u, &s.w}) {
      for (double v : *part) {
        line += ',';
        append_number(line, v);
      }
    }
    line += ',';
    append_number(line, s.V);
    line += '\n';
    out << line;
  }
}

json trajectory_summary(const Trajectory& trajectory, const Problem& problem) {
  const std::size_t count = trajectory.samples.size();
  return {
      {"converged_at", trajectory.converged_at ? json(*trajectory.converged_at) : json(nullptr)},
      {"v_monotone_outside", trajectory.v_monotone_outside},
      {"steps", count == 0 ? 0 : count - 1},
      {"controls_feasible", trajectory.controls_feasible},
      {"demands_feasible", trajectory.demands_feasible},
      {"already_in_target", problem.already_in_target},
      {"aborted", trajectory.aborted},
      {"abort_reason", trajectory.abort_reason},
  };
}

void write_trajectory_files(const fs::path& dir, const Trajectory& trajectory,
                            const Problem& problem) {
  ensure_directory(dir);
  auto csv = open_output(dir / "trajectory.csv");
  write_trajectory_csv(csv, trajectory);
  auto summary = open_output(dir / "summary.json");
  summary << trajectory_summary(trajectory, problem).dump(2) << '\n';
  if (!csv || !summary) throw Error(ErrorCode::Io, "write failed in " + dir.string());
}

std::vector<fs::path> read_batch_list(const fs::path& list) {
  std::ifstream in(list);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + list.string());
  std::vector<fs::path> paths;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    fs::path p = line.substr(first, last - first + 1);
    if (p.is_relative()) p = list.parent_path() / p;
    paths.push_back(p);
  }
  return paths;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust inventory-flow stabilization analysis", "invflow"};
  app.require_subcommand(1);

  std::string file;
  auto* analyze = app.add_subcommand("analyze", "Stabilizability verdict and gains");
  analyze->add_option("file", file, "Problem JSON")->required();

  std::string mode;
  PolytopicOptions poly;
  auto* verify = app.add_subcommand("verify", "Check the ellipsoidal or polytopic certificate");
  verify->add_option("file", file, "Problem JSON")->required();
  verify->add_option("--mode", mode, "ellipsoidal or polytopic")
      ->required()
      ->check(CLI::IsMember({"ellipsoidal", "polytopic"}));
  verify->add_option("--samples", poly.samples, "Sampled points for the region-span check")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", poly.seed, "Sampling seed");

  std::string out_dir;
  std::string batch;
  auto* simulate = app.add_subcommand("simulate", "Closed-loop trajectories to CSV");
  simulate->add_option("file", file, "Problem JSON");
  simulate->add_option("-o,--output", out_dir, "Output directory")->required();
  simulate->add_option("--batch", batch, "File listing problem paths, one per line");

  auto* approx = app.add_subcommand("approx-error", "Min-det invariant ellipsoids and error");
  approx->add_option("file", file, "Problem JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    const double tol = verdict_tolerance_from_env();
    if (*analyze) return cmd_analyze(file, tol, out);
    if (*verify) return cmd_verify(file, mode, poly, tol, out);
    if (*simulate) return cmd_simulate(file, batch, out_dir, tol, out);
    return cmd_approx_error(file, tol, out);
  } catch (const Error& e) {
    err << "invflow: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "invflow: " << e.what() << '\n';
  }
  return kExitInputError;
}

}  // namespace invflow
