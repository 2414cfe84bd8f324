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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "invflow/cli.hpp"
#include "invflow/error.hpp"
#include "invflow/numerics.hpp"

namespace invflow {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kData = INVFLOW_DATA_DIR;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("invflow_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorCode parse_code(const std::string& text) {
  try {
    parse_problem_text(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

void expect_all_finite(const json& j) {
  if (j.is_number()) {
    EXPECT_TRUE(std::isfinite(j.get<double>()));
  } else if (j.is_structured()) {
    for (const auto& v : j) expect_all_finite(v);
  }
}

TEST(ProblemFile, ParsesRationalStrings) {
  const auto pf = parse_problem_text(R"({
    "B": [["1/2", "0.5"]], "R_w": [[1]],
    "control": {"type": "ellipsoid", "R_u": [[1, 0], [0, 1]]}, "P": [[1]]})");
  EXPECT_EQ(pf.problem.network.B, (Matrix{{0.5, 0.5}}));
  EXPECT_FALSE(pf.sim.has_value());
}

TEST(ProblemFile, RejectsBadDocuments) {
  EXPECT_EQ(parse_code("{"), ErrorCode::Parse);
  EXPECT_EQ(parse_code(R"({"B": [[1, 1]], "R_w": [[1]], "P": [[1]],
      "control": {"type": "ellipsoid", "R_u": [[1, 0], [0, 1]]}, "extra": 1})"),
            ErrorCode::Parse);
  EXPECT_EQ(parse_code(R"({"B": [[1, 1]], "R_w": [[1]], "P": [[1]],
      "control": {"type": "box", "lower": [-1, -1], "upper": [1, 1], "R_u": 1}})"),
            ErrorCode::Parse);
  EXPECT_EQ(parse_code(R"({"B": [[1, 1]], "R_w": [[1]], "P": [[1]],
      "control": {"type": "ellipsoid", "R_u": [[1, 0], [0, 1]]}, "sim": {"speed": 2}})"),
            ErrorCode::Parse);
  EXPECT_EQ(parse_code(R"({"B": [[1, 1]], "R_w": [[1]], "P": [[1]],
      "control": {"type": "ellipsoid", "R_u": [[1, 0], [0, 1]]}, "x0": [2], "xi": 4})"),
            ErrorCode::Parse);
  EXPECT_EQ(parse_code(R"({"B": [["1/0", 1]], "R_w": [[1]], "P": [[1]],
      "control": {"type": "ellipsoid", "R_u": [[1, 0], [0, 1]]}})"),
            ErrorCode::Parse);
  EXPECT_EQ(parse_code(R"({"B": [[1, 1], [1, 1]], "R_w": [[1, 0], [0, 1]], "P": [[1, 0], [0, 1]],
      "control": {"type": "ellipsoid", "R_u": [[1, 0], [0, 1]]}})"),
            ErrorCode::RankDeficientB);
}

TEST(Analyze, RunningExample) {
  const auto r = cli({"analyze", (kData / "one_node_ellipsoid.json").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["stabilizability"]["verdict"], true);
  EXPECT_NEAR(j["stabilizability"]["lambda_max"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["stabilizability"]["k_hat"].get<double>(), 1.41421356, 1e-8);
  EXPECT_NEAR(j["gains"]["Phi"][0][0].get<double>(), 0.5, 1e-12);
  expect_all_finite(j);
}

TEST(Analyze, InflatedControlWeight) {
  const auto r = cli({"analyze", (kData / "one_node_ellipsoid_inflated.json").string()});
  EXPECT_EQ(r.code, kExitNegative);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["stabilizability"]["lambda_max"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(j["stabilizability"]["stabilizable"], false);
}

TEST(Analyze, InputErrors) {
  const fs::path dir = scratch_dir("bad");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << "{not json";
  const auto bad = cli({"analyze", (dir / "bad.json").string()});
  EXPECT_EQ(bad.code, kExitInputError);
  EXPECT_NE(bad.err.find("Parse"), std::string::npos);

  EXPECT_EQ(cli({"analyze", (dir / "missing.json").string()}).code, kExitInputError);
  EXPECT_EQ(cli({}).code, kExitInputError);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitInputError);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Verify, Ellipsoidal) {
  const auto r = cli({"verify", (kData / "one_node_ellipsoid.json").string(), "--mode",
                      "ellipsoidal"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["ellipsoidal"]["theorem3"], true);
  EXPECT_EQ(j["ellipsoidal"]["remark_lmi"], true);
  EXPECT_NEAR(j["ellipsoidal"]["xi_max"].get<double>(), 2.0, 1e-12);
}

TEST(Verify, ModeMismatch) {
  const auto r = cli({"verify", (kData / "one_node_box.json").string(), "--mode", "ellipsoidal"});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("ModeMismatch"), std::string::npos);
  EXPECT_EQ(cli({"verify", (kData / "one_node_ellipsoid.json").string(), "--mode", "polytopic"})
                .code,
            kExitInputError);
  EXPECT_EQ(cli({"verify", (kData / "one_node_box.json").string(), "--mode", "sideways"}).code,
            kExitInputError);
}

TEST(Verify, PolytopicK1FileIsInfeasible) {
  const auto r = cli({"verify", (kData / "one_node_box.json").string(), "--mode", "polytopic",
                      "--samples", "500"});
  EXPECT_EQ(r.code, kExitNegative);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["polytopic"]["theta_lower"], json({0.4, 0.2}));
  EXPECT_EQ(j["polytopic"]["vertex_count"], 4);
  EXPECT_EQ(j["polytopic"]["theorem6"]["feasible"], false);
  EXPECT_EQ(j["polytopic"]["theorem5"]["samples"], 500);
}

TEST(Verify, PolytopicP030IsFeasible) {
  const auto r = cli({"verify", (kData / "one_node_box_p030.json").string(), "--mode",
                      "polytopic", "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["polytopic"]["theorem6"]["feasible"], true);
  EXPECT_NEAR(j["polytopic"]["theorem6"]["alpha_star"].get<double>(), std::sqrt(0.3), 1e-6);
  EXPECT_EQ(j["polytopic"]["theorem5"]["falsified"], false);
  EXPECT_EQ(j["polytopic"]["theorem5"]["seed"], 3);
  expect_all_finite(j);
}

TEST(Verify, ToleranceFromEnvironment) {
  ::setenv("INVFLOW_TOL", "oops", 1);
  EXPECT_EQ(cli({"analyze", (kData / "one_node_ellipsoid.json").string()}).code,
            kExitInputError);
  ::setenv("INVFLOW_TOL", "1e-6", 1);
  EXPECT_EQ(verdict_tolerance_from_env(), 1e-6);
  ::unsetenv("INVFLOW_TOL");
  EXPECT_EQ(verdict_tolerance_from_env(), kVerdictTol);
}

TEST(ApproxError, TabulatedInstance) {
  const auto r = cli({"approx-error", (kData / "one_node_box_k2.json").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json a = json::parse(r.out)["approx_error"];
  EXPECT_NEAR(a["Q_over"][0][0].get<double>(), 1.0 / 0.36, 1e-6);
  EXPECT_NEAR(a["alpha_over"].get<double>(), 0.6, 1e-4);
  EXPECT_NEAR(a["error_vs_target"].get<double>(), 1.7778, 1e-3);
  EXPECT_NEAR(a["Q_under"][0][0].get<double>(), 0.25, 1e-8);
  EXPECT_EQ(a["boundary_candidate"], false);
  EXPECT_TRUE(a["note"].is_string());
}

TEST(ApproxError, NeedsBox) {
  EXPECT_EQ(cli({"approx-error", (kData / "one_node_ellipsoid.json").string()}).code,
            kExitInputError);
}

TEST(ApproxError, UnstableVertexIsNamed) {
  // A tiny box leaves the fully saturated vertex without a usable stability margin.
  const fs::path dir = scratch_dir("unstable");
  fs::create_directories(dir);
  std::ofstream(dir / "p.json") << R"({"B": [[1, 1]], "R_w": [[1]], "P": [[1]], "k": 1,
      "control": {"type": "box", "lower": [-1e-9, -1e-9], "upper": [1e-9, 1e-9]},
      "xi": 100})";
  const auto r = cli({"approx-error", (dir / "p.json").string()});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("UnstableVertex"), std::string::npos);
  EXPECT_NE(r.err.find("fully saturated"), std::string::npos);
}

TEST(Simulate, RunningBoxFile) {
  const fs::path dir = scratch_dir("sim");
  const auto r = cli({"simulate", (kData / "one_node_box.json").string(), "-o", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream csv(dir / "trajectory.csv");
  std::string header;
  std::string first;
  std::getline(csv, header);
  std::getline(csv, first);
  EXPECT_EQ(header, "t,x1,u1,u2,w1,V");
  EXPECT_EQ(first, "0,10,-2,-2,-1,100");
  std::string line;
  std::size_t rows = 1;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
  }
  const json summary = json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(summary["steps"].get<std::size_t>() + 1, rows);
  EXPECT_EQ(summary["v_monotone_outside"], true);
}

TEST(Simulate, InsideTargetConvergesImmediately) {
  const fs::path dir = scratch_dir("inside");
  fs::create_directories(dir);
  std::ofstream(dir / "p.json") << R"({"B": [[1, 1]], "R_w": [[1]], "P": [[1]],
      "control": {"type": "ellipsoid", "R_u": [[1, 0], [0, 1]]}, "x0": [0.5]})";
  ASSERT_EQ(cli({"simulate", (dir / "p.json").string(), "-o", (dir / "out").string()}).code,
            kExitOk);
  const json summary = json::parse(slurp(dir / "out" / "summary.json"));
  EXPECT_EQ(summary["converged_at"], 0.0);
  EXPECT_EQ(summary["already_in_target"], true);
}

TEST(Simulate, BitwiseRepeatable) {
  const fs::path a = scratch_dir("rep_a");
  const fs::path b = scratch_dir("rep_b");
  const std::string file = (kData / "one_node_box_p030.json").string();
  ASSERT_EQ(cli({"simulate", file, "-o", a.string()}).code, kExitOk);
  ASSERT_EQ(cli({"simulate", file, "-o", b.string()}).code, kExitOk);
  EXPECT_EQ(slurp(a / "trajectory.csv"), slurp(b / "trajectory.csv"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
}

TEST(Simulate, BatchWritesOneDirectoryPerScenario) {
  const fs::path dir = scratch_dir("batch");
  const auto r = cli({"simulate", "--batch", (kData / "batch.txt").string(), "-o", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  for (const char* stem : {"one_node_ellipsoid", "one_node_box", "two_node_ellipsoid"}) {
    EXPECT_TRUE(fs::exists(dir / stem / "trajectory.csv")) << stem;
    EXPECT_TRUE(fs::exists(dir / stem / "summary.json")) << stem;
  }
  std::ifstream csv(dir / "two_node_ellipsoid" / "trajectory.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "t,x1,x2,u1,u2,u3,w1,w2,V");
}

TEST(Simulate, UnwritablePath) {
  const fs::path dir = scratch_dir("blocked");
  fs::create_directories(dir);
  std::ofstream(dir / "file") << "x";
  const auto r = cli({"simulate", (kData / "one_node_box.json").string(), "-o",
                      (dir / "file" / "sub").string()});
  EXPECT_EQ(r.code, kExitInputError);
}

TEST(Report, RoundTripsThroughJson) {
  const auto r = cli({"verify", (kData / "two_node_ellipsoid.json").string(), "--mode",
                      "ellipsoidal"});
  const json j = json::parse(r.out);
  EXPECT_EQ(json::parse(j.dump()), j);
  const Matrix phi = matrix_from_json(j["gains"]["Phi"], "Phi");
  EXPECT_TRUE(is_positive_definite(phi));
  const Matrix H = matrix_from_json(j["gains"]["H"], "H");
  const Matrix B{{1.0, 0.0, -1.0}, {0.0, 1.0, 1.0}};
  EXPECT_LE(max_abs(B * H - Matrix::identity(2)), 1e-10);
  expect_all_finite(j);
}

}  // namespace
}  // namespace invflow
