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

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "invflow/problem_io.hpp"
#include "invflow/report.hpp"
#include "invflow/simulate.hpp"

namespace invflow {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitInputError = 2, kExitNegative = 3 };

/// Reads INVFLOW_TOL, falling back to kVerdictTol. Throws Error(Parse) on a
/// value that is not a positive finite number.
double verdict_tolerance_from_env();

/// Scenario for `simulate`: saturated law matching the control bound, the
/// report's k and feedback gain, and x0 (or a point with V = xi on the first
/// axis when only xi is given).
Scenario make_scenario(const ProblemFile& file, const Analysis& analysis);

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
nlohmann::json trajectory_summary(const Trajectory& trajectory, const Problem& problem);

/// Writes trajectory.csv and summary.json into `dir`, creating it if needed.
void write_trajectory_files(const std::filesystem::path& dir, const Trajectory& trajectory,
                            const Problem& problem);

/// Problem paths listed one per line; blank lines and lines starting with
/// '#' are skipped. Relative paths resolve against the list's directory.
std::vector<std::filesystem::path> read_batch_list(const std::filesystem::path& list);

/// Entry point behind the `invflow` executable; `args` excludes the program
/// name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace invflow
