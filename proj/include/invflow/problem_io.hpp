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
#include <optional>
#include <string>

#include <json.hpp>

#include "invflow/model.hpp"
#include "invflow/simulate.hpp"

namespace invflow {

/// The optional "sim" block of a problem file.
struct SimSettings {
  double dt = 1e-3;
  double t_max = 50.0;
  DemandModel demand;
};

struct ProblemFile {
  Problem problem;  ///< validated
  std::optional<SimSettings> sim;
};

/// Parses and validates a problem document. Matrices are row-major nested
/// arrays; entries of B may also be decimal or "p/q" strings. Unknown keys
/// are rejected. Throws Error (Parse or a validation code).
ProblemFile parse_problem(const nlohmann::json& doc);
ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem_file(const std::filesystem::path& path);

nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const Vector& v);
Matrix matrix_from_json(const nlohmann::json& j, const char* name);

}  // namespace invflow
