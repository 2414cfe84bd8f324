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

#include "invflow/problem_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "invflow/error.hpp"

namespace invflow {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw Error(ErrorCode::Parse, std::string("unknown key \"") + key + "\" in " + where);
    }
  }
}

double parse_decimal(const std::string& s, const char* name) {
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::Parse, std::string(name) + ": cannot read number \"" + s + "\"");
  }
  return value;
}

// Numbers, or strings holding a decimal ("0.5") or a ratio ("1/2").
double number_from_json(const json& j, const char* name) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return parse_decimal(s, name);
    const double num = parse_decimal(s.substr(0, slash), name);
    const double den = parse_decimal(s.substr(slash + 1), name);
    if (den == 0.0) throw Error(ErrorCode::Parse, std::string(name) + ": zero denominator");
    return num / den;
  }
  throw Error(ErrorCode::Parse, std::string(name) + ": expected a number");
}

Vector vector_from_json(const json& j, const char* name) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, std::string(name) + ": expected an array");
  Vector v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(number_from_json(e, name));
  return v;
}

SimSettings parse_sim(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "sim: expected an object");
  reject_unknown_keys(j, {"dt", "t_max", "demand", "w0", "seed", "hold"}, "sim");
  SimSettings s;
  if (j.contains("dt")) s.dt = number_from_json(j["dt"], "sim.dt");
  if (j.contains("t_max")) s.t_max = number_from_json(j["t_max"], "sim.t_max");
  if (j.contains("demand")) {
    const auto& d = j["demand"];
    if (!d.is_string()) throw Error(ErrorCode::Parse, "sim.demand: expected a string");
    const std::string kind = d.get<std::string>();
    if (kind == "worst") {
      s.demand.kind = DemandKind::Worst;
    } else if (kind == "constant") {
      s.demand.kind = DemandKind::Constant;
    } else if (kind == "random") {
      s.demand.kind = DemandKind::BoundaryRandom;
    } else {
      throw Error(ErrorCode::Parse, "sim.demand must be worst, constant or random");
    }
  }
  if (j.contains("w0")) s.demand.w0 = vector_from_json(j["w0"], "sim.w0");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw Error(ErrorCode::Parse, "sim.seed: expected a non-negative integer");
    }
    s.demand.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("hold")) s.demand.hold = number_from_json(j["hold"], "sim.hold");
  if (s.demand.kind == DemandKind::Constant && s.demand.w0.empty()) {
    throw Error(ErrorCode::Parse, "sim.demand \"constant\" requires w0");
  }
  return s;
}

}  // namespace

Matrix matrix_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::Parse, std::string(name) + ": expected a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  std::vector<double> entries;
  for (std::size_t r = 0; r < rows; ++r) {
    const Vector row = vector_from_json(j[r], name);
    if (r == 0) cols = row.size();
    if (row.size() != cols || cols == 0) {
      throw Error(ErrorCode::Parse, std::string(name) + ": rows must be non-empty and equal length");
    }
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return Matrix(rows, cols, std::move(entries));
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m.row(r));
  return out;
}

json to_json(const Vector& v) { return json(v); }

ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::Parse, "problem file must be a JSON object");
  reject_unknown_keys(doc, {"B", "R_w", "control", "P", "k", "x0", "xi", "sim"}, "problem");
  for (const char* key : {"B", "R_w", "control", "P"}) {
    if (!doc.contains(key)) throw Error(ErrorCode::Parse, std::string("missing key \"") + key + "\"");
  }

  Problem p;
  p.network.B = matrix_from_json(doc["B"], "B");
  p.demand.R_w = matrix_from_json(doc["R_w"], "R_w");
  p.target.P = matrix_from_json(doc["P"], "P");

  const json& control = doc["control"];
  if (!control.is_object() || !control.contains("type") || !control["type"].is_string()) {
    throw Error(ErrorCode::Parse, "control: expected an object with a \"type\" string");
  }
  const std::string type = control["type"].get<std::string>();
  if (type == "ellipsoid") {
    reject_unknown_keys(control, {"type", "R_u"}, "control");
    if (!control.contains("R_u")) throw Error(ErrorCode::Parse, "control: missing R_u");
    p.control = EllipsoidControl{matrix_from_json(control["R_u"], "R_u")};
  } else if (type == "box") {
    reject_unknown_keys(control, {"type", "lower", "upper"}, "control");
    if (!control.contains("lower") || !control.contains("upper")) {
      throw Error(ErrorCode::Parse, "control: box needs lower and upper");
    }
    p.control = BoxControl{vector_from_json(control["lower"], "lower"),
                           vector_from_json(control["upper"], "upper")};
  } else {
    throw Error(ErrorCode::Parse, "control.type must be \"ellipsoid\" or \"box\"");
  }

  if (doc.contains("k")) p.k = number_from_json(doc["k"], "k");
  if (doc.contains("x0") && doc.contains("xi")) {
    throw Error(ErrorCode::Parse, "give either x0 or xi, not both");
  }
  if (doc.contains("x0")) p.initial.x0 = vector_from_json(doc["x0"], "x0");
  if (doc.contains("xi")) p.initial.xi = number_from_json(doc["xi"], "xi");

  ProblemFile file;
  file.problem = validate(std::move(p));
  if (doc.contains("sim")) file.sim = parse_sim(doc["sim"]);
  return file;
}

ProblemFile parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
  return parse_problem(doc);
}

ProblemFile load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str());
}

}  // namespace invflow
