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

#include "invflow/model.hpp"

#include <cmath>
#include <string>

#include "invflow/error.hpp"
#include "invflow/numerics.hpp"

namespace invflow {

namespace {

void require_pd(const Matrix& m, std::size_t n, const char* name) {
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(name) + " must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  if (!m.all_finite()) throw Error(ErrorCode::NonFinite, name);
  if (asymmetry(m) > kSymmetryTol * frobenius_norm(m)) {
    throw Error(ErrorCode::NotPositiveDefinite, std::string(name) + " (not symmetric)");
  }
  if (!is_positive_definite(m)) throw Error(ErrorCode::NotPositiveDefinite, name);
}

void require_vector(const Vector& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(name) + " must have " + std::to_string(n) + " entries");
  }
  for (double x : v)
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, name);
}

}  // namespace

std::size_t numerical_rank(const Matrix& m, double rel_tol) {
  Matrix w = m;
  const double tol = rel_tol * frobenius_norm(m);
  std::vector<bool> used(w.rows(), false);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < w.cols(); ++c) {
    std::size_t piv = w.rows();
    for (std::size_t r = 0; r < w.rows(); ++r)
      if (!used[r] && (piv == w.rows() || std::abs(w(r, c)) > std::abs(w(piv, c)))) piv = r;
    if (piv == w.rows() || !(std::abs(w(piv, c)) > tol)) continue;
    used[piv] = true;
    ++rank;
    for (std::size_t r = 0; r < w.rows(); ++r) {
      if (used[r]) continue;
      const double f = w(r, c) / w(piv, c);
      for (std::size_t k = c; k < w.cols(); ++k) w(r, k) -= f * w(piv, k);
    }
  }
  return rank;
}

Problem validate(Problem p) {
  const Matrix& B = p.network.B;
  if (B.empty()) throw Error(ErrorCode::DimensionMismatch, "B is empty");
  if (!B.all_finite()) throw Error(ErrorCode::NonFinite, "B");
  const std::size_t n = B.rows();
  const std::size_t m = B.cols();
  if (m < n || numerical_rank(B) != n) {
    throw Error(ErrorCode::RankDeficientB, "B must have full row rank with m >= n");
  }

  require_pd(p.demand.R_w, n, "R_w");

  if (const auto* ell = std::get_if<EllipsoidControl>(&p.control)) {
    require_pd(ell->R_u, m, "R_u");
  } else {
    const auto& box = std::get<BoxControl>(p.control);
    require_vector(box.lower, m, "lower");
    require_vector(box.upper, m, "upper");
    for (std::size_t i = 0; i < m; ++i) {
      if (!(box.lower[i] < 0.0 && 0.0 < box.upper[i])) {
        throw Error(ErrorCode::BoxExcludesZero,
                    "control " + std::to_string(i) + " bounds must satisfy lower < 0 < upper");
      }
    }
  }

  require_pd(p.target.P, n, "P");
  p.target.Q = symmetrized(inverse(p.target.P));

  if (p.initial.x0) {
    require_vector(*p.initial.x0, n, "x0");
    p.initial.xi = quad_form(p.target.P, *p.initial.x0);
    p.already_in_target = *p.initial.xi < 1.0;
  } else if (p.initial.xi) {
    if (!std::isfinite(*p.initial.xi)) throw Error(ErrorCode::NonFinite, "xi");
    if (*p.initial.xi < 1.0) throw Error(ErrorCode::XiBelowOne, "xi must be >= 1");
    p.already_in_target = false;
  }

  if (p.k && !(std::isfinite(*p.k) && *p.k > 0.0)) {
    throw Error(ErrorCode::InvalidScenario, "gain k must be positive and finite");
  }
  return p;
}

}  // namespace invflow
