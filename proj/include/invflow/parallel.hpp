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

#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace invflow {

/// Selects between the plain loop (kept as the reference) and the OpenMP
/// version of a data-parallel kernel. Both produce identical results: the
/// only reductions used are max and integer counts, which do not depend on
/// evaluation order.
enum class Exec { Serial, OpenMP };

inline bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace detail {

class FirstException {
 public:
  void capture() {
    std::lock_guard lock(mutex_);
    if (!error_) error_ = std::current_exception();
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace detail

/// Calls body(i) for i in [0, count).
template <class Body>
void for_each_index(std::size_t count, Body&& body, Exec exec) {
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  detail::FirstException failure;
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      failure.capture();
    }
  }
  failure.rethrow();
}

/// max_i value(i) over [0, count); -inf for an empty range.
template <class Value>
double max_over(std::size_t count, Value&& value, Exec exec) {
  double best = -std::numeric_limits<double>::infinity();
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < count; ++i) {
      const double v = value(i);
      if (v > best) best = v;
    }
    return best;
  }
  detail::FirstException failure;
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for reduction(max : best) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const double v = value(static_cast<std::size_t>(i));
      if (v > best) best = v;
    } catch (...) {
      failure.capture();
    }
  }
  failure.rethrow();
  return best;
}

}  // namespace invflow
