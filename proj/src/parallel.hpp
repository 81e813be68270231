// Copyright 2026 The eitspec Authors
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
#include <vector>

namespace eitspec::detail {

// Runs fn(i) for i in [0, n), concurrently when OpenMP is enabled. Each
// index writes only its own slot; exceptions are captured per index so the
// caller sees the same failure regardless of scheduling.
template <typename Fn>
std::vector<std::exception_ptr> parallel_for(std::size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#if defined(EITSPEC_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (long i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  return errors;
}

inline std::exception_ptr first_error(
    const std::vector<std::exception_ptr>& errors, std::size_t* index) {
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i]) {
      if (index) *index = i;
      return errors[i];
    }
  }
  return nullptr;
}

}  // namespace eitspec::detail
