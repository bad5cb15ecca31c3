// Copyright 2026 The amg-lab Authors. All rights reserved.
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

#ifndef AMG_COMMON_HPP_
#define AMG_COMMON_HPP_

#include <sstream>
#include <stdexcept>
#include <string>

namespace amg {

// Raised for invalid user-facing configuration (bad game name, bad config
// fields). Maps to CLI exit code 1.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an iterative routine cannot certify its result (e.g. a power
// iteration that fails to converge). Carries a human-readable diagnostic.
struct DiagnosticError : std::runtime_error {
  explicit DiagnosticError(const std::string& what)
      : std::runtime_error(what) {}
};

namespace internal {
[[noreturn]] inline void check_failed(const char* expr, const char* file,
                                      int line, const std::string& msg) {
  std::ostringstream os;
  os << "contract violation: " << expr << " at " << file << ":" << line;
  if (!msg.empty()) os << " (" << msg << ")";
  throw std::logic_error(os.str());
}
}  // namespace internal

// Contract checks stay on in release builds; violating a precondition is a
// bug in the caller, not a recoverable condition.
#define AMG_CHECK(cond)                                               \
  do {                                                                \
    if (!(cond))                                                      \
      ::amg::internal::check_failed(#cond, __FILE__, __LINE__, "");   \
  } while (0)

#define AMG_CHECK_MSG(cond, msg)                                      \
  do {                                                                \
    if (!(cond))                                                      \
      ::amg::internal::check_failed(#cond, __FILE__, __LINE__, msg);  \
  } while (0)

}  // namespace amg

#endif  // AMG_COMMON_HPP_
