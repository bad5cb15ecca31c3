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

#ifndef AMG_SNAPSHOT_HPP_
#define AMG_SNAPSHOT_HPP_

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace amg {

// Flat-array parameter snapshots for run resumption.
//
// File layout (all integers little-endian):
//   bytes 0-3   magic "AMGP"
//   bytes 4-7   uint32 format version (1)
//   bytes 8-11  uint32 entry count
//   per entry:  uint32 name length, name bytes,
//               uint64 value count, IEEE-754 doubles (little-endian)
using ParamSnapshot = std::vector<std::pair<std::string, Eigen::VectorXd>>;

void write_param_snapshot(const std::string& path,
                          const ParamSnapshot& entries);

// Throws ConfigError on a missing file, bad magic, or unknown version.
ParamSnapshot read_param_snapshot(const std::string& path);

}  // namespace amg

#endif  // AMG_SNAPSHOT_HPP_
