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

#include "amg/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "amg/common.hpp"

namespace amg {
namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot io assumes a little-endian host");

constexpr char kMagic[4] = {'A', 'M', 'G', 'P'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ConfigError("truncated parameter snapshot");
  return value;
}

}  // namespace

void write_param_snapshot(const std::string& path,
                          const ParamSnapshot& entries) {
  std::ofstream out(path, std::ios::binary);
  AMG_CHECK_MSG(static_cast<bool>(out), "cannot open snapshot for writing");
  out.write(kMagic, 4);
  write_raw(out, kVersion);
  write_raw(out, static_cast<std::uint32_t>(entries.size()));
  for (const auto& [name, values] : entries) {
    write_raw(out, static_cast<std::uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_raw(out, static_cast<std::uint64_t>(values.size()));
    out.write(reinterpret_cast<const char*>(values.data()),
              static_cast<std::streamsize>(values.size() * sizeof(double)));
  }
  AMG_CHECK_MSG(static_cast<bool>(out), "snapshot write failed");
}

ParamSnapshot read_param_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open snapshot '" + path + "'");
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw ConfigError("not a parameter snapshot: '" + path + "'");
  const auto version = read_raw<std::uint32_t>(in);
  if (version != kVersion)
    throw ConfigError("unsupported snapshot version " +
                      std::to_string(version));
  const auto count = read_raw<std::uint32_t>(in);
  ParamSnapshot entries;
  entries.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name_len = read_raw<std::uint32_t>(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const auto size = read_raw<std::uint64_t>(in);
    Eigen::VectorXd values(static_cast<Eigen::Index>(size));
    in.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(size * sizeof(double)));
    if (!in) throw ConfigError("truncated parameter snapshot");
    entries.emplace_back(std::move(name), std::move(values));
  }
  return entries;
}

}  // namespace amg
