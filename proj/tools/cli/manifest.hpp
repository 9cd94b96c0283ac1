// Copyright 2026 The slabgff Authors
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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace slabgff::cli {

struct RunManifest {
  std::string run_id;
  std::string command;
  std::map<std::string, std::string> params;
  std::uint64_t master_seed = 0;
  std::string started;
  std::string finished;
  std::string code_version;
  std::vector<std::string> outputs;
  double timing = 0;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
  bool operator==(const RunManifest&) const = default;
};

// Hash of command, parameters, seed and version; identical runs share it.
std::string make_run_id(const std::string& command, const std::map<std::string, std::string>& params,
                        std::uint64_t seed);

// UTC timestamp, ISO 8601.
std::string utc_now();

}  // namespace slabgff::cli
