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

#include "manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "json.hpp"
#include "slabgff/rng.hpp"
#include "slabgff/version.hpp"

namespace slabgff::cli {

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["run_id"] = run_id;
  j["command"] = command;
  j["params"] = params;
  j["master_seed"] = master_seed;
  j["started"] = started;
  j["finished"] = finished;
  j["code_version"] = code_version;
  j["outputs"] = outputs;
  j["timing"] = timing;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  RunManifest m;
  m.run_id = j.at("run_id").get<std::string>();
  m.command = j.at("command").get<std::string>();
  m.params = j.at("params").get<std::map<std::string, std::string>>();
  m.master_seed = j.at("master_seed").get<std::uint64_t>();
  m.started = j.at("started").get<std::string>();
  m.finished = j.at("finished").get<std::string>();
  m.code_version = j.at("code_version").get<std::string>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.timing = j.at("timing").get<double>();
  return m;
}

std::string make_run_id(const std::string& command, const std::map<std::string, std::string>& params,
                        std::uint64_t seed) {
  std::string key = command + '\n' + version_string() + '\n' + std::to_string(seed);
  for (const auto& [k, v] : params) key += '\n' + k + '=' + v;
  // FNV-1a folded through splitmix
  std::uint64_t hsh = 1469598103934665603ULL;
  for (unsigned char c : key) {
    hsh ^= c;
    hsh *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng::splitmix64(hsh)));
  return buf;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace slabgff::cli
