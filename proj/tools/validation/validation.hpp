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
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "slabgff/fitted.hpp"

namespace slabgff::validation {

enum class Scale { kQuick, kDesk, kExtended };
Scale parse_scale(const std::string& s);
const char* scale_name(Scale s);

enum class Status { kPass, kFail, kSkip };
const char* status_name(Status s);

struct Record {
  std::string id;
  std::string title;
  Status status = Status::kSkip;
  double seconds = 0;
  double time_limit = 0;  // 0: none
  nlohmann::ordered_json measured = nlohmann::ordered_json::object();
  std::string message;
};

nlohmann::ordered_json to_json(const Record& r);

struct Options {
  Scale scale = Scale::kDesk;
  int threads = 0;
  std::uint64_t seed = 0x5EED2026;
  std::ostream* log = nullptr;
  const fitted::Constants* constants = nullptr;  // nullptr: defaults()
};

// Runs criteria and module checks. Monte-Carlo data shared between criteria
// is kept for the lifetime of the runner.
class Runner {
 public:
  explicit Runner(Options opt);
  ~Runner();

  // Suites: bessel, slab, greens, capacity, gff, predictions, all.
  static std::vector<std::string> suite_ids(const std::string& suite);
  static std::vector<std::string> acceptance_ids();
  static std::string title(const std::string& id);

  Record run(const std::string& id);
  std::vector<Record> run_suite(const std::string& suite);

  // Reaches of the origin cluster for samples [0, count), extended on demand.
  const std::vector<double>& reaches(std::int64_t N, int h, std::int64_t M, std::size_t count,
                                     double stop_norm);

  const Options& options() const { return opt_; }
  const fitted::Constants& constants() const;

 private:
  struct Cache;
  Options opt_;
  std::unique_ptr<Cache> cache_;
};

nlohmann::ordered_json report_json(const std::vector<Record>& records, const Options& opt);
bool all_passed(const std::vector<Record>& records);

}  // namespace slabgff::validation
