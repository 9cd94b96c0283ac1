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

// Runs every acceptance criterion at desk scale and prints one line each.

#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "validation.hpp"

using namespace slabgff::validation;

int main(int argc, char** argv) {
  CLI::App app{"slabgff acceptance criteria"};
  std::string report, scale = "desk", only;
  Options opt;
  app.add_option("--report", report, "JSON report path");
  app.add_option("--scale", scale)->check(CLI::IsMember({"quick", "desk", "extended"}));
  app.add_option("--threads", opt.threads);
  app.add_option("--only", only, "single criterion id");
  CLI11_PARSE(app, argc, argv);
  opt.scale = parse_scale(scale);

  Runner runner(opt);
  const auto ids = only.empty() ? Runner::acceptance_ids() : std::vector<std::string>{only};
  std::vector<Record> records;
  for (const auto& id : ids) {
    auto r = runner.run(id);
    std::cout << std::left << std::setw(5) << r.id << std::setw(5) << status_name(r.status) << std::right
              << std::fixed << std::setprecision(1) << std::setw(9) << r.seconds << "s  " << r.title;
    if (!r.message.empty()) std::cout << "  [" << r.message << "]";
    std::cout << "\n" << std::flush;
    records.push_back(std::move(r));
    if (!report.empty()) std::ofstream(report) << report_json(records, opt).dump(2) << "\n";
  }
  return all_passed(records) ? 0 : 1;
}
