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

#include <map>
#include <optional>
#include <string>

namespace slabgff::fitted {

// Calibrated constants persisted in fitted_constants.json.
class Constants {
 public:
  static Constants load(const std::string& path);
  static Constants parse(const std::string& json_text, const std::string& source = "<memory>");
  // Loaded once from default_path().
  static const Constants& defaults();

  double get(const std::string& name) const;
  std::optional<double> find(const std::string& name) const;
  const std::map<std::string, double>& values() const { return values_; }
  const std::string& version() const { return version_; }
  const std::string& source() const { return source_; }

 private:
  std::map<std::string, double> values_;
  std::string version_;
  std::string source_;
};

// $SLABGFF_FITTED if set, else the source-tree copy, else the installed copy.
std::string default_path();

}  // namespace slabgff::fitted
