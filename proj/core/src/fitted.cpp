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

#include "slabgff/fitted.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "slabgff/errors.hpp"

namespace slabgff::fitted {

Constants Constants::parse(const std::string& text, const std::string& source) {
  Constants c;
  c.source_ = source;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("fitted constants: cannot parse " + source + ": " + e.what());
  }
  c.version_ = j.value("version", std::string());
  if (j.contains("constants")) {
    for (const auto& [name, v] : j.at("constants").items()) {
      if (v.is_number()) c.values_[name] = v.get<double>();
      else if (v.is_object() && v.contains("value")) c.values_[name] = v.at("value").get<double>();
    }
  }
  return c;
}

Constants Constants::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("fitted constants: cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str(), path);
}

const Constants& Constants::defaults() {
  static const Constants c = load(default_path());
  return c;
}

double Constants::get(const std::string& name) const {
  const auto v = find(name);
  if (!v) throw PreconditionError("fitted constant '" + name + "' missing from " + source_);
  return *v;
}

std::optional<double> Constants::find(const std::string& name) const {
  const auto it = values_.find(name);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string default_path() {
  if (const char* env = std::getenv("SLABGFF_FITTED"); env && *env) return env;
  const std::filesystem::path src = std::filesystem::path(SLABGFF_SOURCE_DATA_DIR) / "fitted_constants.json";
  if (std::filesystem::exists(src)) return src.string();
  return (std::filesystem::path(SLABGFF_INSTALL_DATA_DIR) / "fitted_constants.json").string();
}

}  // namespace slabgff::fitted
