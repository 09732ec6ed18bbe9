// Copyright 2026 The rtqem Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Run configuration: a flat TOML-style key/value file (or the equivalent JSON
// object) resolved into typed settings.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rtqem/model.hpp"
#include "rtqem/noise.hpp"
#include "rtqem/targets.hpp"
#include "rtqem/training.hpp"

namespace rtqem {

/// Bad or missing configuration. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string name;
  TrainingConfig training;
  ModelSpec model;
  TargetSpec target;
  std::optional<NoiseModel> noise;
  std::vector<std::array<double, 2>> readout_flips;  // per qubit, as configured
  std::filesystem::path output_dir;  // relative paths resolve against the output root
  bool write_svg = true;
};

/// Parses the TOML subset used by run configs: comments, `key = value` with
/// strings, integers, floats (inf allowed), booleans and single-line arrays.
nlohmann::json parse_toml(std::string_view text);

/// Schema check and conversion. Unknown keys and missing required keys throw
/// ConfigError naming the key. `stem` names the run when `name` is absent.
RunConfig resolve_config(const nlohmann::json& raw, std::string_view stem = "run");

/// Reads `path` as JSON when it ends in .json, as TOML otherwise.
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved settings, every default spelled out.
nlohmann::json to_json(const RunConfig& config);

}  // namespace rtqem
