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

// Experiment driver behind the command-line verbs: runs a configuration,
// persists its artifacts, tabulates finished runs and sweeps drift thresholds.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtqem/config.hpp"
#include "rtqem/training.hpp"

namespace rtqem {

inline constexpr int kArtifactSchemaVersion = 1;
inline constexpr const char* kOutputRootEnv = "RTQEM_OUTPUT_ROOT";

/// Unreadable or malformed artifact directory. Maps to exit status 2.
class ArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// $RTQEM_OUTPUT_ROOT, or "runs" when unset or empty.
std::filesystem::path output_root();

/// The config's output directory, resolved against `root` when relative.
std::filesystem::path run_directory(const RunConfig& config, const std::filesystem::path& root);

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for the rest.
std::string format_real(double v);

std::string version_string();

struct RunOutcome {
  Dataset data;
  RunArtifacts artifacts;
  std::vector<double> replay_loss;  // noiseless loss of each epoch's parameters, when recorded
  std::filesystem::path directory;
};

/// Trains and writes artifacts.json, loss.csv, gradients.csv, predictions.csv
/// and, unless disabled, predictions.svg into `directory`.
RunOutcome run_experiment(const RunConfig& config, const std::filesystem::path& directory, bool replay = false);

struct CompareTable {
  std::vector<std::string> columns;  // modes present, in table order
  std::vector<std::string> rows;     // target labels
  std::vector<std::vector<std::string>> cells;
};

/// Collects the MSE of every artifact directory into a target x mode table.
CompareTable compare_runs(const std::vector<std::filesystem::path>& directories);
std::string render(const CompareTable& table);
std::string render_csv(const CompareTable& table);

struct SweepPoint {
  double epsilon = 0.0;
  std::size_t relearn_count = 0;
  double final_replay_loss = 0.0;
  double mse = 0.0;
  std::filesystem::path directory;
};

/// One RTQEM run per threshold with shared seeds, each replayed without noise.
/// Writes sweep.csv into `directory`.
std::vector<SweepPoint> sweep_threshold(const RunConfig& base, const std::vector<double>& thresholds,
                                        const std::filesystem::path& directory);

}  // namespace rtqem
