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

// rtqem: run, compare and sweep RTQEM training experiments.
//
//   rtqem run <config> [--large]
//   rtqem compare <dir>... [--csv FILE]
//   rtqem sweep-threshold <config> --eps 0,0.05,0.1,0.2 [--large]
//
// Output directories resolve against $RTQEM_OUTPUT_ROOT (default ./runs).
// Exit status: 0 ok, 1 other failure, 2 configuration or input error,
// 3 numeric failure.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "rtqem/config.hpp"
#include "rtqem/errors.hpp"
#include "rtqem/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr std::size_t kLargeQubits = 6;

void check_size(const rtqem::RunConfig& cfg, bool large) {
  if (cfg.model.n_qubits > kLargeQubits && !large) {
    throw rtqem::ConfigError("n_qubits = " + std::to_string(cfg.model.n_qubits) +
                             " needs --large (density-matrix cost grows as 4^n)");
  }
}

std::vector<double> parse_eps(const std::string& list) {
  std::vector<double> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == "inf" || item == "+inf") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw rtqem::ConfigError("cannot parse threshold '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-time quantum error mitigation lab"};
  app.set_version_flag("--version", rtqem::version_string());
  app.require_subcommand(1);

  std::string config_path;
  bool large = false;
  auto* run = app.add_subcommand("run", "train one configuration and write its artifacts");
  run->add_option("config", config_path, "run configuration (.toml or .json)")->required();
  run->add_flag("--large", large, "allow more than 6 qubits");

  std::vector<std::string> dirs;
  std::string csv_out;
  auto* compare = app.add_subcommand("compare", "tabulate final MSE of finished runs");
  compare->add_option("dirs", dirs, "artifact directories")->required();
  compare->add_option("--csv", csv_out, "also write the table as CSV");

  std::string eps_list;
  auto* sweep = app.add_subcommand("sweep-threshold", "RTQEM runs over drift thresholds");
  sweep->add_option("config", config_path, "base configuration with a noise walk")->required();
  sweep->add_option("--eps", eps_list, "comma-separated thresholds, inf allowed")->required();
  sweep->add_flag("--large", large, "allow more than 6 qubits");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const rtqem::RunConfig cfg = rtqem::load_config(config_path);
      check_size(cfg, large);
      const auto dir = rtqem::run_directory(cfg, rtqem::output_root());
      const auto out = rtqem::run_experiment(cfg, dir);
      std::cout << cfg.name << ": mode " << rtqem::to_string(cfg.training.mode) << ", mse "
                << rtqem::format_real(out.artifacts.mse) << ", relearns " << out.artifacts.relearn_count << " -> "
                << dir.string() << '\n';
    } else if (*compare) {
      std::vector<std::filesystem::path> paths(dirs.begin(), dirs.end());
      const auto table = rtqem::compare_runs(paths);
      std::cout << rtqem::render(table);
      if (!csv_out.empty()) {
        std::ofstream out(csv_out);
        if (!out) throw std::runtime_error("cannot write " + csv_out);
        out << rtqem::render_csv(table);
      }
    } else if (*sweep) {
      const rtqem::RunConfig cfg = rtqem::load_config(config_path);
      check_size(cfg, large);
      const auto thresholds = parse_eps(eps_list);
      const auto dir = rtqem::run_directory(cfg, rtqem::output_root());
      const auto points = rtqem::sweep_threshold(cfg, thresholds, dir);
      std::cout << "epsilon  relearns  noiseless_loss  mse\n";
      for (const auto& p : points) {
        std::cout << rtqem::format_real(p.epsilon) << "  " << p.relearn_count << "  "
                  << rtqem::format_real(p.final_replay_loss) << "  " << rtqem::format_real(p.mse) << '\n';
      }
      std::cout << "-> " << (dir / "sweep.csv").string() << '\n';
    }
  } catch (const rtqem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rtqem::ArtifactError& e) {
    std::cerr << "artifact error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rtqem::CsvError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const rtqem::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
