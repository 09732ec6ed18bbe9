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

#include "rtqem/runner.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "rtqem/svg.hpp"
#include "rtqem/targets.hpp"

#ifndef RTQEM_VERSION
#define RTQEM_VERSION "0.0.0"
#endif
#ifndef RTQEM_GIT_REVISION
#define RTQEM_GIT_REVISION "unknown"
#endif

namespace rtqem {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path output_root() {
  const char* env = std::getenv(kOutputRootEnv);
  if (env == nullptr || *env == '\0') return "runs";
  return env;
}

fs::path run_directory(const RunConfig& config, const fs::path& root) {
  if (config.output_dir.is_absolute()) return config.output_dir;
  return root / config.output_dir;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string version_string() { return std::string(RTQEM_VERSION) + " (" + RTQEM_GIT_REVISION + ")"; }

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json map_json(const NoiseMap& m) {
  return {{"epoch", m.learned_at_epoch}, {"lambda_0", m.lambda_0}, {"sigma", m.sigma}, {"lambda_eff", m.lambda_eff}};
}

std::string loss_csv(const RunArtifacts& a) {
  std::ostringstream out;
  out << "epoch,loss,lambda_eff,drift,p_x,p_y,p_z\n";
  for (std::size_t e = 0; e < a.loss_history.size(); ++e) {
    out << e << ',' << format_real(a.loss_history[e]) << ',' << format_real(a.lambda_eff_history[e]) << ',';
    if (e < a.drift_history.size()) out << format_real(a.drift_history[e]);
    out << ',';
    if (e < a.noise_history.size()) {
      const PauliNoiseParams& p = a.noise_history[e];
      out << format_real(p.p_x) << ',' << format_real(p.p_y) << ',' << format_real(p.p_z);
    } else {
      out << ",,";
    }
    out << '\n';
  }
  return out.str();
}

std::string gradients_csv(const RunArtifacts& a) {
  std::ostringstream out;
  out << "epoch,mean_abs_gradient\n";
  for (std::size_t e = 0; e < a.mean_abs_gradient_history.size(); ++e) {
    out << e << ',' << format_real(a.mean_abs_gradient_history[e]) << '\n';
  }
  return out.str();
}

std::string predictions_csv(const Dataset& data, const Evaluation& ev) {
  std::ostringstream out;
  const std::size_t n = data.n_dim();
  if (n == 1) {
    out << "x,";
  } else {
    for (std::size_t k = 0; k < n; ++k) out << 'x' << k + 1 << ',';
  }
  out << "target,mean,std\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t k = 0; k < n; ++k) out << format_real(data.inputs[i](static_cast<Eigen::Index>(k))) << ',';
    out << format_real(data.targets(ii)) << ',' << format_real(ev.means(ii)) << ',' << format_real(ev.stds(ii)) << '\n';
  }
  return out.str();
}

std::string predictions_svg(const RunConfig& config, const Dataset& data, const Evaluation& ev) {
  Series target{"target", "black", {}, {}, {}};
  Series fit{std::string(to_string(config.training.mode)), "crimson", {}, {}, {}};
  const bool one_d = data.n_dim() == 1;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double x = one_d ? data.inputs[i](0) : static_cast<double>(i);
    target.x.push_back(x);
    target.y.push_back(data.targets(ii));
    fit.x.push_back(x);
    fit.y.push_back(ev.means(ii));
    fit.err.push_back(ev.stds(ii));
  }
  const bool log_x = one_d && config.target.sampling == Sampling::logarithmic;
  return line_plot({target, fit}, config.name, log_x);
}

json artifacts_json(const RunConfig& config, const RunOutcome& outcome) {
  const RunArtifacts& a = outcome.artifacts;
  json j;
  j["schema_version"] = kArtifactSchemaVersion;
  j["version"] = RTQEM_VERSION;
  j["git_revision"] = RTQEM_GIT_REVISION;
  j["config"] = to_json(config);
  j["n_epochs"] = a.loss_history.size();
  j["loss_history"] = a.loss_history;
  j["mean_abs_gradient_history"] = a.mean_abs_gradient_history;
  json lambda = json::array();
  for (std::size_t e = 0; e < a.lambda_eff_history.size(); ++e) lambda.push_back({e, a.lambda_eff_history[e]});
  j["lambda_eff_history"] = lambda;
  j["drift_history"] = a.drift_history;
  json noise = json::array();
  for (const PauliNoiseParams& p : a.noise_history) noise.push_back({p.p_x, p.p_y, p.p_z});
  j["noise_history"] = noise;
  json maps = json::array();
  for (const NoiseMap& m : a.map_history) maps.push_back(map_json(m));
  j["map_history"] = maps;
  j["relearn_count"] = a.relearn_count;
  j["initial_params"] = vec_json(a.initial_params);
  j["final_params"] = vec_json(a.final_params);
  j["final_map"] = a.final_map ? map_json(*a.final_map) : json(nullptr);
  j["mse"] = a.mse;
  j["target_offset"] = outcome.data.target_offset;
  j["target_scale"] = outcome.data.target_scale;
  if (!outcome.replay_loss.empty()) j["noiseless_replay_loss"] = outcome.replay_loss;
  return j;
}

}  // namespace

RunOutcome run_experiment(const RunConfig& config, const fs::path& directory, bool replay) {
  RunOutcome outcome;
  Rng data_rng = child_stream(config.training.seed, stream::kDataset);
  outcome.data = make_dataset(config.target, data_rng);
  if (outcome.data.n_dim() != config.model.n_qubits) {
    throw ConfigError("dataset has " + std::to_string(outcome.data.n_dim()) + " input columns, model has " +
                      std::to_string(config.model.n_qubits) + " qubits");
  }
  TrainingConfig training = config.training;
  training.record_params_history = training.record_params_history || replay;
  outcome.artifacts = train(training, config.model, outcome.data, config.noise);
  if (replay) {
    for (const Eigen::VectorXd& p : outcome.artifacts.params_history) {
      outcome.replay_loss.push_back(noiseless_loss(p, config.model, outcome.data));
    }
  }
  outcome.directory = directory;

  fs::create_directories(directory);
  write_file(directory / "artifacts.json", artifacts_json(config, outcome).dump(2) + "\n");
  write_file(directory / "loss.csv", loss_csv(outcome.artifacts));
  write_file(directory / "gradients.csv", gradients_csv(outcome.artifacts));
  write_file(directory / "predictions.csv", predictions_csv(outcome.data, outcome.artifacts.evaluation));
  if (config.write_svg) {
    write_file(directory / "predictions.svg", predictions_svg(config, outcome.data, outcome.artifacts.evaluation));
  }
  if (replay) {
    std::ostringstream out;
    out << "epoch,noiseless_loss\n";
    for (std::size_t e = 0; e < outcome.replay_loss.size(); ++e) out << e << ',' << format_real(outcome.replay_loss[e]) << '\n';
    write_file(directory / "replay.csv", out.str());
  }
  return outcome;
}

namespace {

const std::vector<std::string> kModeOrder = {"noiseless", "noisy", "fqem", "rtqem"};

}  // namespace

CompareTable compare_runs(const std::vector<fs::path>& directories) {
  if (directories.empty()) throw ArtifactError("compare needs at least one artifact directory");
  std::map<std::string, std::map<std::string, double>> values;
  std::vector<std::string> row_order;
  for (const fs::path& dir : directories) {
    const fs::path file = dir / "artifacts.json";
    std::ifstream in(file);
    if (!in) throw ArtifactError("missing " + file.string());
    json j;
    try {
      j = json::parse(in);
      const json& cfg = j.at("config");
      const std::string mode = cfg.at("mode").get<std::string>();
      std::string target = cfg.at("target").get<std::string>();
      target += " " + std::to_string(cfg.at("n_dim").get<std::size_t>()) + "d";
      const double mse = j.at("mse").get<double>();
      if (!values.contains(target)) row_order.push_back(target);
      values[target][mode] = mse;
    } catch (const json::exception& e) {
      throw ArtifactError("corrupt " + file.string() + ": " + e.what());
    }
  }
  CompareTable table;
  for (const std::string& mode : kModeOrder) {
    for (const auto& [row, cells] : values) {
      if (cells.contains(mode)) {
        table.columns.push_back(mode);
        break;
      }
    }
  }
  table.rows = row_order;
  for (const std::string& row : row_order) {
    std::vector<std::string> cells;
    for (const std::string& mode : table.columns) {
      const auto it = values[row].find(mode);
      if (it == values[row].end()) {
        cells.emplace_back("-");
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", it->second);
        cells.emplace_back(buf);
      }
    }
    table.cells.push_back(std::move(cells));
  }
  return table;
}

std::string render(const CompareTable& table) {
  std::vector<std::size_t> width;
  width.push_back(std::string("target").size());
  for (const std::string& r : table.rows) width[0] = std::max(width[0], r.size());
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    std::size_t w = table.columns[c].size() + 4;
    for (const auto& row : table.cells) w = std::max(w, row[c].size());
    width.push_back(w);
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
  std::ostringstream out;
  out << pad("target", width[0]);
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << "  " << pad("MSE_" + table.columns[c], width[c + 1]);
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << pad(table.rows[r], width[0]);
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << "  " << pad(table.cells[r][c], width[c + 1]);
    out << '\n';
  }
  return out.str();
}

std::string render_csv(const CompareTable& table) {
  std::ostringstream out;
  out << "target";
  for (const std::string& c : table.columns) out << ",mse_" << c;
  out << '\n';
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out << table.rows[r];
    for (const std::string& cell : table.cells[r]) out << ',' << cell;
    out << '\n';
  }
  return out.str();
}

std::vector<SweepPoint> sweep_threshold(const RunConfig& base, const std::vector<double>& thresholds,
                                        const fs::path& directory) {
  if (thresholds.empty()) throw ConfigError("sweep needs at least one threshold");
  if (!base.training.walk) throw ConfigError("sweep-threshold needs an evolving noise model (walk_sigma)");
  if (!base.noise) throw ConfigError("sweep-threshold needs a noise model");
  std::vector<SweepPoint> points;
  for (double eps : thresholds) {
    if (!(eps >= 0.0)) throw ConfigError("thresholds must be >= 0");
    RunConfig cfg = base;
    cfg.training.mode = TrainingMode::rtqem;
    cfg.training.epsilon_ell = eps;
    cfg.name = base.name + " eps=" + format_real(eps);
    const fs::path dir = directory / ("eps-" + format_real(eps));
    cfg.output_dir = dir;
    const RunOutcome out = run_experiment(cfg, dir, true);
    points.push_back({eps, out.artifacts.relearn_count, out.replay_loss.back(), out.artifacts.mse, dir});
  }
  std::ostringstream csv;
  csv << "epsilon,relearn_count,final_noiseless_loss,mse,directory\n";
  for (const SweepPoint& p : points) {
    csv << format_real(p.epsilon) << ',' << p.relearn_count << ',' << format_real(p.final_replay_loss) << ','
        << format_real(p.mse) << ',' << p.directory.filename().string() << '\n';
  }
  fs::create_directories(directory);
  write_file(directory / "sweep.csv", csv.str());
  return points;
}

}  // namespace rtqem
