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

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "rtqem/mitigation.hpp"
#include "rtqem/model.hpp"
#include "rtqem/noise.hpp"
#include "rtqem/rng.hpp"

namespace rtqem {

/// Inputs in [0,1]^n with targets rescaled to [0,1]. `target_offset` and
/// `target_scale` undo the rescaling: raw = offset + scale * target.
struct Dataset {
  std::vector<Eigen::VectorXd> inputs;
  Eigen::VectorXd targets;
  double target_offset = 0.0;
  double target_scale = 1.0;

  std::size_t size() const { return inputs.size(); }
  std::size_t n_dim() const { return inputs.empty() ? 0 : static_cast<std::size_t>(inputs.front().size()); }
};

void validate(const Dataset& data);

/// Mean of squared residuals.
double mse_loss(const Eigen::VectorXd& predictions, const Eigen::VectorXd& targets);

/// Two-term shift rule for rotation generators: (f(mu + pi/2) - f(mu - pi/2)) / 2.
template <typename F>
double psr_derivative(F&& evaluate, double mu) {
  constexpr double shift = std::numbers::pi / 2.0;
  const double forward = evaluate(mu + shift);
  const double backward = evaluate(mu - shift);
  return 0.5 * (forward - backward);
}

struct AdamState {
  Eigen::VectorXd first_moment;
  Eigen::VectorXd second_moment;
  std::size_t step_count = 0;
  double eta = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState zeros(std::size_t n_params, double eta) {
    AdamState s;
    s.first_moment = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_params));
    s.second_moment = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_params));
    s.eta = eta;
    return s;
  }
};

/// Bias-corrected Adam update. Returns the advanced state and the new parameters.
std::pair<AdamState, Eigen::VectorXd> adam_step(AdamState state, Eigen::VectorXd params, const Eigen::VectorXd& gradient);

enum class TrainingMode { noiseless, noisy, fqem, rtqem };

std::string_view to_string(TrainingMode mode);
TrainingMode parse_mode(std::string_view text);

struct TrainingConfig {
  TrainingMode mode = TrainingMode::noiseless;
  std::size_t n_epochs = 50;
  std::optional<std::uint64_t> n_shots = 10000;  // empty: exact expectations
  double eta = 0.1;
  std::uint64_t seed = 1234;
  double epsilon_ell = 0.1;  // drift threshold; +inf disables re-learning
  std::optional<RandomWalkConfig> walk;
  std::size_t mitigation_set_size = 20;
  std::size_t n_runs = 20;  // repetitions per point in the final evaluation
  /// Learn the map once before the first epoch (not counted as a re-learn).
  bool learn_initial_map = true;
  /// Minimum epochs between two re-learns; 0 disables the guard.
  std::size_t min_epochs_between_relearns = 0;
  std::size_t unfold_iterations = 0;
  bool record_params_history = false;
};

void validate(const TrainingConfig& config);

struct GradientResult {
  Eigen::VectorXd gradient;
  Eigen::VectorXd predictions;
  double loss = 0.0;
  std::size_t evaluations = 0;
};

/// Loss and PSR gradient of the MSE loss. Every circuit expectation, the
/// predictions and both shifted terms, is passed through `map` when given.
GradientResult loss_gradient(const Eigen::VectorXd& params, const ModelSpec& spec, const Dataset& data,
                             const Backend& backend, const std::optional<NoiseMap>& map, Rng& rng);

struct Evaluation {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;  // population standard deviation over the runs
  double mse = 0.0;
};

/// Repeats every prediction `n_runs` times and scores the per-point means.
Evaluation evaluate_mse(const Eigen::VectorXd& params, const ModelSpec& spec, const Dataset& data,
                        const Backend& backend, const std::optional<NoiseMap>& map, std::size_t n_runs, Rng& rng);

struct RunArtifacts {
  std::vector<double> loss_history;
  std::vector<double> mean_abs_gradient_history;
  std::vector<double> lambda_eff_history;  // map in force at each epoch
  std::vector<double> drift_history;       // rtqem only
  std::vector<PauliNoiseParams> noise_history;
  std::vector<NoiseMap> map_history;  // every learn event, the initial one included
  std::vector<Eigen::VectorXd> params_history;  // parameters used at each epoch, when recorded
  std::size_t relearn_count = 0;
  Eigen::VectorXd initial_params;
  Eigen::VectorXd final_params;
  std::optional<NoiseMap> final_map;
  std::optional<NoiseModel> final_noise;
  Evaluation evaluation;
  double mse = 0.0;
};

/// Full-batch Adam training in one of the four modes. Throws NumericError on a
/// NaN loss.
RunArtifacts train(const TrainingConfig& config, const ModelSpec& spec, const Dataset& data,
                   const std::optional<NoiseModel>& noise);

/// Exact noiseless loss of a parameter vector.
double noiseless_loss(const Eigen::VectorXd& params, const ModelSpec& spec, const Dataset& data);

}  // namespace rtqem
