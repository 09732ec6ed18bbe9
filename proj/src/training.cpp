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

#include "rtqem/training.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>

#include "rtqem/densesim.hpp"
#include "rtqem/errors.hpp"

namespace rtqem {

void validate(const Dataset& data) {
  if (data.inputs.empty()) throw std::invalid_argument("dataset is empty");
  if (static_cast<std::size_t>(data.targets.size()) != data.inputs.size()) {
    throw std::invalid_argument("dataset inputs and targets differ in length");
  }
  const auto dim = data.inputs.front().size();
  for (const auto& x : data.inputs) {
    if (x.size() != dim) throw std::invalid_argument("dataset inputs differ in dimension");
  }
}

double mse_loss(const Eigen::VectorXd& predictions, const Eigen::VectorXd& targets) {
  if (predictions.size() != targets.size()) throw std::invalid_argument("mse_loss: length mismatch");
  if (predictions.size() == 0) throw std::invalid_argument("mse_loss: empty input");
  return (predictions - targets).squaredNorm() / static_cast<double>(predictions.size());
}

std::pair<AdamState, Eigen::VectorXd> adam_step(AdamState state, Eigen::VectorXd params, const Eigen::VectorXd& gradient) {
  if (params.size() != gradient.size() || state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size()) {
    throw std::invalid_argument("adam_step: dimension mismatch");
  }
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * gradient;
  state.second_moment = state.beta2 * state.second_moment + (1.0 - state.beta2) * gradient.cwiseAbs2();
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double m_hat = state.first_moment(i) / c1;
    const double v_hat = state.second_moment(i) / c2;
    params(i) -= state.eta * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
  return {std::move(state), std::move(params)};
}

std::string_view to_string(TrainingMode mode) {
  switch (mode) {
    case TrainingMode::noiseless: return "noiseless";
    case TrainingMode::noisy: return "noisy";
    case TrainingMode::fqem: return "fqem";
    case TrainingMode::rtqem: return "rtqem";
  }
  return "?";
}

TrainingMode parse_mode(std::string_view text) {
  if (text == "noiseless") return TrainingMode::noiseless;
  if (text == "noisy") return TrainingMode::noisy;
  if (text == "fqem") return TrainingMode::fqem;
  if (text == "rtqem") return TrainingMode::rtqem;
  throw std::invalid_argument("unknown training mode '" + std::string(text) + "'");
}

void validate(const TrainingConfig& config) {
  if (config.n_epochs == 0) throw std::invalid_argument("n_epochs must be >= 1");
  if (config.n_shots && *config.n_shots == 0) throw std::invalid_argument("n_shots must be >= 1");
  if (!(config.eta > 0.0) || !std::isfinite(config.eta)) throw std::invalid_argument("eta must be positive");
  if (!(config.epsilon_ell >= 0.0)) throw std::invalid_argument("epsilon_ell must be >= 0");
  if (config.n_runs == 0) throw std::invalid_argument("n_runs must be >= 1");
  const bool mitigated = config.mode == TrainingMode::fqem || config.mode == TrainingMode::rtqem;
  if (mitigated && config.mitigation_set_size < 2) throw std::invalid_argument("mitigation set size must be >= 2");
  if (config.walk) {
    if (config.mode == TrainingMode::noiseless) throw std::invalid_argument("noise walk needs a noisy training mode");
    if (!(config.walk->sigma_delta >= 0.0)) throw std::invalid_argument("walk sigma_delta must be >= 0");
  }
}

namespace {

// d(gate angle)/d(theta_k) for the four angles of an uploading gate.
double angle_coefficient(std::size_t k, double kappa, double x) {
  switch (k) {
    case 0: return kappa;
    case 2: return x;
    default: return 1.0;
  }
}

}  // namespace

GradientResult loss_gradient(const Eigen::VectorXd& params, const ModelSpec& spec, const Dataset& data,
                             const Backend& backend, const std::optional<NoiseMap>& map, Rng& rng) {
  validate(data);
  const UploadingParams theta = UploadingParams::unflatten(params, spec);
  const std::size_t n_data = data.size();
  const auto n_params = static_cast<Eigen::Index>(spec.n_params());

  GradientResult result;
  result.gradient = Eigen::VectorXd::Zero(n_params);
  result.predictions = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_data));

  auto evaluate = [&](const Circuit& c) {
    ++result.evaluations;
    const double v = execute(c, backend, rng);
    return map ? mitigate(v, *map) : v;
  };

  Eigen::VectorXd derivative(n_params);
  for (std::size_t i = 0; i < n_data; ++i) {
    const Eigen::VectorXd& x = data.inputs[i];
    Circuit circuit = build_circuit(x, theta, spec);
    const double y_hat = evaluate(circuit);
    result.predictions(static_cast<Eigen::Index>(i)) = y_hat;

    for (std::size_t l = 0; l < spec.n_layers; ++l) {
      for (std::size_t j = 0; j < spec.n_qubits; ++j) {
        const double xj = x(static_cast<Eigen::Index>(j));
        const double kappa = spec.activation(xj);
        for (std::size_t k = 0; k < 4; ++k) {
          Gate& gate = circuit.gates[rotation_gate_index(spec, l, j, k / 2)];
          const double angle = gate.angle;
          const double d_angle = psr_derivative(
              [&](double shifted) {
                gate.angle = shifted;
                return evaluate(circuit);
              },
              angle);
          gate.angle = angle;
          derivative(static_cast<Eigen::Index>(UploadingParams::flat_index(l, j, k, spec.n_qubits))) =
              angle_coefficient(k, kappa, xj) * d_angle;
        }
      }
    }
    const double residual = y_hat - data.targets(static_cast<Eigen::Index>(i));
    result.gradient += (2.0 / static_cast<double>(n_data)) * residual * derivative;
  }
  result.loss = mse_loss(result.predictions, data.targets);
  return result;
}

Evaluation evaluate_mse(const Eigen::VectorXd& params, const ModelSpec& spec, const Dataset& data,
                        const Backend& backend, const std::optional<NoiseMap>& map, std::size_t n_runs, Rng& rng) {
  if (n_runs == 0) throw std::invalid_argument("n_runs must be >= 1");
  validate(data);
  const UploadingParams theta = UploadingParams::unflatten(params, spec);
  const auto n = static_cast<Eigen::Index>(data.size());
  Evaluation out;
  out.means = Eigen::VectorXd::Zero(n);
  out.stds = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd runs(static_cast<Eigen::Index>(n_runs));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Circuit circuit = build_circuit(data.inputs[static_cast<std::size_t>(i)], theta, spec);
    for (Eigen::Index r = 0; r < runs.size(); ++r) {
      const double v = execute(circuit, backend, rng);
      runs(r) = map ? mitigate(v, *map) : v;
    }
    out.means(i) = runs.mean();
    out.stds(i) = std::sqrt((runs.array() - out.means(i)).square().mean());
  }
  out.mse = mse_loss(out.means, data.targets);
  return out;
}

double noiseless_loss(const Eigen::VectorXd& params, const ModelSpec& spec, const Dataset& data) {
  const UploadingParams theta = UploadingParams::unflatten(params, spec);
  Eigen::VectorXd predictions(static_cast<Eigen::Index>(data.size()));
  Rng unused(0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    predictions(static_cast<Eigen::Index>(i)) =
        run_noiseless(build_circuit(data.inputs[i], theta, spec), std::nullopt, unused);
  }
  return mse_loss(predictions, data.targets);
}

RunArtifacts train(const TrainingConfig& config, const ModelSpec& spec, const Dataset& data,
                   const std::optional<NoiseModel>& noise) {
  validate(config);
  validate(spec);
  validate(data);
  if (data.n_dim() != spec.n_qubits) throw std::invalid_argument("dataset dimension does not match the model");
  const bool noisy_mode = config.mode != TrainingMode::noiseless;
  if (noisy_mode && !noise) throw std::invalid_argument(std::string(to_string(config.mode)) + " mode needs a noise model");
  if (!noisy_mode && noise && !noise->is_zero()) throw std::invalid_argument("noiseless mode takes no noise model");
  if (noise) {
    validate(*noise);
    if (noise->n_qubits != spec.n_qubits) throw std::invalid_argument("noise model qubit count does not match the model");
  }

  Rng init_rng = child_stream(config.seed, stream::kInit);
  Rng shots_rng = child_stream(config.seed, stream::kShots);
  Rng clifford_rng = child_stream(config.seed, stream::kClifford);
  Rng mitigation_rng = child_stream(config.seed, stream::kMitigationShots);
  Rng walk_rng = child_stream(config.walk && config.walk->seed ? *config.walk->seed : config.seed, stream::kWalk);
  Rng eval_rng = child_stream(config.seed, stream::kEvaluation);

  std::optional<NoiseModel> current = noisy_mode ? noise : std::nullopt;
  auto backend = [&] { return Backend{current, config.n_shots, config.unfold_iterations}; };
  const Executor device = [&](const Circuit& c) { return execute(c, backend(), mitigation_rng); };

  RunArtifacts art;
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  Eigen::VectorXd params(static_cast<Eigen::Index>(spec.n_params()));
  for (Eigen::Index i = 0; i < params.size(); ++i) params(i) = angle(init_rng);
  art.initial_params = params;
  AdamState adam = AdamState::zeros(spec.n_params(), config.eta);

  const bool rtqem = config.mode == TrainingMode::rtqem;
  std::optional<NoiseMap> map;
  std::optional<DriftProbe> probe;
  std::size_t last_learn_epoch = 0;
  if (rtqem) {
    probe = make_drift_probe(spec, config.epsilon_ell, clifford_rng);
    map = NoiseMap::identity();
    if (config.learn_initial_map) {
      map = learn_noise_map(spec, config.mitigation_set_size, device, clifford_rng, 0);
      art.map_history.push_back(*map);
    }
  }

  for (std::size_t epoch = 0; epoch < config.n_epochs; ++epoch) {
    if (current) art.noise_history.push_back(current->pauli);
    if (rtqem) {
      const double d = drift_distance(*probe, *map, device);
      art.drift_history.push_back(d);
      const bool guard_ok = config.min_epochs_between_relearns == 0 || art.map_history.empty() ||
                            epoch - last_learn_epoch >= config.min_epochs_between_relearns;
      if (d > config.epsilon_ell && guard_ok) {
        map = learn_noise_map(spec, config.mitigation_set_size, device, clifford_rng, epoch);
        art.map_history.push_back(*map);
        last_learn_epoch = epoch;
        ++art.relearn_count;
      }
    }
    art.lambda_eff_history.push_back(map ? map->lambda_eff : 0.0);
    if (config.record_params_history) art.params_history.push_back(params);

    const GradientResult g = loss_gradient(params, spec, data, backend(), map, shots_rng);
    if (!std::isfinite(g.loss) || !g.gradient.allFinite()) {
      throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + " in " +
                         std::string(to_string(config.mode)) + " mode (loss = " + std::to_string(g.loss) + ")");
    }
    art.loss_history.push_back(g.loss);
    art.mean_abs_gradient_history.push_back(g.gradient.cwiseAbs().mean());
    std::tie(adam, params) = adam_step(std::move(adam), std::move(params), g.gradient);

    if (current && config.walk && epoch < config.walk->n_steps) {
      current->pauli = walk_step(current->pauli, *config.walk, walk_rng);
    }
  }

  if (config.mode == TrainingMode::fqem) {
    map = learn_noise_map(spec, config.mitigation_set_size, device, clifford_rng, config.n_epochs);
    art.map_history.push_back(*map);
  }

  art.final_params = params;
  art.final_map = map;
  art.final_noise = current;
  art.evaluation = evaluate_mse(params, spec, data, backend(), map, config.n_runs, eval_rng);
  art.mse = art.evaluation.mse;
  return art;
}

}  // namespace rtqem
