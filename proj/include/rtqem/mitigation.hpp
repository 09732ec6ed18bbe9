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

// Importance Clifford Sampling: non-zero Clifford training circuits in the
// ansatz frame, a depolarizing-style linear noise map learned from them, a
// drift probe deciding when the map is stale, and Bayesian unfolding of
// readout histograms.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "rtqem/circuit.hpp"
#include "rtqem/model.hpp"
#include "rtqem/rng.hpp"
#include "rtqem/stabsim.hpp"

namespace rtqem {

/// Noisy <Z^{(x)n}> of a circuit on the device being mitigated.
using Executor = std::function<double(const Circuit&)>;

struct CliffordTrainingSet {
  std::vector<CliffordCircuit> circuits;
  std::vector<int> ideal_values;  // each +-1
  std::vector<double> noisy_values;

  std::size_t size() const { return circuits.size(); }
};

/// Linear map v -> (1 - lambda_0) / ((1 - lambda_0)^2 + sigma^2) v.
struct NoiseMap {
  double lambda_0 = 0.0;
  double sigma = 0.0;
  double lambda_eff = 0.0;
  std::size_t learned_at_epoch = 0;

  static NoiseMap identity() { return {}; }
  /// Builds the map from its statistics; lambda_eff follows from them.
  static NoiseMap from_statistics(double lambda_0, double sigma, std::size_t epoch = 0);

  double scale() const;
};

struct DriftProbe {
  CliffordCircuit probe_circuit;
  int target = 1;  // ideal value, +-1
  double threshold = 0.0;
};

/// Ansatz frame of `spec` with every rotation angle drawn uniformly from
/// {0, pi/2, pi, 3pi/2}.
CliffordCircuit sample_clifford_frame(const ModelSpec& spec, Rng& rng);

/// Rewrites the angles of the first single-qubit rotation sub-layer so the
/// circuit's <Z^{(x)n}> is +-1. Gate count, layout and depth are unchanged and
/// circuits that are already non-zero are returned as is.
CliffordCircuit make_nonzero(const CliffordCircuit& circuit);

CliffordTrainingSet build_training_set(const ModelSpec& spec, std::size_t m, const Executor& executor, Rng& rng);

/// lambda_C^i = 1 - noisy_i / ideal_i, aggregated with equal weights
/// (population standard deviation).
NoiseMap learn_noise_map(const CliffordTrainingSet& set, std::size_t epoch = 0);
NoiseMap learn_noise_map(const ModelSpec& spec, std::size_t m, const Executor& executor, Rng& rng,
                         std::size_t epoch = 0);

/// Throws NumericError when 1 - lambda_eff is too close to zero to invert.
double mitigate(double noisy_value, const NoiseMap& map);

DriftProbe make_drift_probe(const ModelSpec& spec, double threshold, Rng& rng);

/// |z - map(noisy probe value)|.
double drift_distance(const DriftProbe& probe, const NoiseMap& map, const Executor& executor);

/// Iterative Bayesian unfolding of a measured histogram through a
/// column-stochastic response R(i, j) = P(measure i | true j). Starts from the
/// uniform prior unless one is given.
Eigen::VectorXd biu_unfold(const Eigen::VectorXd& measured, const Eigen::MatrixXd& response, std::size_t iterations,
                           const std::optional<Eigen::VectorXd>& prior = std::nullopt);

}  // namespace rtqem
