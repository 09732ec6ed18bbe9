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

#include "rtqem/densesim.hpp"

#include <algorithm>

namespace rtqem {

namespace {

void check_distribution(const Eigen::VectorXd& probs) {
  if (probs.size() == 0) throw std::invalid_argument("empty probability distribution");
  if (!probs.allFinite() || (probs.array() < -1e-12).any()) {
    throw std::invalid_argument("probability distribution has negative or non-finite entries");
  }
  if (std::abs(probs.sum() - 1.0) > 1e-9) throw std::invalid_argument("probability distribution does not sum to 1");
}

void apply_channel_layer(DensityMatrix& rho, const NoiseModel& noise) {
  for (std::size_t q = 0; q < rho.n_qubits(); ++q) apply_pauli_channel(rho, noise.pauli_for(q), q);
}

Eigen::VectorXd apply_symmetric_flips(Eigen::VectorXd probs, double p_flip, std::size_t n_qubits) {
  if (p_flip == 0.0) return probs;
  for (std::size_t q = 0; q < n_qubits; ++q) {
    const auto mask = detail::bit(q);
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
      if (i & mask) continue;
      const double p0 = probs(i);
      const double p1 = probs(i | mask);
      probs(i) = (1.0 - p_flip) * p0 + p_flip * p1;
      probs(i | mask) = p_flip * p0 + (1.0 - p_flip) * p1;
    }
  }
  return probs;
}

}  // namespace

std::vector<std::uint64_t> sample_histogram(const Eigen::VectorXd& probs, std::uint64_t n_shots, Rng& rng) {
  check_distribution(probs);
  if (n_shots == 0) throw std::invalid_argument("n_shots must be >= 1");
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(probs.size()), 0);
  std::uint64_t remaining = n_shots;
  double remaining_mass = 1.0;
  const Eigen::Index last = probs.size() - 1;
  // Sequential conditional binomials realize the multinomial draw exactly.
  for (Eigen::Index i = 0; i < last && remaining > 0; ++i) {
    const double pi = std::max(probs(i), 0.0);
    double cond = remaining_mass > 0.0 ? pi / remaining_mass : 1.0;
    cond = std::clamp(cond, 0.0, 1.0);
    std::uint64_t k = 0;
    if (cond >= 1.0) {
      k = remaining;
    } else if (cond > 0.0) {
      std::binomial_distribution<std::uint64_t> draw(remaining, cond);
      k = draw(rng);
    }
    counts[static_cast<std::size_t>(i)] = k;
    remaining -= k;
    remaining_mass -= pi;
  }
  counts[static_cast<std::size_t>(last)] += remaining;
  return counts;
}

double sample_expectation(const Eigen::VectorXd& probs, std::uint64_t n_shots, Rng& rng) {
  const auto counts = sample_histogram(probs, n_shots, rng);
  std::int64_t acc = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto c = static_cast<std::int64_t>(counts[i]);
    acc += detail::parity_sign(static_cast<Eigen::Index>(i)) > 0 ? c : -c;
  }
  return static_cast<double>(acc) / static_cast<double>(n_shots);
}

Eigen::VectorXd noisy_distribution(const Circuit& circuit, const NoiseModel& noise) {
  validate(circuit);
  if (noise.n_qubits != circuit.n_qubits) {
    throw std::invalid_argument("noise model has " + std::to_string(noise.n_qubits) + " qubits, circuit has " +
                                std::to_string(circuit.n_qubits));
  }
  validate(noise);
  if (noise.is_zero()) {
    StateVector psi(circuit.n_qubits);
    apply_circuit(psi, circuit);
    return probabilities(psi);
  }

  DensityMatrix rho(circuit.n_qubits);
  apply_channel_layer(rho, noise);
  const std::size_t n_layers = circuit.n_layers();
  for (std::size_t layer = 0; layer < n_layers; ++layer) {
    for (std::size_t g = circuit.layer_begin(layer); g < circuit.layer_end(layer); ++g) {
      apply_gate(rho, circuit.gates[g]);
    }
    if (noise.placement == ChannelPlacement::every_layer || layer + 1 == n_layers) apply_channel_layer(rho, noise);
  }

  Eigen::VectorXd probs = probabilities(rho);
  if (noise.readout.response) return *noise.readout.response * probs;
  return apply_symmetric_flips(std::move(probs), noise.readout.p_flip, circuit.n_qubits);
}

double run_noisy(const Circuit& circuit, const NoiseModel& noise, std::optional<std::uint64_t> shots, Rng& rng) {
  const Eigen::VectorXd probs = noisy_distribution(circuit, noise);
  return shots ? sample_expectation(probs, *shots, rng) : parity_expectation(probs);
}

double run_noiseless(const Circuit& circuit, std::optional<std::uint64_t> shots, Rng& rng) {
  validate(circuit);
  StateVector psi(circuit.n_qubits);
  apply_circuit(psi, circuit);
  if (!shots) return expectation_zn(psi);
  return sample_expectation(probabilities(psi), *shots, rng);
}

}  // namespace rtqem
