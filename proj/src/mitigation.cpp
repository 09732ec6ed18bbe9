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

#include "rtqem/mitigation.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rtqem/errors.hpp"

namespace rtqem {

namespace {

constexpr double kQuarterTurn = std::numbers::pi / 2.0;
constexpr double kInvertTol = 1e-9;

// Index range [begin, end) of the leading single-qubit sub-layer of layer 0.
std::size_t first_sublayer_end(const Circuit& c) {
  const std::size_t end = c.layer_end(0);
  for (std::size_t g = 0; g < end; ++g) {
    if (is_two_qubit(c.gates[g].kind)) return g;
  }
  return end;
}

}  // namespace

NoiseMap NoiseMap::from_statistics(double lambda_0, double sigma, std::size_t epoch) {
  if (1.0 - lambda_0 == 0.0) throw NumericError("noise map undefined for lambda_0 = 1");
  NoiseMap map;
  map.lambda_0 = lambda_0;
  map.sigma = sigma;
  map.lambda_eff = lambda_0 - sigma * sigma / (1.0 - lambda_0);
  map.learned_at_epoch = epoch;
  return map;
}

double NoiseMap::scale() const {
  const double keep = 1.0 - lambda_0;
  const double denom = keep * keep + sigma * sigma;
  if (std::abs(1.0 - lambda_eff) < kInvertTol || denom < kInvertTol) {
    throw NumericError("noise too strong to invert (lambda_eff = " + std::to_string(lambda_eff) + ")");
  }
  return keep / denom;
}

CliffordCircuit sample_clifford_frame(const ModelSpec& spec, Rng& rng) {
  Circuit c = ansatz_frame(spec);
  std::uniform_int_distribution<int> quarter(0, 3);
  for (Gate& g : c.gates) {
    if (is_rotation(g.kind)) g.angle = quarter(rng) * kQuarterTurn;
  }
  return CliffordCircuit(std::move(c));
}

CliffordCircuit make_nonzero(const CliffordCircuit& circuit) {
  Circuit c = circuit.circuit();
  const std::size_t cut = first_sublayer_end(c);

  // Locate the RY, RZ pair that opens every qubit.
  std::vector<std::size_t> ry_index(c.n_qubits, cut), rz_index(c.n_qubits, cut);
  for (std::size_t g = 0; g < cut; ++g) {
    const Gate& gate = c.gates[g];
    const std::size_t q = gate.qubit();
    if (gate.kind == GateKind::RY && ry_index[q] == cut && rz_index[q] == cut) {
      ry_index[q] = g;
    } else if (gate.kind == GateKind::RZ && ry_index[q] != cut && rz_index[q] == cut) {
      rz_index[q] = g;
    } else {
      throw std::invalid_argument("make_nonzero: circuit is not in the ansatz frame (unexpected " +
                                  to_string(gate) + ")");
    }
  }
  for (std::size_t q = 0; q < c.n_qubits; ++q) {
    if (ry_index[q] == cut || rz_index[q] == cut) {
      throw std::invalid_argument("make_nonzero: qubit " + std::to_string(q) + " lacks its opening RY/RZ pair");
    }
  }

  const PauliString back = backpropagate(circuit, PauliString::all_z(c.n_qubits), cut);
  // RZ(b) RY(a) maps Z to cos(a) Z + sin(a) (cos(b) X + sin(b) Y); pick the
  // closest quarter-turn pair that lands on the required letter.
  for (std::size_t q = 0; q < c.n_qubits; ++q) {
    const char letter = back.letter(q);
    if (letter == 'I') continue;
    int a = quarter_turns(c.gates[ry_index[q]].angle);
    int b = quarter_turns(c.gates[rz_index[q]].angle);
    if (letter == 'Z') {
      if (a % 2 == 1) a -= 1;
    } else {
      if (a % 2 == 0) a += 1;
      const int want_b = letter == 'X' ? 0 : 1;
      if (b % 2 != want_b) b = (b + 3) % 4;
    }
    c.gates[ry_index[q]].angle = a * kQuarterTurn;
    c.gates[rz_index[q]].angle = b * kQuarterTurn;
  }

  CliffordCircuit out(std::move(c));
  if (std::abs(pauli_expectation(out, PauliString::all_z(out.n_qubits()))) != 1) {
    throw std::logic_error("make_nonzero: correction failed to produce a non-zero circuit");
  }
  return out;
}

CliffordTrainingSet build_training_set(const ModelSpec& spec, std::size_t m, const Executor& executor, Rng& rng) {
  if (m < 2) throw std::invalid_argument("training set needs at least two circuits");
  CliffordTrainingSet set;
  set.circuits.reserve(m);
  const PauliString observable = PauliString::all_z(spec.n_qubits);
  for (std::size_t i = 0; i < m; ++i) {
    CliffordCircuit c = make_nonzero(sample_clifford_frame(spec, rng));
    set.ideal_values.push_back(pauli_expectation(c, observable));
    set.noisy_values.push_back(executor(c.circuit()));
    set.circuits.push_back(std::move(c));
  }
  return set;
}

NoiseMap learn_noise_map(const CliffordTrainingSet& set, std::size_t epoch) {
  const std::size_t m = set.size();
  if (m < 2 || set.ideal_values.size() != m || set.noisy_values.size() != m) {
    throw std::invalid_argument("degenerate Clifford training set");
  }
  std::vector<double> lambdas(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(set.ideal_values[i]) != 1) throw std::invalid_argument("training circuit with zero ideal value");
    if (!std::isfinite(set.noisy_values[i])) throw NumericError("executor returned a non-finite value");
    lambdas[i] = 1.0 - set.noisy_values[i] / set.ideal_values[i];
  }
  const double mean = std::accumulate(lambdas.begin(), lambdas.end(), 0.0) / static_cast<double>(m);
  double var = 0.0;
  for (double l : lambdas) var += (l - mean) * (l - mean);
  var /= static_cast<double>(m);
  return NoiseMap::from_statistics(mean, std::sqrt(var), epoch);
}

NoiseMap learn_noise_map(const ModelSpec& spec, std::size_t m, const Executor& executor, Rng& rng,
                         std::size_t epoch) {
  return learn_noise_map(build_training_set(spec, m, executor, rng), epoch);
}

double mitigate(double noisy_value, const NoiseMap& map) { return map.scale() * noisy_value; }

DriftProbe make_drift_probe(const ModelSpec& spec, double threshold, Rng& rng) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("drift threshold must be >= 0");
  CliffordCircuit c = make_nonzero(sample_clifford_frame(spec, rng));
  const int z = pauli_expectation(c, PauliString::all_z(spec.n_qubits));
  return DriftProbe{std::move(c), z, threshold};
}

double drift_distance(const DriftProbe& probe, const NoiseMap& map, const Executor& executor) {
  return std::abs(static_cast<double>(probe.target) - mitigate(executor(probe.probe_circuit.circuit()), map));
}

Eigen::VectorXd biu_unfold(const Eigen::VectorXd& measured, const Eigen::MatrixXd& response, std::size_t iterations,
                           const std::optional<Eigen::VectorXd>& prior) {
  const Eigen::Index d = measured.size();
  if (response.rows() != d || response.cols() != d) throw std::invalid_argument("response matrix shape mismatch");
  if ((response.array() < 0.0).any()) throw std::invalid_argument("response matrix has negative entries");
  for (Eigen::Index j = 0; j < d; ++j) {
    if (std::abs(response.col(j).sum() - 1.0) > 1e-9) {
      throw std::invalid_argument("response matrix is not column-stochastic (column " + std::to_string(j) + ")");
    }
  }
  if ((measured.array() < 0.0).any() || std::abs(measured.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("measured histogram must be a normalized distribution");
  }

  Eigen::VectorXd truth = prior ? *prior : Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(d));
  if (truth.size() != d) throw std::invalid_argument("prior length mismatch");
  truth /= truth.sum();
  for (std::size_t k = 0; k < iterations; ++k) {
    const Eigen::VectorXd folded = response * truth;
    Eigen::VectorXd ratio = Eigen::VectorXd::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      if (folded(i) > 0.0) ratio(i) = measured(i) / folded(i);
    }
    truth = truth.cwiseProduct(response.transpose() * ratio);
    truth /= truth.sum();
  }
  return truth;
}

}  // namespace rtqem
