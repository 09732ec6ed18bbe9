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

#include "rtqem/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rtqem {

namespace {
constexpr double kStochasticTol = 1e-9;
}

void validate(const PauliNoiseParams& p) {
  const bool finite = std::isfinite(p.p_x) && std::isfinite(p.p_y) && std::isfinite(p.p_z);
  if (!finite || p.p_x < 0.0 || p.p_y < 0.0 || p.p_z < 0.0 || p.total() > 1.0 + 1e-12) {
    throw std::invalid_argument("invalid Pauli probabilities: each must be >= 0 and their sum <= 1");
  }
}

void validate(const ReadoutParams& r, std::size_t n_qubits) {
  if (!std::isfinite(r.p_flip) || r.p_flip < 0.0 || r.p_flip > 0.5) {
    throw std::invalid_argument("readout flip probability must lie in [0, 1/2]");
  }
  if (r.response) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    const Eigen::MatrixXd& m = *r.response;
    if (m.rows() != dim || m.cols() != dim) {
      throw std::invalid_argument("readout response matrix must be 2^n x 2^n");
    }
    if ((m.array() < 0.0).any()) throw std::invalid_argument("readout response matrix has negative entries");
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (std::abs(m.col(j).sum() - 1.0) > kStochasticTol) {
        throw std::invalid_argument("readout response matrix column " + std::to_string(j) + " does not sum to 1");
      }
    }
  }
}

std::string_view to_string(ChannelPlacement placement) {
  return placement == ChannelPlacement::ends ? "ends" : "every_layer";
}

ChannelPlacement parse_placement(std::string_view text) {
  if (text == "ends") return ChannelPlacement::ends;
  if (text == "every_layer") return ChannelPlacement::every_layer;
  throw std::invalid_argument("unknown channel placement '" + std::string(text) + "'");
}

const PauliNoiseParams& NoiseModel::pauli_for(std::size_t qubit) const {
  auto it = per_qubit.find(qubit);
  return it == per_qubit.end() ? pauli : it->second;
}

bool NoiseModel::is_zero() const {
  if (!pauli.is_zero() || !readout.is_zero()) return false;
  return std::all_of(per_qubit.begin(), per_qubit.end(), [](const auto& kv) { return kv.second.is_zero(); });
}

void validate(const NoiseModel& noise) {
  validate(noise.pauli);
  for (const auto& [q, p] : noise.per_qubit) {
    if (q >= noise.n_qubits) throw std::invalid_argument("per-qubit noise override for qubit out of range");
    validate(p);
  }
  validate(noise.readout, noise.n_qubits);
}

namespace {

double weakest_contraction(const PauliNoiseParams& p) {
  return std::max({std::abs(p.contraction_x()), std::abs(p.contraction_y()), std::abs(p.contraction_z())});
}

double bound_formula(std::size_t n, std::size_t l, double q, double q_m) {
  const double nd = static_cast<double>(n);
  return 2.0 * std::pow(q_m, nd) * std::pow(q, 2.0 * static_cast<double>(l) + 2.0) * (1.0 - std::pow(2.0, -nd));
}

}  // namespace

double nibp_bound(std::size_t n_qubits, std::size_t n_layers, const PauliNoiseParams& pauli,
                  const ReadoutParams& readout) {
  validate(pauli);
  return bound_formula(n_qubits, n_layers, weakest_contraction(pauli), std::abs(readout.contraction()));
}

double nibp_bound(std::size_t n_qubits, std::size_t n_layers, const NoiseModel& noise) {
  double q = weakest_contraction(noise.pauli);
  for (const auto& [qubit, p] : noise.per_qubit) q = std::max(q, weakest_contraction(p));
  return bound_formula(n_qubits, n_layers, q, std::abs(noise.readout.contraction()));
}

PauliNoiseParams walk_step(const PauliNoiseParams& p, const RandomWalkConfig& cfg, Rng& rng) {
  if (!(cfg.sigma_delta >= 0.0)) throw std::invalid_argument("random walk sigma_delta must be >= 0");
  if (cfg.sigma_delta == 0.0) return p;
  std::normal_distribution<double> step(0.0, cfg.sigma_delta);
  std::bernoulli_distribution coin(0.5);
  auto move = [&](double v) {
    const double r = coin(rng) ? 1.0 : -1.0;
    return std::clamp(v + r * step(rng), 0.0, kWalkComponentMax);
  };
  PauliNoiseParams out;
  out.p_x = move(p.p_x);
  out.p_y = move(p.p_y);
  out.p_z = move(p.p_z);
  return out;
}

double assignment_fidelity(const Eigen::Matrix2d& response) {
  for (int j = 0; j < 2; ++j) {
    if (std::abs(response.col(j).sum() - 1.0) > kStochasticTol || (response.col(j).array() < 0.0).any()) {
      throw std::invalid_argument("assignment fidelity needs a column-stochastic response matrix");
    }
  }
  return 1.0 - (response(1, 0) + response(0, 1)) / 2.0;
}

Eigen::Matrix2d single_qubit_response(double p01, double p10) {
  Eigen::Matrix2d r;
  r << 1.0 - p01, p10, p01, 1.0 - p10;
  return r;
}

Eigen::MatrixXd product_response(const std::vector<Eigen::Matrix2d>& per_qubit) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Ones(1, 1);
  // Outcome index bit q belongs to qubit q, so later qubits are more significant.
  for (const Eigen::Matrix2d& single : per_qubit) {
    Eigen::MatrixXd next(r.rows() * 2, r.cols() * 2);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) next.block(a * r.rows(), b * r.cols(), r.rows(), r.cols()) = single(a, b) * r;
    }
    r = std::move(next);
  }
  return r;
}

}  // namespace rtqem
