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
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "rtqem/rng.hpp"

namespace rtqem {

/// Probabilities of applying X, Y or Z to a qubit in one channel application.
struct PauliNoiseParams {
  double p_x = 0.0;
  double p_y = 0.0;
  double p_z = 0.0;

  double total() const { return p_x + p_y + p_z; }
  bool is_zero() const { return p_x == 0.0 && p_y == 0.0 && p_z == 0.0; }

  // Bloch-component contraction factors of one channel application.
  double contraction_x() const { return 1.0 - 2.0 * (p_y + p_z); }
  double contraction_y() const { return 1.0 - 2.0 * (p_x + p_z); }
  double contraction_z() const { return 1.0 - 2.0 * (p_x + p_y); }

  friend bool operator==(const PauliNoiseParams&, const PauliNoiseParams&) = default;
};

void validate(const PauliNoiseParams& p);

/// Readout error. Symmetric bit flips with probability `p_flip` unless an
/// explicit column-stochastic response matrix R(i, j) = P(measure i | prepared j)
/// over all 2^n outcomes is given, in which case the matrix replaces the flips.
struct ReadoutParams {
  double p_flip = 0.0;
  std::optional<Eigen::MatrixXd> response;

  double contraction() const { return 1.0 - 2.0 * p_flip; }
  bool is_zero() const { return p_flip == 0.0 && !response; }
};

void validate(const ReadoutParams& r, std::size_t n_qubits);

enum class ChannelPlacement {
  ends,         // once before the first layer and once after the last
  every_layer,  // once before the first layer and after every layer
};

std::string_view to_string(ChannelPlacement placement);
ChannelPlacement parse_placement(std::string_view text);

struct NoiseModel {
  std::size_t n_qubits = 1;
  PauliNoiseParams pauli;
  std::map<std::size_t, PauliNoiseParams> per_qubit;  // overrides of `pauli`
  ReadoutParams readout;
  ChannelPlacement placement = ChannelPlacement::every_layer;

  const PauliNoiseParams& pauli_for(std::size_t qubit) const;
  bool is_zero() const;
};

void validate(const NoiseModel& noise);

/// Concentration bound 2 q_M^n q^(2l+2) (1 - 2^-n) on |<Z..Z>|.
///
/// q is the largest per-axis contraction factor in absolute value over all
/// qubits; the bound only stays an upper bound if it uses the weakest
/// contraction.
double nibp_bound(std::size_t n_qubits, std::size_t n_layers, const NoiseModel& noise);
double nibp_bound(std::size_t n_qubits, std::size_t n_layers, const PauliNoiseParams& pauli,
                  const ReadoutParams& readout);

struct RandomWalkConfig {
  double sigma_delta = 0.0;
  std::size_t n_steps = 0;
  std::optional<std::uint64_t> seed;  // empty: follow the run seed
};

/// Upper clamp applied to every walked component.
inline constexpr double kWalkComponentMax = 0.25;

/// One lattice-walk step: each component moves by r * delta with r uniform on
/// {-1, +1} and delta ~ N(0, sigma_delta), then is clamped to [0, 0.25].
PauliNoiseParams walk_step(const PauliNoiseParams& p, const RandomWalkConfig& cfg, Rng& rng);

/// 1 - [P(1|0) + P(0|1)] / 2 for a 2x2 column-stochastic response matrix.
double assignment_fidelity(const Eigen::Matrix2d& response);

/// 2x2 response matrix for independent flips P(1|0) = p01, P(0|1) = p10.
Eigen::Matrix2d single_qubit_response(double p01, double p10);

/// Kronecker product of single-qubit responses; qubit 0 is the least
/// significant bit of the outcome index.
Eigen::MatrixXd product_response(const std::vector<Eigen::Matrix2d>& per_qubit);

}  // namespace rtqem
