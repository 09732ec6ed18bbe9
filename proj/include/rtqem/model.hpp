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

// Data re-uploading ansatz: per layer and qubit RY(t1 k(x) + t2) then
// RZ(t3 x + t4), followed by a ring of CNOTs.

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "rtqem/circuit.hpp"
#include "rtqem/noise.hpp"
#include "rtqem/rng.hpp"

namespace rtqem {

enum class ActivationKind { identity, log, arccos_affine };

struct Activation {
  ActivationKind kind = ActivationKind::identity;

  /// Throws std::domain_error outside the activation's domain.
  double operator()(double x) const;
  /// Valid inputs: [0, 1] for identity and arccos_affine, (0, 1] for log.
  bool accepts(double x) const;
};

std::string_view to_string(ActivationKind kind);
ActivationKind parse_activation(std::string_view text);

struct ModelSpec {
  std::size_t n_qubits = 1;
  std::size_t n_layers = 1;
  Activation activation;

  std::size_t n_params() const { return 4 * n_layers * n_qubits; }
  std::size_t n_entanglers() const { return n_qubits == 1 ? 0 : n_qubits; }
  std::size_t gates_per_layer() const { return 2 * n_qubits + n_entanglers(); }
};

void validate(const ModelSpec& spec);

/// Angles theta(layer, qubit, k), k = 0..3, stored flat in layer-major order.
class UploadingParams {
 public:
  UploadingParams(std::size_t n_layers, std::size_t n_qubits);

  /// Throws std::invalid_argument on a length mismatch or a non-finite entry.
  static UploadingParams unflatten(const Eigen::VectorXd& flat, std::size_t n_layers, std::size_t n_qubits);
  static UploadingParams unflatten(const Eigen::VectorXd& flat, const ModelSpec& spec) {
    return unflatten(flat, spec.n_layers, spec.n_qubits);
  }

  double& operator()(std::size_t layer, std::size_t qubit, std::size_t k) { return theta_(index(layer, qubit, k)); }
  double operator()(std::size_t layer, std::size_t qubit, std::size_t k) const {
    return theta_(index(layer, qubit, k));
  }

  const Eigen::VectorXd& flatten() const { return theta_; }
  std::size_t n_layers() const { return n_layers_; }
  std::size_t n_qubits() const { return n_qubits_; }

  static std::size_t flat_index(std::size_t layer, std::size_t qubit, std::size_t k, std::size_t n_qubits) {
    return (layer * n_qubits + qubit) * 4 + k;
  }

 private:
  std::size_t index(std::size_t layer, std::size_t qubit, std::size_t k) const {
    return flat_index(layer, qubit, k, n_qubits_);
  }

  std::size_t n_layers_;
  std::size_t n_qubits_;
  Eigen::VectorXd theta_;
};

/// Index of the RY (which = 0) or RZ (which = 1) gate of (layer, qubit) in the
/// built circuit.
std::size_t rotation_gate_index(const ModelSpec& spec, std::size_t layer, std::size_t qubit, std::size_t which);

Circuit build_circuit(const Eigen::VectorXd& x, const UploadingParams& params, const ModelSpec& spec);

/// Gate layout of the ansatz with every rotation angle set to zero.
Circuit ansatz_frame(const ModelSpec& spec);

/// Where circuits get executed. No noise model means the ideal statevector;
/// no shot count means exact expectations.
struct Backend {
  std::optional<NoiseModel> noise;
  std::optional<std::uint64_t> shots;
  /// Bayesian unfolding iterations applied to readout histograms when the noise
  /// model carries an explicit response matrix; 0 disables unfolding.
  std::size_t unfold_iterations = 0;

  static Backend noiseless(std::optional<std::uint64_t> shots = std::nullopt) { return {std::nullopt, shots, 0}; }
  static Backend noisy(NoiseModel noise, std::optional<std::uint64_t> shots = std::nullopt) {
    return {std::move(noise), shots, 0};
  }
};

/// <Z^{(x)n}> of a circuit on the backend.
double execute(const Circuit& circuit, const Backend& backend, Rng& rng);

double predict(const Eigen::VectorXd& x, const UploadingParams& params, const ModelSpec& spec,
               const Backend& backend, Rng& rng);

/// U(theta, phi, lambda) = RZ(phi) RX(-pi/2) RZ(theta) RX(pi/2) RZ(lambda) in
/// native gates, returned in application order (RZ(lambda) first).
std::array<Gate, 5> decompose_native(double theta, double phi, double lambda, std::size_t qubit = 0);

}  // namespace rtqem
