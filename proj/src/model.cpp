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

#include "rtqem/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rtqem/densesim.hpp"
#include "rtqem/mitigation.hpp"

namespace rtqem {

double Activation::operator()(double x) const {
  if (!accepts(x)) {
    throw std::domain_error("activation " + std::string(to_string(kind)) + " undefined at x = " + std::to_string(x));
  }
  switch (kind) {
    case ActivationKind::identity: return x;
    case ActivationKind::log: return std::log(x);
    case ActivationKind::arccos_affine: return std::acos(2.0 * x - 1.0);
  }
  return x;
}

bool Activation::accepts(double x) const {
  if (!std::isfinite(x)) return false;
  if (kind == ActivationKind::log) return x > 0.0 && x <= 1.0;
  return x >= 0.0 && x <= 1.0;
}

std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::identity: return "identity";
    case ActivationKind::log: return "log";
    case ActivationKind::arccos_affine: return "arccos_affine";
  }
  return "?";
}

ActivationKind parse_activation(std::string_view text) {
  if (text == "identity") return ActivationKind::identity;
  if (text == "log") return ActivationKind::log;
  if (text == "arccos_affine") return ActivationKind::arccos_affine;
  throw std::invalid_argument("unknown activation '" + std::string(text) + "'");
}

void validate(const ModelSpec& spec) {
  if (spec.n_qubits < 1) throw std::invalid_argument("model needs at least one qubit");
  if (spec.n_layers < 1) throw std::invalid_argument("model needs at least one layer");
}

UploadingParams::UploadingParams(std::size_t n_layers, std::size_t n_qubits)
    : n_layers_(n_layers), n_qubits_(n_qubits), theta_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(4 * n_layers * n_qubits))) {}

UploadingParams UploadingParams::unflatten(const Eigen::VectorXd& flat, std::size_t n_layers, std::size_t n_qubits) {
  UploadingParams p(n_layers, n_qubits);
  if (flat.size() != p.theta_.size()) {
    throw std::invalid_argument("parameter vector has length " + std::to_string(flat.size()) + ", expected " +
                                std::to_string(p.theta_.size()));
  }
  if (!flat.allFinite()) throw std::invalid_argument("parameter vector has non-finite entries");
  p.theta_ = flat;
  return p;
}

std::size_t rotation_gate_index(const ModelSpec& spec, std::size_t layer, std::size_t qubit, std::size_t which) {
  return layer * spec.gates_per_layer() + 2 * qubit + which;
}

Circuit build_circuit(const Eigen::VectorXd& x, const UploadingParams& params, const ModelSpec& spec) {
  validate(spec);
  if (static_cast<std::size_t>(x.size()) != spec.n_qubits) {
    throw std::invalid_argument("input has dimension " + std::to_string(x.size()) + ", model has " +
                                std::to_string(spec.n_qubits) + " qubits");
  }
  if (params.n_layers() != spec.n_layers || params.n_qubits() != spec.n_qubits) {
    throw std::invalid_argument("parameter shape does not match the model");
  }
  const std::size_t n = spec.n_qubits;
  std::vector<double> kappa(n);
  for (std::size_t j = 0; j < n; ++j) kappa[j] = spec.activation(x(static_cast<Eigen::Index>(j)));

  Circuit c;
  c.n_qubits = n;
  c.gates.reserve(spec.n_layers * spec.gates_per_layer());
  c.layer_marks.reserve(spec.n_layers);
  for (std::size_t l = 0; l < spec.n_layers; ++l) {
    for (std::size_t j = 0; j < n; ++j) {
      const double xj = x(static_cast<Eigen::Index>(j));
      c.gates.push_back(Gate::ry(j, params(l, j, 0) * kappa[j] + params(l, j, 1)));
      c.gates.push_back(Gate::rz(j, params(l, j, 2) * xj + params(l, j, 3)));
    }
    if (n > 1) {
      for (std::size_t j = 0; j < n; ++j) c.gates.push_back(Gate::cnot(j, (j + 1) % n));
    }
    c.layer_marks.push_back(c.gates.size());
  }
  return c;
}

Circuit ansatz_frame(const ModelSpec& spec) {
  ModelSpec plain = spec;
  plain.activation = Activation{};
  return build_circuit(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.n_qubits)),
                       UploadingParams(spec.n_layers, spec.n_qubits), plain);
}

double execute(const Circuit& circuit, const Backend& backend, Rng& rng) {
  if (!backend.noise || backend.noise->is_zero()) return run_noiseless(circuit, backend.shots, rng);
  const NoiseModel& noise = *backend.noise;
  const bool unfold = noise.readout.response && backend.unfold_iterations > 0;
  if (!unfold) return run_noisy(circuit, noise, backend.shots, rng);

  Eigen::VectorXd measured = noisy_distribution(circuit, noise);
  if (backend.shots) {
    const auto counts = sample_histogram(measured, *backend.shots, rng);
    for (std::size_t i = 0; i < counts.size(); ++i) {
      measured(static_cast<Eigen::Index>(i)) = static_cast<double>(counts[i]) / static_cast<double>(*backend.shots);
    }
  }
  return parity_expectation(biu_unfold(measured, *noise.readout.response, backend.unfold_iterations));
}

double predict(const Eigen::VectorXd& x, const UploadingParams& params, const ModelSpec& spec,
               const Backend& backend, Rng& rng) {
  return execute(build_circuit(x, params, spec), backend, rng);
}

std::array<Gate, 5> decompose_native(double theta, double phi, double lambda, std::size_t qubit) {
  if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(lambda)) {
    throw std::invalid_argument("decompose_native: non-finite angle");
  }
  constexpr double half_pi = std::numbers::pi / 2.0;
  return {Gate::rz(qubit, lambda), Gate::rx(qubit, half_pi), Gate::rz(qubit, theta), Gate::rx(qubit, -half_pi),
          Gate::rz(qubit, phi)};
}

}  // namespace rtqem
