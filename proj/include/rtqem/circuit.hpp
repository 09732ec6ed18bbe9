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

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rtqem {

enum class GateKind : std::uint8_t { RX, RY, RZ, X, Y, Z, H, S, CNOT, CZ };

std::string_view to_string(GateKind kind);
bool is_rotation(GateKind kind);
bool is_two_qubit(GateKind kind);

struct Gate {
  GateKind kind{GateKind::X};
  std::array<std::size_t, 2> qubits{0, 0};  // [control, target] for two-qubit kinds
  double angle = 0.0;                       // radians, rotations only

  std::size_t arity() const { return is_two_qubit(kind) ? 2 : 1; }
  std::size_t qubit() const { return qubits[0]; }

  static Gate rx(std::size_t q, double angle) { return {GateKind::RX, {q, 0}, angle}; }
  static Gate ry(std::size_t q, double angle) { return {GateKind::RY, {q, 0}, angle}; }
  static Gate rz(std::size_t q, double angle) { return {GateKind::RZ, {q, 0}, angle}; }
  static Gate x(std::size_t q) { return {GateKind::X, {q, 0}, 0.0}; }
  static Gate y(std::size_t q) { return {GateKind::Y, {q, 0}, 0.0}; }
  static Gate z(std::size_t q) { return {GateKind::Z, {q, 0}, 0.0}; }
  static Gate h(std::size_t q) { return {GateKind::H, {q, 0}, 0.0}; }
  static Gate s(std::size_t q) { return {GateKind::S, {q, 0}, 0.0}; }
  static Gate cnot(std::size_t control, std::size_t target) { return {GateKind::CNOT, {control, target}, 0.0}; }
  static Gate cz(std::size_t a, std::size_t b) { return {GateKind::CZ, {a, b}, 0.0}; }

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Throws std::invalid_argument when the gate does not fit an n-qubit register
/// (index out of range, repeated qubit, non-finite angle).
void validate(const Gate& gate, std::size_t n_qubits);

/// Ordered gate list partitioned into ansatz layers.
///
/// `layer_marks` holds the exclusive end index of every layer, so layer k
/// covers gates [layer_marks[k-1], layer_marks[k]). An empty mark list means
/// the whole gate list is a single layer.
struct Circuit {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;
  std::vector<std::size_t> layer_marks;

  std::size_t n_layers() const { return layer_marks.empty() ? 1 : layer_marks.size(); }
  std::size_t layer_begin(std::size_t layer) const { return layer == 0 ? 0 : layer_marks.at(layer - 1); }
  std::size_t layer_end(std::size_t layer) const {
    return layer_marks.empty() ? gates.size() : layer_marks.at(layer);
  }

  /// Longest chain of gates sharing a qubit.
  std::size_t depth() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

void validate(const Circuit& circuit);

std::string to_string(const Gate& gate);

}  // namespace rtqem
