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

#include "rtqem/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rtqem {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
  }
  return "?";
}

bool is_rotation(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
}

bool is_two_qubit(GateKind kind) { return kind == GateKind::CNOT || kind == GateKind::CZ; }

void validate(const Gate& gate, std::size_t n_qubits) {
  for (std::size_t k = 0; k < gate.arity(); ++k) {
    if (gate.qubits[k] >= n_qubits) {
      throw std::invalid_argument("gate " + to_string(gate) + ": qubit index out of range for " +
                                  std::to_string(n_qubits) + " qubits");
    }
  }
  if (gate.arity() == 2 && gate.qubits[0] == gate.qubits[1]) {
    throw std::invalid_argument("gate " + to_string(gate) + ": qubit indices must be distinct");
  }
  if (is_rotation(gate.kind) && !std::isfinite(gate.angle)) {
    throw std::invalid_argument("gate " + to_string(gate) + ": non-finite angle");
  }
}

void validate(const Circuit& circuit) {
  for (const Gate& g : circuit.gates) validate(g, circuit.n_qubits);
  if (!circuit.layer_marks.empty()) {
    if (!std::is_sorted(circuit.layer_marks.begin(), circuit.layer_marks.end())) {
      throw std::invalid_argument("circuit layer marks must be monotonically increasing");
    }
    if (circuit.layer_marks.back() != circuit.gates.size()) {
      throw std::invalid_argument("circuit layer marks must cover every gate");
    }
  }
}

std::size_t Circuit::depth() const {
  std::vector<std::size_t> level(n_qubits, 0);
  std::size_t result = 0;
  for (const Gate& g : gates) {
    std::size_t d = 0;
    for (std::size_t k = 0; k < g.arity(); ++k) d = std::max(d, level[g.qubits[k]]);
    ++d;
    for (std::size_t k = 0; k < g.arity(); ++k) level[g.qubits[k]] = d;
    result = std::max(result, d);
  }
  return result;
}

std::string to_string(const Gate& gate) {
  std::ostringstream os;
  os << to_string(gate.kind) << '(' << gate.qubits[0];
  if (gate.arity() == 2) os << ',' << gate.qubits[1];
  if (is_rotation(gate.kind)) os << "; " << gate.angle;
  os << ')';
  return os.str();
}

}  // namespace rtqem
