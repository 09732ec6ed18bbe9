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

#include "rtqem/stabsim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rtqem {

// ---------------------------------------------------------------------------
// PauliString

PauliString PauliString::parse(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  PauliString p(text.size());
  for (std::size_t q = 0; q < text.size(); ++q) p.set_letter(q, text[q]);
  p.negative_ = negative;
  return p;
}

PauliString PauliString::all_z(std::size_t n_qubits) {
  PauliString p(n_qubits);
  for (auto& b : p.z_) b = 1;
  return p;
}

char PauliString::letter(std::size_t q) const {
  static constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};
  return kLetters[x_.at(q) | (z_.at(q) << 1)];
}

void PauliString::set_letter(std::size_t q, char letter) {
  switch (letter) {
    case 'I': case '_': x_.at(q) = 0; z_.at(q) = 0; break;
    case 'X': x_.at(q) = 1; z_.at(q) = 0; break;
    case 'Y': x_.at(q) = 1; z_.at(q) = 1; break;
    case 'Z': x_.at(q) = 0; z_.at(q) = 1; break;
    default: throw std::invalid_argument(std::string("invalid Pauli letter '") + letter + "'");
  }
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (other.n_qubits() != n_qubits()) throw std::invalid_argument("Pauli strings differ in length");
  unsigned acc = 0;
  for (std::size_t q = 0; q < x_.size(); ++q) acc ^= (x_[q] & other.z_[q]) ^ (z_[q] & other.x_[q]);
  return acc == 0;
}

bool PauliString::is_identity() const {
  for (std::size_t q = 0; q < x_.size(); ++q) {
    if (x_[q] || z_[q]) return false;
  }
  return true;
}

bool PauliString::is_diagonal() const {
  for (auto b : x_) {
    if (b) return false;
  }
  return true;
}

std::string PauliString::str() const {
  std::string s(1, negative_ ? '-' : '+');
  for (std::size_t q = 0; q < x_.size(); ++q) s += letter(q);
  return s;
}

// ---------------------------------------------------------------------------
// Clifford recognition and canonical primitives

namespace {
constexpr double kAngleTol = 1e-9;
}

int quarter_turns(double angle) {
  const double turns = angle / (std::numbers::pi / 2.0);
  const double rounded = std::round(turns);
  if (!std::isfinite(angle) || std::abs(turns - rounded) > kAngleTol) {
    throw std::invalid_argument("rotation angle " + std::to_string(angle) + " is not a multiple of pi/2");
  }
  const auto k = static_cast<long long>(rounded) % 4;
  return static_cast<int>(k < 0 ? k + 4 : k);
}

bool is_clifford(const Gate& gate) {
  if (!is_rotation(gate.kind)) return true;
  const double turns = gate.angle / (std::numbers::pi / 2.0);
  return std::isfinite(gate.angle) && std::abs(turns - std::round(turns)) <= kAngleTol;
}

bool is_clifford(const Circuit& circuit) {
  for (const Gate& g : circuit.gates) {
    if (!is_clifford(g)) return false;
  }
  return true;
}

std::vector<Gate> clifford_primitives(const Gate& gate) {
  const std::size_t q = gate.qubit();
  switch (gate.kind) {
    case GateKind::CZ:
      return {Gate::h(gate.qubits[1]), Gate::cnot(gate.qubits[0], gate.qubits[1]), Gate::h(gate.qubits[1])};
    case GateKind::RZ:
      switch (quarter_turns(gate.angle)) {
        case 0: return {};
        case 1: return {Gate::s(q)};
        case 2: return {Gate::z(q)};
        default: return {Gate::s(q), Gate::s(q), Gate::s(q)};
      }
    case GateKind::RX:
      switch (quarter_turns(gate.angle)) {
        case 0: return {};
        case 1: return {Gate::h(q), Gate::s(q), Gate::h(q)};
        case 2: return {Gate::x(q)};
        default: return {Gate::h(q), Gate::s(q), Gate::s(q), Gate::s(q), Gate::h(q)};
      }
    case GateKind::RY:
      switch (quarter_turns(gate.angle)) {
        case 0: return {};
        case 1: return {Gate::z(q), Gate::h(q)};
        case 2: return {Gate::y(q)};
        default: return {Gate::x(q), Gate::h(q)};
      }
    default: return {gate};
  }
}

// ---------------------------------------------------------------------------
// Conjugation

namespace {

// P <- g P g^dagger for g in {H, S, X, Y, Z, CNOT}.
void conjugate_primitive(std::vector<std::uint8_t>& x, std::vector<std::uint8_t>& z, bool& negative, const Gate& g) {
  const std::size_t a = g.qubits[0];
  switch (g.kind) {
    case GateKind::H:
      negative ^= (x[a] & z[a]) != 0;
      std::swap(x[a], z[a]);
      break;
    case GateKind::S:
      negative ^= (x[a] & z[a]) != 0;
      z[a] ^= x[a];
      break;
    case GateKind::X: negative ^= z[a] != 0; break;
    case GateKind::Z: negative ^= x[a] != 0; break;
    case GateKind::Y: negative ^= (x[a] ^ z[a]) != 0; break;
    case GateKind::CNOT: {
      const std::size_t b = g.qubits[1];
      negative ^= (x[a] & z[b] & (x[b] ^ z[a] ^ 1)) != 0;
      x[b] ^= x[a];
      z[a] ^= z[b];
      break;
    }
    default: throw std::logic_error("conjugate_primitive: unexpected gate " + to_string(g));
  }
}

void conjugate_inverse_primitive(std::vector<std::uint8_t>& x, std::vector<std::uint8_t>& z, bool& negative,
                                 const Gate& g) {
  if (g.kind == GateKind::S) {
    for (int k = 0; k < 3; ++k) conjugate_primitive(x, z, negative, g);
  } else {
    conjugate_primitive(x, z, negative, g);
  }
}

void require_clifford(const Gate& gate) {
  if (!is_clifford(gate)) throw std::invalid_argument("non-Clifford gate " + to_string(gate));
}

}  // namespace

void conjugate(PauliString& pauli, const Gate& gate) {
  validate(gate, pauli.n_qubits());
  require_clifford(gate);
  for (const Gate& g : clifford_primitives(gate)) conjugate_primitive(pauli.x_, pauli.z_, pauli.negative_, g);
}

void conjugate_inverse(PauliString& pauli, const Gate& gate) {
  validate(gate, pauli.n_qubits());
  require_clifford(gate);
  const auto prims = clifford_primitives(gate);
  for (auto it = prims.rbegin(); it != prims.rend(); ++it) {
    conjugate_inverse_primitive(pauli.x_, pauli.z_, pauli.negative_, *it);
  }
}

// ---------------------------------------------------------------------------
// Tableau

StabilizerTableau::StabilizerTableau(std::size_t n_qubits) : n_(n_qubits), rows_(2 * n_qubits, PauliString(n_qubits)) {
  if (n_qubits == 0) throw std::invalid_argument("tableau needs at least one qubit");
  for (std::size_t i = 0; i < n_; ++i) {
    rows_[i].set_letter(i, 'X');
    rows_[n_ + i].set_letter(i, 'Z');
  }
}

void StabilizerTableau::apply(const Gate& gate) {
  for (PauliString& row : rows_) conjugate(row, gate);
}

namespace {

// Power of i picked up by the single-qubit product (x1,z1) * (x2,z2).
int phase_exponent(int x1, int z1, int x2, int z2) {
  if (x1 == 0 && z1 == 0) return 0;
  if (x1 == 1 && z1 == 1) return z2 - x2;
  if (x1 == 1 && z1 == 0) return z2 * (2 * x2 - 1);
  return x2 * (1 - 2 * z2);
}

}  // namespace

int StabilizerTableau::expectation(const PauliString& observable) const {
  if (observable.n_qubits() != n_) throw std::invalid_argument("observable length does not match tableau");
  for (std::size_t i = 0; i < n_; ++i) {
    if (!observable.commutes_with(stabilizer(i))) return 0;
  }
  // The observable is +- the product of stabilizers whose destabilizer partner
  // anticommutes with it.
  std::vector<std::uint8_t> x(n_, 0), z(n_, 0);
  int phase = 0;  // power of i
  for (std::size_t i = 0; i < n_; ++i) {
    if (observable.commutes_with(destabilizer(i))) continue;
    const PauliString& s = stabilizer(i);
    int total = s.negative_ ? 2 : 0;
    for (std::size_t q = 0; q < n_; ++q) {
      total += phase_exponent(s.x_[q], s.z_[q], x[q], z[q]);
      x[q] ^= s.x_[q];
      z[q] ^= s.z_[q];
    }
    phase = ((phase + total) % 4 + 4) % 4;
  }
  if (x != observable.x_ || z != observable.z_) {
    throw std::logic_error("tableau expectation: stabilizer product does not reproduce the observable");
  }
  if (phase % 2 != 0) throw std::logic_error("tableau expectation: non-Hermitian product phase");
  const bool product_negative = phase == 2;
  return product_negative == observable.negative_ ? 1 : -1;
}

bool StabilizerTableau::is_valid() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (!stabilizer(i).commutes_with(stabilizer(j))) return false;
      if (i != j && !destabilizer(i).commutes_with(destabilizer(j))) return false;
      const bool paired = !destabilizer(i).commutes_with(stabilizer(j));
      if (paired != (i == j)) return false;
    }
  }
  // Gaussian elimination over GF(2) on the 2n x 2n symplectic matrix.
  const std::size_t cols = 2 * n_;
  std::vector<std::vector<std::uint8_t>> m;
  m.reserve(2 * n_);
  for (const PauliString& r : rows_) {
    std::vector<std::uint8_t> bits(r.x_);
    bits.insert(bits.end(), r.z_.begin(), r.z_.end());
    m.push_back(std::move(bits));
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < m.size() && !m[pivot][c]) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r != rank && m[r][c]) {
        for (std::size_t k = 0; k < cols; ++k) m[r][k] ^= m[rank][k];
      }
    }
    ++rank;
  }
  return rank == 2 * n_;
}

StabilizerTableau evolve_tableau(StabilizerTableau tableau, const Gate& gate) {
  tableau.apply(gate);
  return tableau;
}

// ---------------------------------------------------------------------------
// Circuit-level queries

CliffordCircuit::CliffordCircuit(Circuit circuit) : circuit_(std::move(circuit)) {
  validate(circuit_);
  for (const Gate& g : circuit_.gates) require_clifford(g);
}

StabilizerTableau simulate(const CliffordCircuit& circuit) {
  StabilizerTableau t(circuit.n_qubits());
  for (const Gate& g : circuit.circuit().gates) t.apply(g);
  return t;
}

int pauli_expectation(const CliffordCircuit& circuit, const PauliString& observable) {
  return simulate(circuit).expectation(observable);
}

PauliString backpropagate(const CliffordCircuit& circuit, const PauliString& observable, std::size_t cut) {
  const auto& gates = circuit.circuit().gates;
  if (cut > gates.size()) throw std::invalid_argument("backpropagation cut beyond circuit end");
  if (observable.n_qubits() != circuit.n_qubits()) throw std::invalid_argument("observable length mismatch");
  PauliString p = observable;
  for (std::size_t k = gates.size(); k > cut; --k) conjugate_inverse(p, gates[k - 1]);
  return p;
}

int vacuum_expectation(const PauliString& pauli) { return pauli.is_diagonal() ? pauli.sign() : 0; }

}  // namespace rtqem
