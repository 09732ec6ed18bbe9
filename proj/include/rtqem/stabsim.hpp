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

// Tableau simulation of Clifford circuits on |0...0>.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rtqem/circuit.hpp"

namespace rtqem {

/// Signed Pauli string. Letter q is encoded by bits (x[q], z[q]) with
/// (1, 1) standing for Y itself, not XZ.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n_qubits) : x_(n_qubits, 0), z_(n_qubits, 0) {}

  /// Parses "+XYZI", "-ZZ", "XZ" ('_' is accepted for I); character k is qubit k.
  static PauliString parse(std::string_view text);
  static PauliString all_z(std::size_t n_qubits);

  std::size_t n_qubits() const { return x_.size(); }
  char letter(std::size_t q) const;
  void set_letter(std::size_t q, char letter);
  int sign() const { return negative_ ? -1 : 1; }
  void set_sign(int sign) { negative_ = sign < 0; }
  bool x(std::size_t q) const { return x_[q] != 0; }
  bool z(std::size_t q) const { return z_[q] != 0; }

  bool commutes_with(const PauliString& other) const;
  bool is_identity() const;
  /// True when every letter is I or Z, i.e. |0...0> is an eigenstate.
  bool is_diagonal() const;

  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  friend class StabilizerTableau;
  friend void conjugate(PauliString& pauli, const Gate& gate);
  friend void conjugate_inverse(PauliString& pauli, const Gate& gate);

  std::vector<std::uint8_t> x_;
  std::vector<std::uint8_t> z_;
  bool negative_ = false;
};

/// True for the fixed Clifford kinds and rotations by a multiple of pi/2.
bool is_clifford(const Gate& gate);
bool is_clifford(const Circuit& circuit);

/// Rotation angle as a quarter-turn count in {0, 1, 2, 3}; throws for
/// non-Clifford angles.
int quarter_turns(double angle);

/// Canonical Clifford replacement of a gate, equal up to global phase. Rotations
/// map to {I, S, Z, S^3} (RZ), {I, HSH, X, HS^3H} (RX) and {I, Z;H, Y, X;H} (RY);
/// the result is listed in application order and only uses H, S, X, Y, Z, CNOT.
std::vector<Gate> clifford_primitives(const Gate& gate);

/// P <- G P G^dagger.
void conjugate(PauliString& pauli, const Gate& gate);
/// P <- G^dagger P G.
void conjugate_inverse(PauliString& pauli, const Gate& gate);

/// Aaronson-Gottesman tableau: rows [0, n) are destabilizers and rows
/// [n, 2n) stabilizers, starting from |0...0>.
class StabilizerTableau {
 public:
  explicit StabilizerTableau(std::size_t n_qubits);

  std::size_t n_qubits() const { return n_; }
  const PauliString& destabilizer(std::size_t i) const { return rows_.at(i); }
  const PauliString& stabilizer(std::size_t i) const { return rows_.at(n_ + i); }

  /// Conjugates every row by a Clifford gate; throws for non-Clifford input.
  void apply(const Gate& gate);

  /// <P> on the current state: 0 if P anticommutes with a stabilizer, else +-1.
  int expectation(const PauliString& observable) const;

  /// Stabilizers commute pairwise, the symplectic pairing with destabilizers
  /// is canonical, and the 2n rows have full GF(2) rank.
  bool is_valid() const;

 private:
  std::size_t n_;
  std::vector<PauliString> rows_;
};

StabilizerTableau evolve_tableau(StabilizerTableau tableau, const Gate& gate);

/// Clifford-only circuit. Every rotation angle is a multiple of pi/2.
class CliffordCircuit {
 public:
  /// Throws std::invalid_argument for circuits with non-Clifford gates.
  explicit CliffordCircuit(Circuit circuit);

  const Circuit& circuit() const { return circuit_; }
  std::size_t n_qubits() const { return circuit_.n_qubits; }

  friend bool operator==(const CliffordCircuit&, const CliffordCircuit&) = default;

 private:
  Circuit circuit_;
};

StabilizerTableau simulate(const CliffordCircuit& circuit);

/// Exact <observable> of the circuit applied to |0...0>, in {-1, 0, +1}.
int pauli_expectation(const CliffordCircuit& circuit, const PauliString& observable);

/// U^dagger O U for the suffix U of gates with index >= cut.
PauliString backpropagate(const CliffordCircuit& circuit, const PauliString& observable, std::size_t cut);

/// <0...0| P |0...0>.
int vacuum_expectation(const PauliString& pauli);

}  // namespace rtqem
