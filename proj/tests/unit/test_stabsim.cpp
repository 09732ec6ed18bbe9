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

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "random_circuits.hpp"
#include "rtqem/densesim.hpp"
#include "rtqem/stabsim.hpp"

using namespace rtqem;

namespace {

constexpr double kPi = std::numbers::pi;

PauliString random_pauli(std::size_t n, std::mt19937_64& rng) {
  static constexpr char kLetters[] = "IXYZ";
  std::uniform_int_distribution<int> pick(0, 3);
  std::string s(1, pick(rng) % 2 ? '-' : '+');
  for (std::size_t q = 0; q < n; ++q) s += kLetters[pick(rng)];
  return PauliString::parse(s);
}

double dense_expectation(const Circuit& c, const PauliString& p) {
  const oracle::Mat u = oracle::unitary(c);
  const oracle::Mat psi = u.col(0);
  return (psi.adjoint() * oracle::pauli_matrix(p.str()) * psi)(0, 0).real();
}

}  // namespace

TEST(PauliString, ParseAndPrintRoundTrip) {
  const PauliString p = PauliString::parse("-XYZI");
  EXPECT_EQ(p.sign(), -1);
  EXPECT_EQ(p.letter(0), 'X');
  EXPECT_EQ(p.letter(1), 'Y');
  EXPECT_EQ(p.letter(2), 'Z');
  EXPECT_EQ(p.letter(3), 'I');
  EXPECT_EQ(PauliString::parse(p.str()), p);
  EXPECT_EQ(PauliString::parse("Z_Z"), PauliString::parse("+ZIZ"));
  EXPECT_THROW(PauliString::parse("XQ"), std::invalid_argument);
}

TEST(PauliString, Commutation) {
  EXPECT_TRUE(PauliString::parse("XX").commutes_with(PauliString::parse("ZZ")));
  EXPECT_FALSE(PauliString::parse("XI").commutes_with(PauliString::parse("ZI")));
  EXPECT_FALSE(PauliString::parse("Y").commutes_with(PauliString::parse("X")));
  EXPECT_TRUE(PauliString::parse("ZZZ").is_diagonal());
  EXPECT_FALSE(PauliString::parse("ZXZ").is_diagonal());
}

TEST(PauliString, VacuumExpectation) {
  EXPECT_EQ(vacuum_expectation(PauliString::parse("ZIZ")), 1);
  EXPECT_EQ(vacuum_expectation(PauliString::parse("-ZZ")), -1);
  EXPECT_EQ(vacuum_expectation(PauliString::parse("XZ")), 0);
}

TEST(Clifford, QuarterTurnDetection) {
  EXPECT_TRUE(is_clifford(Gate::rx(0, kPi / 2)));
  EXPECT_TRUE(is_clifford(Gate::rz(0, -kPi)));
  EXPECT_TRUE(is_clifford(Gate::h(0)));
  EXPECT_FALSE(is_clifford(Gate::ry(0, 0.3)));
  EXPECT_EQ(quarter_turns(3 * kPi / 2), 3);
  EXPECT_EQ(quarter_turns(-kPi / 2), 3);
  EXPECT_EQ(quarter_turns(2 * kPi), 0);
  EXPECT_THROW(quarter_turns(0.1), std::invalid_argument);
}

TEST(Clifford, PrimitivesMatchGateUpToPhase) {
  std::vector<Gate> gates;
  for (int k = 0; k < 4; ++k) {
    gates.push_back(Gate::rx(0, k * kPi / 2));
    gates.push_back(Gate::ry(0, k * kPi / 2));
    gates.push_back(Gate::rz(0, k * kPi / 2));
  }
  for (const Gate& g : gates) {
    Circuit a{1, {g}, {}};
    Circuit b{1, clifford_primitives(g), {}};
    EXPECT_LT(oracle::phase_distance(oracle::unitary(a), oracle::unitary(b)), 1e-12) << to_string(g);
  }
}

TEST(Clifford, ConjugationMatchesMatrices) {
  std::mt19937_64 rng(1);
  const std::vector<Gate> gates = {Gate::h(0), Gate::s(1), Gate::x(0), Gate::y(1), Gate::z(0),
                                   Gate::cnot(0, 1), Gate::cnot(1, 0), Gate::cz(0, 1), Gate::rx(1, kPi / 2),
                                   Gate::ry(0, 3 * kPi / 2), Gate::rz(1, kPi)};
  for (const Gate& g : gates) {
    for (int trial = 0; trial < 8; ++trial) {
      const PauliString p = random_pauli(2, rng);
      PauliString fwd = p;
      conjugate(fwd, g);
      const oracle::Mat u = oracle::full(g, 2);
      const oracle::Mat expected = u * oracle::pauli_matrix(p.str()) * u.adjoint();
      EXPECT_LT((oracle::pauli_matrix(fwd.str()) - expected).norm(), 1e-12) << to_string(g) << ' ' << p.str();
      PauliString back = fwd;
      conjugate_inverse(back, g);
      EXPECT_EQ(back, p);
    }
  }
}

TEST(Tableau, InitialStateIsAllZ) {
  StabilizerTableau t(3);
  EXPECT_TRUE(t.is_valid());
  EXPECT_EQ(t.stabilizer(1).str(), "+IZI");
  EXPECT_EQ(t.destabilizer(2).str(), "+IIX");
  EXPECT_EQ(t.expectation(PauliString::all_z(3)), 1);
  EXPECT_EQ(t.expectation(PauliString::parse("XII")), 0);
}

TEST(Tableau, BellState) {
  CliffordCircuit c(Circuit{2, {Gate::h(0), Gate::cnot(0, 1)}, {}});
  EXPECT_EQ(pauli_expectation(c, PauliString::parse("XX")), 1);
  EXPECT_EQ(pauli_expectation(c, PauliString::parse("ZZ")), 1);
  EXPECT_EQ(pauli_expectation(c, PauliString::parse("YY")), -1);
  EXPECT_EQ(pauli_expectation(c, PauliString::parse("ZI")), 0);
}

TEST(Tableau, RejectsNonClifford) {
  EXPECT_THROW(CliffordCircuit(Circuit{1, {Gate::rx(0, 0.2)}, {}}), std::invalid_argument);
  StabilizerTableau t(1);
  EXPECT_THROW(t.apply(Gate::ry(0, 1.0)), std::invalid_argument);
}

TEST(Tableau, ValidAfterEveryGate) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 6;
    const Circuit c = testing_support::random_circuit(n, 30, rng, true);
    StabilizerTableau t(n);
    for (const Gate& g : c.gates) {
      t = evolve_tableau(t, g);
      ASSERT_TRUE(t.is_valid());
    }
  }
}

// Property: tableau expectations agree with the dense simulator for random
// Clifford circuits and random Pauli observables.
TEST(Tableau, AgreesWithDenseOnRandomCliffordCircuits) {
  std::mt19937_64 rng(3);
  int nonzero = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const Circuit c = testing_support::random_circuit(n, 25, rng, true);
    const CliffordCircuit cc(c);
    for (int k = 0; k < 5; ++k) {
      const PauliString p = random_pauli(n, rng);
      const int got = pauli_expectation(cc, p);
      EXPECT_NEAR(got, dense_expectation(c, p), 1e-9) << p.str();
      nonzero += got != 0;
    }
    StateVector psi(n);
    apply_circuit(psi, c);
    EXPECT_NEAR(pauli_expectation(cc, PauliString::all_z(n)), expectation_zn(psi), 1e-9);
  }
  EXPECT_GT(nonzero, 50);
}

TEST(Tableau, BackpropagationMatchesForwardSimulation) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const Circuit c = testing_support::random_circuit(n, 20, rng, true);
    const CliffordCircuit cc(c);
    const PauliString z = PauliString::all_z(n);
    // Full backpropagation onto |0...0>.
    EXPECT_EQ(vacuum_expectation(backpropagate(cc, z, 0)), pauli_expectation(cc, z));
    // Cutting anywhere: the prefix state measured against the backpropagated suffix.
    const std::size_t cut = static_cast<std::size_t>(trial) % (c.gates.size() + 1);
    const PauliString back = backpropagate(cc, z, cut);
    Circuit prefix{n, {c.gates.begin(), c.gates.begin() + static_cast<std::ptrdiff_t>(cut)}, {}};
    EXPECT_EQ(pauli_expectation(CliffordCircuit(prefix), back), pauli_expectation(cc, z));
  }
}

TEST(Tableau, ScalesToManyQubits) {
  // A GHZ chain on 60 qubits stays cheap and exact.
  const std::size_t n = 60;
  Circuit c{n, {Gate::h(0)}, {}};
  for (std::size_t q = 0; q + 1 < n; ++q) c.gates.push_back(Gate::cnot(q, q + 1));
  const CliffordCircuit cc(c);
  EXPECT_EQ(pauli_expectation(cc, PauliString::all_z(n)), 1);
  EXPECT_EQ(pauli_expectation(cc, PauliString::parse(std::string(n, 'X'))), 1);
  std::string zi(n, 'I');
  zi[0] = 'Z';
  EXPECT_EQ(pauli_expectation(cc, PauliString::parse(zi)), 0);
}
