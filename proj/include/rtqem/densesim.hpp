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

// Dense statevector / density-matrix simulation of gate-list circuits.
//
// Qubit q corresponds to bit q of a basis-state index. States are templated on
// the real scalar type; the rest of the library uses the double instances.

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtqem/circuit.hpp"
#include "rtqem/noise.hpp"
#include "rtqem/rng.hpp"

namespace rtqem {

/// Density matrices beyond this size (2^20 complex entries) are refused.
inline constexpr std::size_t kMaxDenseQubits = 10;
inline constexpr std::size_t kMaxStateVectorQubits = 24;

template <typename Real>
using Matrix2c = Eigen::Matrix<std::complex<Real>, 2, 2>;

/// 2x2 unitary of a single-qubit gate kind.
template <typename Real = double>
Matrix2c<Real> gate_matrix(const Gate& gate) {
  using C = std::complex<Real>;
  const Real half = static_cast<Real>(gate.angle) / Real(2);
  const Real c = std::cos(half);
  const Real s = std::sin(half);
  const C i(0, 1);
  Matrix2c<Real> u;
  switch (gate.kind) {
    case GateKind::RX: u << C(c), -i * s, -i * s, C(c); break;
    case GateKind::RY: u << C(c), C(-s), C(s), C(c); break;
    case GateKind::RZ: u << std::polar(Real(1), -half), C(0), C(0), std::polar(Real(1), half); break;
    case GateKind::X: u << C(0), C(1), C(1), C(0); break;
    case GateKind::Y: u << C(0), -i, i, C(0); break;
    case GateKind::Z: u << C(1), C(0), C(0), C(-1); break;
    case GateKind::H: {
      const Real r = Real(1) / std::sqrt(Real(2));
      u << C(r), C(r), C(r), C(-r);
      break;
    }
    case GateKind::S: u << C(1), C(0), C(0), i; break;
    default: throw std::invalid_argument("gate_matrix: " + to_string(gate) + " is not a single-qubit gate");
  }
  return u;
}

template <typename Real = double>
class BasicStateVector {
 public:
  using Scalar = std::complex<Real>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit BasicStateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits == 0 || n_qubits > kMaxStateVectorQubits) {
      throw std::invalid_argument("statevector size must be 1.." + std::to_string(kMaxStateVectorQubits) + " qubits");
    }
    amplitudes_ = Vector::Zero(static_cast<Eigen::Index>(std::size_t{1} << n_qubits));
    amplitudes_(0) = Scalar(1);
  }

  BasicStateVector(std::size_t n_qubits, Vector amplitudes) : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != static_cast<Eigen::Index>(std::size_t{1} << n_qubits)) {
      throw std::invalid_argument("statevector length must be 2^n");
    }
  }

  std::size_t n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  Vector& amplitudes() { return amplitudes_; }

 private:
  std::size_t n_qubits_;
  Vector amplitudes_;
};

template <typename Real = double>
class BasicDensityMatrix {
 public:
  using Scalar = std::complex<Real>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  explicit BasicDensityMatrix(std::size_t n_qubits) : n_qubits_(n_qubits) {
    check_size(n_qubits);
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    entries_ = Matrix::Zero(d, d);
    entries_(0, 0) = Scalar(1);
  }

  BasicDensityMatrix(std::size_t n_qubits, Matrix entries) : n_qubits_(n_qubits), entries_(std::move(entries)) {
    check_size(n_qubits);
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    if (entries_.rows() != d || entries_.cols() != d) throw std::invalid_argument("density matrix must be 2^n x 2^n");
  }

  static BasicDensityMatrix from_state(const BasicStateVector<Real>& psi) {
    return BasicDensityMatrix(psi.n_qubits(), psi.amplitudes() * psi.amplitudes().adjoint());
  }

  static BasicDensityMatrix maximally_mixed(std::size_t n_qubits) {
    check_size(n_qubits);
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    return BasicDensityMatrix(n_qubits, Matrix::Identity(d, d) / Real(d));
  }

  std::size_t n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  Matrix& entries() { return entries_; }

 private:
  static void check_size(std::size_t n_qubits) {
    if (n_qubits == 0 || n_qubits > kMaxDenseQubits) {
      throw std::invalid_argument("dense simulation supports 1.." + std::to_string(kMaxDenseQubits) +
                                  " qubits, got " + std::to_string(n_qubits));
    }
  }

  std::size_t n_qubits_;
  Matrix entries_;
};

using StateVector = BasicStateVector<double>;
using DensityMatrix = BasicDensityMatrix<double>;

namespace detail {

inline Eigen::Index bit(std::size_t q) { return static_cast<Eigen::Index>(std::size_t{1} << q); }

inline double parity_sign(Eigen::Index index) {
  return (std::popcount(static_cast<std::uint64_t>(index)) & 1) ? -1.0 : 1.0;
}

template <typename Vec, typename Real>
void apply_1q(Vec&& v, Eigen::Index mask, const Matrix2c<Real>& u) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i & mask) continue;
    const auto a = v(i);
    const auto b = v(i | mask);
    v(i) = u(0, 0) * a + u(0, 1) * b;
    v(i | mask) = u(1, 0) * a + u(1, 1) * b;
  }
}

}  // namespace detail

template <typename Real>
void apply_gate(BasicStateVector<Real>& state, const Gate& gate) {
  validate(gate, state.n_qubits());
  auto& v = state.amplitudes();
  if (gate.kind == GateKind::CNOT) {
    const auto c = detail::bit(gate.qubits[0]);
    const auto t = detail::bit(gate.qubits[1]);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if ((i & c) && !(i & t)) std::swap(v(i), v(i | t));
    }
  } else if (gate.kind == GateKind::CZ) {
    const auto m = detail::bit(gate.qubits[0]) | detail::bit(gate.qubits[1]);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if ((i & m) == m) v(i) = -v(i);
    }
  } else {
    detail::apply_1q(v, detail::bit(gate.qubit()), gate_matrix<Real>(gate));
  }
}

/// rho <- U rho U^dagger.
template <typename Real>
void apply_gate(BasicDensityMatrix<Real>& rho, const Gate& gate) {
  validate(gate, rho.n_qubits());
  auto& m = rho.entries();
  const Eigen::Index d = m.rows();
  if (gate.kind == GateKind::CNOT) {
    const auto c = detail::bit(gate.qubits[0]);
    const auto t = detail::bit(gate.qubits[1]);
    for (Eigen::Index i = 0; i < d; ++i) {
      if ((i & c) && !(i & t)) {
        m.row(i).swap(m.row(i | t));
        m.col(i).swap(m.col(i | t));
      }
    }
  } else if (gate.kind == GateKind::CZ) {
    const auto mask = detail::bit(gate.qubits[0]) | detail::bit(gate.qubits[1]);
    for (Eigen::Index i = 0; i < d; ++i) {
      if ((i & mask) == mask) {
        m.row(i) *= Real(-1);
        m.col(i) *= Real(-1);
      }
    }
  } else {
    const Matrix2c<Real> u = gate_matrix<Real>(gate);
    const auto mask = detail::bit(gate.qubit());
    for (Eigen::Index c = 0; c < d; ++c) detail::apply_1q(m.col(c), mask, u);
    const Matrix2c<Real> ud = u.conjugate();
    for (Eigen::Index c = 0; c < d; ++c) {
      if (c & mask) continue;
      const Eigen::Index c1 = c | mask;
      for (Eigen::Index r = 0; r < d; ++r) {
        const auto a = m(r, c);
        const auto b = m(r, c1);
        m(r, c) = a * ud(0, 0) + b * ud(0, 1);
        m(r, c1) = a * ud(1, 0) + b * ud(1, 1);
      }
    }
  }
}

template <typename State>
void apply_circuit(State& state, const Circuit& circuit) {
  if (circuit.n_qubits != state.n_qubits()) throw std::invalid_argument("circuit / state qubit count mismatch");
  for (const Gate& g : circuit.gates) apply_gate(state, g);
}

/// rho <- (1 - sum p) rho + p_x X rho X + p_y Y rho Y + p_z Z rho Z on one qubit.
template <typename Real>
void apply_pauli_channel(BasicDensityMatrix<Real>& rho, const PauliNoiseParams& p, std::size_t qubit) {
  validate(p);
  if (qubit >= rho.n_qubits()) throw std::invalid_argument("Pauli channel qubit index out of range");
  if (p.is_zero()) return;
  auto& m = rho.entries();
  const Eigen::Index d = m.rows();
  const auto mask = detail::bit(qubit);
  const Real flip = static_cast<Real>(p.p_x + p.p_y);
  const Real keep = Real(1) - flip;
  const Real coh_keep = static_cast<Real>(1.0 - p.total() - p.p_z);
  const Real coh_swap = static_cast<Real>(p.p_x - p.p_y);
  for (Eigen::Index c = 0; c < d; ++c) {
    if (c & mask) continue;
    const Eigen::Index c1 = c | mask;
    for (Eigen::Index r = 0; r < d; ++r) {
      if (r & mask) continue;
      const Eigen::Index r1 = r | mask;
      const auto a = m(r, c), b = m(r, c1), cc = m(r1, c), dd = m(r1, c1);
      m(r, c) = keep * a + flip * dd;
      m(r1, c1) = keep * dd + flip * a;
      m(r, c1) = coh_keep * b + coh_swap * cc;
      m(r1, c) = coh_keep * cc + coh_swap * b;
    }
  }
}

/// Symmetric readout acting on Z^{(x)n}: (1 - 2 p_flip)^n z.
inline double apply_readout_flip(double z_expectation, double p_flip, std::size_t n_qubits) {
  return std::pow(1.0 - 2.0 * p_flip, static_cast<double>(n_qubits)) * z_expectation;
}

template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> probabilities(const BasicStateVector<Real>& psi) {
  return psi.amplitudes().cwiseAbs2();
}

template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> probabilities(const BasicDensityMatrix<Real>& rho) {
  return rho.entries().diagonal().real();
}

/// Exact <Z^{(x)n}> of a probability vector over bitstrings.
template <typename Derived>
double parity_expectation(const Eigen::MatrixBase<Derived>& probs) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) acc += detail::parity_sign(i) * static_cast<double>(probs(i));
  return acc;
}

template <typename Real>
double expectation_zn(const BasicStateVector<Real>& psi) {
  return parity_expectation(probabilities(psi));
}

template <typename Real>
double expectation_zn(const BasicDensityMatrix<Real>& rho) {
  return parity_expectation(probabilities(rho));
}

/// Hermitian, unit trace and positive semidefinite within tolerance.
template <typename Real>
bool is_physical(const BasicDensityMatrix<Real>& rho, double tol = 1e-10, double eig_tol = 1e-9) {
  const auto& m = rho.entries();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(m.trace() - std::complex<Real>(1)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<typename BasicDensityMatrix<Real>::Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -eig_tol;
}

/// Multinomial draw of `n_shots` bitstrings; returns the count per outcome.
std::vector<std::uint64_t> sample_histogram(const Eigen::VectorXd& probs, std::uint64_t n_shots, Rng& rng);

/// Empirical mean of (-1)^parity over `n_shots` sampled bitstrings.
double sample_expectation(const Eigen::VectorXd& probs, std::uint64_t n_shots, Rng& rng);

/// Readout-stage distribution of the noisy circuit: Pauli channels placed
/// according to `noise.placement`, then symmetric flips or the response matrix.
Eigen::VectorXd noisy_distribution(const Circuit& circuit, const NoiseModel& noise);

/// Noisy <Z^{(x)n}>, exact when `shots` is empty. A model with no noise at all
/// bypasses every channel and evaluates the pure statevector.
double run_noisy(const Circuit& circuit, const NoiseModel& noise, std::optional<std::uint64_t> shots, Rng& rng);

/// Noiseless <Z^{(x)n}> via the statevector path.
double run_noiseless(const Circuit& circuit, std::optional<std::uint64_t> shots, Rng& rng);

}  // namespace rtqem
