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

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "rtqem/densesim.hpp"
#include "rtqem/errors.hpp"
#include "rtqem/mitigation.hpp"

using namespace rtqem;

namespace {

constexpr double kPi = std::numbers::pi;

double ideal_value(const Circuit& c) { return pauli_expectation(CliffordCircuit(c), PauliString::all_z(c.n_qubits)); }

// Global depolarizing channel of strength lambda applied to the ideal value.
Executor depolarizing(double lambda) {
  return [lambda](const Circuit& c) { return (1.0 - lambda) * ideal_value(c); };
}

Executor depolarizing_shots(double lambda, std::uint64_t shots, Rng& rng) {
  return [lambda, shots, &rng](const Circuit& c) {
    const double f = (1.0 - lambda) * ideal_value(c);
    Eigen::VectorXd p(2);
    p << (1 + f) / 2, (1 - f) / 2;
    return sample_expectation(p, shots, rng);
  };
}

Executor device(const NoiseModel& noise, std::optional<std::uint64_t> shots, Rng& rng) {
  return [noise, shots, &rng](const Circuit& c) { return run_noisy(c, noise, shots, rng); };
}

NoiseModel static_noise() {
  NoiseModel nm;
  nm.n_qubits = 1;
  nm.pauli = {0.007, 0.003, 0.002};
  nm.readout.p_flip = 0.005;
  return nm;
}

double stddev(const std::vector<double>& xs) {
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size() - 1));
}

}  // namespace

TEST(CliffordFrame, StructureAndAngles) {
  Rng rng(1);
  const ModelSpec spec{1, 1, {}};
  const CliffordCircuit c = sample_clifford_frame(spec, rng);
  ASSERT_EQ(c.circuit().gates.size(), 2u);
  for (const Gate& g : c.circuit().gates) EXPECT_TRUE(is_clifford(g));
}

TEST(CliffordFrame, AngleFrequenciesUniform) {
  Rng rng(2);
  const ModelSpec spec{1, 1, {}};
  std::map<int, int> counts;
  for (int k = 0; k < 1000; ++k) counts[quarter_turns(sample_clifford_frame(spec, rng).circuit().gates[0].angle)]++;
  ASSERT_EQ(counts.size(), 4u);
  for (const auto& [turns, n] : counts) EXPECT_NEAR(n / 1000.0, 0.25, 0.05) << turns;
}

TEST(MakeNonzero, AlwaysNonzeroWithSameLayout) {
  Rng rng(3);
  int rewritten = 0;
  for (int k = 0; k < 500; ++k) {
    const ModelSpec spec{1 + static_cast<std::size_t>(k % 5), 1 + static_cast<std::size_t>(k % 3), {}};
    const CliffordCircuit frame = sample_clifford_frame(spec, rng);
    const CliffordCircuit out = make_nonzero(frame);
    EXPECT_EQ(std::abs(pauli_expectation(out, PauliString::all_z(spec.n_qubits))), 1);
    const Circuit& a = frame.circuit();
    const Circuit& b = out.circuit();
    ASSERT_EQ(a.gates.size(), b.gates.size());
    EXPECT_EQ(a.layer_marks, b.layer_marks);
    EXPECT_EQ(a.depth(), b.depth());
    for (std::size_t g = 0; g < a.gates.size(); ++g) {
      EXPECT_EQ(a.gates[g].kind, b.gates[g].kind);
      EXPECT_EQ(a.gates[g].qubits, b.gates[g].qubits);
      // Only the opening rotations may change.
      if (g >= 2 * spec.n_qubits) {
        EXPECT_EQ(a.gates[g].angle, b.gates[g].angle);
      }
    }
    rewritten += !(a == b);
  }
  EXPECT_GT(rewritten, 100);
}

TEST(MakeNonzero, IdempotentOnNonzero) {
  Rng rng(4);
  for (int k = 0; k < 100; ++k) {
    const ModelSpec spec{1 + static_cast<std::size_t>(k % 4), 2, {}};
    const CliffordCircuit once = make_nonzero(sample_clifford_frame(spec, rng));
    EXPECT_EQ(make_nonzero(once), once);
  }
}

TEST(MakeNonzero, RejectsForeignLayouts) {
  EXPECT_THROW(make_nonzero(CliffordCircuit(Circuit{1, {Gate::h(0)}, {}})), std::invalid_argument);
}

TEST(TrainingSet, AllIdealValuesAreSigns) {
  Rng rng(5);
  const ModelSpec spec{3, 2, {}};
  const CliffordTrainingSet set = build_training_set(spec, 30, depolarizing(0.0), rng);
  ASSERT_EQ(set.size(), 30u);
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_EQ(std::abs(set.ideal_values[i]), 1);
    EXPECT_EQ(set.noisy_values[i], set.ideal_values[i]);
  }
  EXPECT_THROW(build_training_set(spec, 1, depolarizing(0.0), rng), std::invalid_argument);
}

TEST(NoiseMap, ExactDepolarizingInversion) {
  Rng rng(6);
  const ModelSpec spec{2, 3, {}};
  const NoiseMap map = learn_noise_map(spec, 20, depolarizing(0.2), rng, 7);
  EXPECT_NEAR(map.lambda_0, 0.2, 1e-12);
  EXPECT_NEAR(map.sigma, 0.0, 1e-12);
  EXPECT_NEAR(map.lambda_eff, 0.2, 1e-12);
  EXPECT_EQ(map.learned_at_epoch, 7u);
  EXPECT_NEAR(mitigate(0.8, map), 1.0, 1e-12);
  // End to end: every ideal value comes back.
  Rng probe_rng(7);
  for (int k = 0; k < 20; ++k) {
    const CliffordCircuit c = make_nonzero(sample_clifford_frame(spec, probe_rng));
    EXPECT_NEAR(mitigate(depolarizing(0.2)(c.circuit()), map), ideal_value(c.circuit()), 1e-12);
  }
}

TEST(NoiseMap, NoiselessExecutorGivesIdentity) {
  Rng rng(8);
  const NoiseMap map = learn_noise_map(ModelSpec{1, 4, {}}, 20, depolarizing(0.0), rng);
  EXPECT_EQ(map.lambda_eff, 0.0);
  EXPECT_EQ(map.scale(), 1.0);
  EXPECT_EQ(mitigate(0.37, map), 0.37);
}

TEST(NoiseMap, StatisticsAndEffectiveLambda) {
  // lambdas {0.1, 0.3}: mean 0.2, population sigma 0.1.
  CliffordTrainingSet set;
  set.circuits = {CliffordCircuit(Circuit{1, {}, {}}), CliffordCircuit(Circuit{1, {}, {}})};
  set.ideal_values = {1, -1};
  set.noisy_values = {0.9, -0.7};
  const NoiseMap map = learn_noise_map(set);
  EXPECT_NEAR(map.lambda_0, 0.2, 1e-15);
  EXPECT_NEAR(map.sigma, 0.1, 1e-15);
  EXPECT_NEAR(map.lambda_eff, 0.2 - 0.01 / 0.8, 1e-15);
  EXPECT_NEAR(map.scale(), 0.8 / (0.64 + 0.01), 1e-15);
}

TEST(NoiseMap, LinearityAndConsistency) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_real_distribution<double> lam(0, 0.5), sig(0, 0.2);
  for (int k = 0; k < 200; ++k) {
    const NoiseMap map = NoiseMap::from_statistics(lam(gen), sig(gen));
    const double a = u(gen), b = u(gen), x = u(gen), y = u(gen);
    EXPECT_NEAR(mitigate(a * x + b * y, map), a * mitigate(x, map) + b * mitigate(y, map), 1e-14);
    EXPECT_NEAR(mitigate(x, map) * (1 - map.lambda_eff), x, 1e-12);
    EXPECT_EQ(mitigate(0.0, map), 0.0);
  }
}

TEST(NoiseMap, BlowUpIsNumericError) {
  EXPECT_THROW(mitigate(0.5, NoiseMap::from_statistics(1.0 - 1e-12, 0.0)), NumericError);
  EXPECT_THROW(NoiseMap::from_statistics(1.0, 0.0), NumericError);
}

TEST(NoiseMap, StaticDeviceNoiseSingleQubit) {
  Rng rng(10), shots_rng(11);
  const NoiseMap map = learn_noise_map(ModelSpec{1, 4, {}}, 20, device(static_noise(), 10000, shots_rng), rng);
  EXPECT_GT(map.lambda_eff, 0.06);
  EXPECT_LT(map.lambda_eff, 0.12);
}

// Standard error of lambda_0 over repeated learning shrinks like 1/sqrt(m).
TEST(NoiseMap, StandardErrorScalesWithSetSize) {
  Rng rng(12), shots_rng(13);
  const ModelSpec spec{1, 4, {}};
  const Executor exec = device(static_noise(), 1000, shots_rng);
  std::vector<double> se;
  for (std::size_t m : {10u, 40u, 160u}) {
    std::vector<double> lambdas;
    for (int rep = 0; rep < 150; ++rep) lambdas.push_back(learn_noise_map(spec, m, exec, rng).lambda_0);
    se.push_back(stddev(lambdas));
  }
  // Log-log slope against m should be near -1/2.
  const double slope = (std::log(se[2]) - std::log(se[0])) / (std::log(160.0) - std::log(10.0));
  EXPECT_NEAR(slope, -0.5, 0.12);
}

TEST(Drift, NoiselessIdentityIsZero) {
  Rng rng(14);
  const DriftProbe probe = make_drift_probe(ModelSpec{2, 2, {}}, 0.1, rng);
  EXPECT_EQ(std::abs(probe.target), 1);
  EXPECT_EQ(drift_distance(probe, NoiseMap::identity(), depolarizing(0.0)), 0.0);
  EXPECT_THROW(make_drift_probe(ModelSpec{1, 1, {}}, -1.0, rng), std::invalid_argument);
}

TEST(Drift, ExactInverseWithinShotError) {
  Rng rng(15), shots_rng(16);
  const ModelSpec spec{1, 4, {}};
  const NoiseMap map = learn_noise_map(spec, 20, depolarizing(0.1), rng);
  const std::uint64_t shots = 10000;
  const double sigma = map.scale() * std::sqrt(1 - 0.81) / std::sqrt(static_cast<double>(shots));
  for (int k = 0; k < 50; ++k) {
    const DriftProbe probe = make_drift_probe(spec, 0.0, rng);
    EXPECT_LT(drift_distance(probe, map, depolarizing_shots(0.1, shots, shots_rng)), 3 * sigma);
  }
}

TEST(Drift, StaleMapDriftGrowsWithWalkDistance) {
  Rng rng(17), walk_rng(18);
  const ModelSpec spec{1, 4, {}};
  NoiseModel nm = static_noise();
  nm.pauli = {0.005, 0.005, 0.005};
  Rng unused(0);
  const NoiseMap map = learn_noise_map(spec, 20, device(nm, std::nullopt, unused), rng);
  const DriftProbe probe = make_drift_probe(spec, 0.0, rng);
  const PauliNoiseParams start = nm.pauli;
  const RandomWalkConfig walk{0.002, 50, std::nullopt};
  // Average over independent walks so the trend is not one path's accident.
  std::vector<double> dist(50, 0.0), drift(50, 0.0);
  for (int rep = 0; rep < 40; ++rep) {
    nm.pauli = start;
    for (std::size_t t = 0; t < 50; ++t) {
      nm.pauli = walk_step(nm.pauli, walk, walk_rng);
      dist[t] += std::abs(nm.pauli.total() - start.total());
      drift[t] += drift_distance(probe, map, device(nm, std::nullopt, unused));
    }
  }
  // Compare early and late windows.
  double early = 0, late = 0;
  for (std::size_t t = 0; t < 10; ++t) {
    early += drift[t];
    late += drift[40 + t];
  }
  EXPECT_GT(late, 1.5 * early);
  EXPECT_GT(dist[49], dist[0]);
}

TEST(Biu, IdentityResponseReturnsMeasured) {
  Eigen::VectorXd m(4);
  m << 0.1, 0.2, 0.3, 0.4;
  EXPECT_LT((biu_unfold(m, Eigen::MatrixXd::Identity(4, 4), 10) - m).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Biu, ForwardFoldRecoversTruth) {
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> flip(0, 0.1), t(0.05, 0.95);
  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd truth(2);
    truth(0) = t(gen);
    truth(1) = 1 - truth(0);
    const Eigen::MatrixXd r = single_qubit_response(flip(gen), flip(gen));
    const Eigen::VectorXd out = biu_unfold(r * truth, r, 50);
    EXPECT_LT(0.5 * (out - truth).cwiseAbs().sum(), 1e-3);
  }
}

TEST(Biu, SymmetricFlipMatchesClosedFormInversion) {
  std::mt19937_64 gen(20);
  std::uniform_real_distribution<double> flip(0, 0.1), t(0.05, 0.95);
  for (int k = 0; k < 50; ++k) {
    const double p = flip(gen);
    Eigen::VectorXd truth(2);
    truth(0) = t(gen);
    truth(1) = 1 - truth(0);
    const Eigen::MatrixXd r = single_qubit_response(p, p);
    const Eigen::VectorXd m = r * truth;
    const Eigen::VectorXd out = biu_unfold(m, r, 500);
    EXPECT_NEAR(out(0) - out(1), (m(0) - m(1)) / (1 - 2 * p), 1e-6);
  }
}

TEST(Biu, Errors) {
  Eigen::VectorXd m(2);
  m << 0.5, 0.5;
  Eigen::MatrixXd bad(2, 2);
  bad << 0.9, 0.2, 0.2, 0.8;
  EXPECT_THROW(biu_unfold(m, bad, 5), std::invalid_argument);
  EXPECT_THROW(biu_unfold(m, Eigen::MatrixXd::Identity(4, 4), 5), std::invalid_argument);
  m << 0.5, 0.6;
  EXPECT_THROW(biu_unfold(m, Eigen::MatrixXd::Identity(2, 2), 5), std::invalid_argument);
}
