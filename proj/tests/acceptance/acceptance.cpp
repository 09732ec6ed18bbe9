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

// Acceptance suite. One PASS/FAIL line per criterion; `--criterion N` runs a
// single one (that is how ctest registers them). Exit status is non-zero when
// any selected criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rtqem/config.hpp"
#include "rtqem/densesim.hpp"
#include "rtqem/mitigation.hpp"
#include "rtqem/noise.hpp"
#include "rtqem/runner.hpp"
#include "rtqem/stabsim.hpp"
#include "rtqem/training.hpp"

using namespace rtqem;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Verdict()> check;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(4);
  s << v;
  return s.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

RunConfig config(const std::string& file) { return load_config(fs::path(RTQEM_SOURCE_DIR) / "configs" / file); }

Dataset dataset_for(const RunConfig& c) {
  Rng rng = child_stream(c.training.seed, stream::kDataset);
  return make_dataset(c.target, rng);
}

NoiseModel static_noise(std::size_t n) {
  NoiseModel nm;
  nm.n_qubits = n;
  nm.pauli = {0.007, 0.003, 0.002};
  nm.readout.p_flip = 0.005;
  return nm;
}

// Independent single-qubit model: products of explicit 2x2 rotation matrices.
double oracle_prediction(double x, const Eigen::VectorXd& theta, std::size_t layers, double kappa) {
  using cd = std::complex<double>;
  Eigen::Vector2cd psi(1, 0);
  for (std::size_t l = 0; l < layers; ++l) {
    const auto t = [&](std::size_t k) { return theta(static_cast<Eigen::Index>(4 * l + k)); };
    const double a = t(0) * kappa + t(1);
    const double b = t(2) * x + t(3);
    Eigen::Matrix2cd ry, rz;
    ry << std::cos(a / 2), -std::sin(a / 2), std::sin(a / 2), std::cos(a / 2);
    rz << std::exp(cd(0, -b / 2)), 0, 0, std::exp(cd(0, b / 2));
    psi = rz * (ry * psi);
  }
  return std::norm(psi(0)) - std::norm(psi(1));
}

double oracle_loss(const Eigen::VectorXd& theta, const Dataset& data, std::size_t layers) {
  double s = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double x = data.inputs[i](0);
    const double r = oracle_prediction(x, theta, layers, std::log(x)) - data.targets(static_cast<Eigen::Index>(i));
    s += r * r;
  }
  return s / static_cast<double>(data.size());
}

// 1. Stabilizer vs dense expectations on random Clifford frames.
Verdict oracle_equivalence() {
  Rng rng(20240501);
  std::uniform_int_distribution<std::size_t> nq(1, 5), nl(1, 4);
  std::size_t mismatches = 0, non_integer = 0, nonzero = 0;
  const std::size_t total = 600;
  for (std::size_t k = 0; k < total; ++k) {
    const ModelSpec spec{nq(rng), nl(rng), {}};
    CliffordCircuit c = sample_clifford_frame(spec, rng);
    if (k % 2) c = make_nonzero(c);
    const int tableau = pauli_expectation(c, PauliString::all_z(spec.n_qubits));
    DensityMatrix rho(spec.n_qubits);
    apply_circuit(rho, c.circuit());
    const double dense = expectation_zn(rho);
    const double rounded = std::round(dense);
    if (std::abs(dense - rounded) > 1e-9) ++non_integer;
    if (static_cast<int>(rounded) != tableau) ++mismatches;
    nonzero += tableau != 0;
  }
  return {mismatches == 0 && non_integer == 0,
          std::to_string(total) + " circuits, " + std::to_string(mismatches) + " mismatches, " +
              std::to_string(non_integer) + " non-integer dense values, " + std::to_string(nonzero) + " non-zero"};
}

// 2. PSR gradient vs central finite differences of an independent loss.
Verdict psr_correctness() {
  const RunConfig c = config("pdf_noiseless.toml");
  const Dataset data = dataset_for(c);
  const ModelSpec& spec = c.model;
  Rng gen(77);
  std::uniform_real_distribution<double> u(0, 2 * kPi);
  const double h = 1e-5;
  double worst = 0;
  for (int point = 0; point < 50; ++point) {
    Eigen::VectorXd theta(static_cast<Eigen::Index>(spec.n_params()));
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = u(gen);
    Rng rng(0);
    const GradientResult g = loss_gradient(theta, spec, data, Backend::noiseless(), std::nullopt, rng);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Eigen::VectorXd up = theta, down = theta;
      up(i) += h;
      down(i) -= h;
      const double fd = (oracle_loss(up, data, spec.n_layers) - oracle_loss(down, data, spec.n_layers)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g.gradient(i)));
    }
  }
  return {worst < 1e-6, "max |PSR - FD| = " + fmt(worst) + " over 50 points (tolerance 1e-6)"};
}

// 3. Exact inversion under injected global depolarizing noise.
Verdict depolarizing_inversion() {
  const double lambda = 0.2;
  const Executor exact = [&](const Circuit& circuit) {
    return (1 - lambda) * pauli_expectation(CliffordCircuit(circuit), PauliString::all_z(circuit.n_qubits));
  };
  double worst_lambda = 0, worst_value = 0;
  Rng rng(3);
  for (const ModelSpec& spec : {ModelSpec{1, 4, {}}, ModelSpec{4, 3, {}}}) {
    const NoiseMap map = learn_noise_map(spec, 20, exact, rng);
    worst_lambda = std::max(worst_lambda, std::abs(map.lambda_eff - lambda));
    worst_value = std::max(worst_value, std::abs(mitigate(0.8, map) - 1.0));
  }
  return {worst_lambda <= 1e-12 && worst_value <= 1e-12,
          "|lambda_eff - 0.2| = " + fmt(worst_lambda) + ", |mitigate(0.8) - 1| = " + fmt(worst_value)};
}

// 4. Effective depolarizing parameter under the static device noise.
Verdict lambda_recovery() {
  const ModelSpec spec{1, 4, {ActivationKind::log}};
  const NoiseModel nm = static_noise(1);
  Rng shots = child_stream(1234, stream::kMitigationShots);
  Rng clifford = child_stream(1234, stream::kClifford);
  const Executor device = [&](const Circuit& c) { return run_noisy(c, nm, 10000, shots); };
  const NoiseMap map = learn_noise_map(spec, 20, device, clifford);
  const bool ok = map.lambda_eff >= 0.06 && map.lambda_eff <= 0.12;
  return {ok, "lambda_eff = " + fmt(map.lambda_eff) + " (lambda_0 " + fmt(map.lambda_0) + ", sigma " +
                  fmt(map.sigma) + "), window [0.06, 0.12]"};
}

// 5. MSE ordering of the four modes on the 1-D proxy.
Verdict table_ordering() {
  std::vector<double> mse[4];
  const char* files[4] = {"pdf_noiseless.toml", "pdf_noisy.toml", "pdf_fqem.toml", "pdf_rtqem.toml"};
  for (int m = 0; m < 4; ++m) {
    RunConfig c = config(files[m]);
    for (std::uint64_t seed = 1234; seed < 1239; ++seed) {
      c.training.seed = seed;
      const Dataset data = dataset_for(c);
      mse[m].push_back(train(c.training, c.model, data, c.noise).mse);
    }
  }
  const double nl = median(mse[0]), no = median(mse[1]), fq = median(mse[2]), rt = median(mse[3]);
  const bool c1 = rt <= 1.5 * nl;
  const bool c2 = no >= 2 * rt;
  const bool c3 = fq >= 0.8 * no;
  std::string detail = "median MSE noiseless " + fmt(nl) + ", noisy " + fmt(no) + ", fqem " + fmt(fq) + ", rtqem " +
                       fmt(rt) + "; rtqem<=1.5*noiseless " + (c1 ? "yes" : "no") + ", noisy>=2*rtqem " +
                       (c2 ? "yes" : "no") + ", fqem>=0.8*noisy " + (c3 ? "yes" : "no");
  return {c1 && c2 && c3, detail};
}

// 6. Four-qubit cosine target: mitigation helps and the noisy model stays
// under the concentration bound.
Verdict multidim_scaling() {
  const RunConfig noisy_cfg = config("cos4d_noisy.toml");
  const RunConfig rt_cfg = config("cos4d_rtqem.toml");
  const Dataset data = dataset_for(noisy_cfg);
  const RunArtifacts noisy = train(noisy_cfg.training, noisy_cfg.model, data, noisy_cfg.noise);
  const RunArtifacts rt = train(rt_cfg.training, rt_cfg.model, data, rt_cfg.noise);
  const double bound = nibp_bound(noisy_cfg.model.n_qubits, noisy_cfg.model.n_layers, *noisy_cfg.noise);
  const double shot_sigma = 1.0 / std::sqrt(static_cast<double>(noisy_cfg.training.n_shots.value_or(1)));
  const double cap = bound + 3 * shot_sigma;
  const bool c1 = rt.mse < noisy.mse;
  const bool c2 = noisy.evaluation.means.cwiseAbs().maxCoeff() <= cap;
  const bool c3 = rt.evaluation.means.cwiseAbs().maxCoeff() > cap;
  std::string detail = "MSE rtqem " + fmt(rt.mse) + " vs noisy " + fmt(noisy.mse) + "; bound+3sigma " + fmt(cap) +
                       ", max|noisy| " + fmt(noisy.evaluation.means.cwiseAbs().maxCoeff()) + ", max|rtqem| " +
                       fmt(rt.evaluation.means.cwiseAbs().maxCoeff()) + "; rtqem<noisy " + (c1 ? "yes" : "no") +
                       ", noisy under bound " + (c2 ? "yes" : "no") + ", rtqem exceeds bound " + (c3 ? "yes" : "no");
  return {c1 && c2 && c3, detail};
}

// 7. Re-learn counts against the drift threshold under a noise walk.
Verdict threshold_sweep() {
  RunConfig c = config("walk_sweep.toml");
  const Dataset data = dataset_for(c);
  std::vector<std::size_t> counts;
  for (double eps : {0.0, 0.05, 0.1, 0.2}) {
    c.training.epsilon_ell = eps;
    counts.push_back(train(c.training, c.model, data, c.noise).relearn_count);
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < counts.size(); ++i) decreasing = decreasing && counts[i] < counts[i - 1];
  std::string detail = "relearns at eps 0/0.05/0.1/0.2 = ";
  for (std::size_t i = 0; i < counts.size(); ++i) detail += (i ? "/" : "") + std::to_string(counts[i]);
  return {decreasing && counts.back() == 0, detail};
}

// 8. Concentration bound on the noisy single-qubit model, exact expectations.
Verdict nibp_invariant() {
  const ModelSpec spec{1, 4, {ActivationKind::log}};
  const NoiseModel nm = static_noise(1);
  const double bound = nibp_bound(1, 4, nm);
  Rng gen(88);
  std::uniform_real_distribution<double> angle(0, 2 * kPi), x(1e-3, 1.0);
  int violations = 0;
  double worst = 0;
  Rng unused(0);
  for (int k = 0; k < 200; ++k) {
    Eigen::VectorXd theta(16);
    for (Eigen::Index i = 0; i < 16; ++i) theta(i) = angle(gen);
    const Eigen::VectorXd input = Eigen::VectorXd::Constant(1, x(gen));
    const double f = predict(input, UploadingParams::unflatten(theta, spec), spec, Backend::noisy(nm), unused);
    worst = std::max(worst, std::abs(f));
    violations += std::abs(f) > bound;
  }
  return {violations == 0, "bound " + fmt(bound) + ", max |f| " + fmt(worst) + ", " + std::to_string(violations) +
                               " of 200 above the bound"};
}

// 9. Bayesian unfolding round trip on synthetic single-qubit responses.
Verdict biu_round_trip() {
  Rng gen(99);
  std::uniform_real_distribution<double> flip(0.0, 0.1), u(0.0, 1.0);
  int failures = 0;
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    Eigen::VectorXd truth(2);
    truth(0) = u(gen);
    truth(1) = 1 - truth(0);
    const Eigen::MatrixXd r = single_qubit_response(flip(gen), flip(gen));
    const Eigen::VectorXd out = biu_unfold(r * truth, r, 50);
    const double tv = 0.5 * (out - truth).cwiseAbs().sum();
    worst = std::max(worst, tv);
    failures += tv >= 1e-3;
  }
  return {failures == 0, "200 cases, max TV " + fmt(worst) + ", " + std::to_string(failures) + " above 1e-3"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// 10. Two CLI runs of one config give byte-identical CSV artifacts.
Verdict determinism() {
  const fs::path base = fs::temp_directory_path() / "rtqem_acceptance_determinism";
  fs::remove_all(base);
  const fs::path cfg = fs::path(RTQEM_SOURCE_DIR) / "configs" / "pdf_rtqem.toml";
  const RunConfig c = load_config(cfg);
  for (const char* run : {"a", "b"}) {
    const std::string cmd = "RTQEM_OUTPUT_ROOT='" + (base / run).string() + "' '" RTQEM_CLI_PATH "' run '" +
                            cfg.string() + "' >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, "cli run failed"};
  }
  std::size_t compared = 0, differing = 0;
  for (const auto& entry : fs::directory_iterator(base / "a" / c.output_dir)) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    differing += slurp(entry.path()) != slurp(base / "b" / c.output_dir / entry.path().filename());
  }
  return {compared >= 3 && differing == 0,
          std::to_string(compared) + " CSV files compared, " + std::to_string(differing) + " differ"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "stabilizer/dense oracle equivalence", 60, oracle_equivalence},
      {2, "parameter-shift gradients", 60, psr_correctness},
      {3, "depolarizing inversion", 60, depolarizing_inversion},
      {4, "lambda_eff under static noise", 120, lambda_recovery},
      {5, "MSE ordering on the 1-D proxy", 900, table_ordering},
      {6, "four-qubit scaling and bound", 1800, multidim_scaling},
      {7, "drift threshold sweep", 1200, threshold_sweep},
      {8, "concentration bound invariant", 60, nibp_invariant},
      {9, "Bayesian unfolding round trip", 60, biu_round_trip},
      {10, "run determinism", 600, determinism},
  };
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--criterion") only = std::atoi(argv[i + 1]);
  }
  bool all_pass = true;
  for (const Criterion& c : criteria) {
    if (only && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      v.pass = false;
      v.detail += "; over time budget";
    }
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " - " << v.detail << " ["
              << fmt(seconds) << " s]" << std::endl;
    all_pass = all_pass && v.pass;
  }
  return all_pass ? 0 : 1;
}
