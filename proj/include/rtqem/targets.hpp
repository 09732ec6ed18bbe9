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

// Regression targets: a 1-D PDF-like proxy, the multidimensional cosine sum,
// and CSV ingestion.

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rtqem/rng.hpp"
#include "rtqem/training.hpp"

namespace rtqem {

enum class TargetKind { csv_file, pdf_proxy, multidim_cos };
enum class Sampling { logarithmic, uniform };

std::string_view to_string(TargetKind kind);
TargetKind parse_target_kind(std::string_view text);
std::string_view to_string(Sampling sampling);
Sampling parse_sampling(std::string_view text);

struct TargetSpec {
  TargetKind kind = TargetKind::pdf_proxy;
  std::size_t n_dim = 1;
  std::size_t n_data = 30;
  Sampling sampling = Sampling::logarithmic;
  std::optional<Eigen::VectorXd> beta;  // multidim_cos; default equidistant on [0.5, 2.5]
  double x_min = 1e-3;                  // lower end of the log grid
  double a = 0.3;                       // proxy shape x^-a (1-x)^b
  double b = 3.0;
  std::filesystem::path csv_path;
};

void validate(const TargetSpec& spec);

/// Thrown by load_csv; carries the 1-based line number, 0 for file-level errors.
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// n equidistant values on [0.5, 2.5]; a single dimension gets 0.5.
Eigen::VectorXd default_beta(std::size_t n_dim);

/// sum_i cos(beta_i x_i)^i + (-1)^(i-1) beta_i x_i, with i counted from 1.
double multidim_cos(const Eigen::VectorXd& x, const Eigen::VectorXd& beta);

/// x^-a (1-x)^b.
double pdf_proxy(double x, double a, double b);

/// Affine map of the targets onto [0, 1]; records offset and scale.
Dataset rescale_targets(std::vector<Eigen::VectorXd> inputs, const Eigen::VectorXd& raw);

Dataset gen_multidim_cos(const TargetSpec& spec, Rng& rng);
Dataset gen_pdf_proxy(const TargetSpec& spec, Rng& rng);
Dataset load_csv(const std::filesystem::path& path);

/// Writes header x1..xn,y and the raw (de-normalized) targets.
void write_csv(const Dataset& data, const std::filesystem::path& path);

/// Dispatches on spec.kind.
Dataset make_dataset(const TargetSpec& spec, Rng& rng);

}  // namespace rtqem
