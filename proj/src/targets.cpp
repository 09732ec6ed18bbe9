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

#include "rtqem/targets.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

namespace rtqem {

std::string_view to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::csv_file: return "csv_file";
    case TargetKind::pdf_proxy: return "pdf_proxy";
    case TargetKind::multidim_cos: return "multidim_cos";
  }
  return "?";
}

TargetKind parse_target_kind(std::string_view text) {
  if (text == "csv_file") return TargetKind::csv_file;
  if (text == "pdf_proxy") return TargetKind::pdf_proxy;
  if (text == "multidim_cos") return TargetKind::multidim_cos;
  throw std::invalid_argument("unknown target kind '" + std::string(text) + "'");
}

std::string_view to_string(Sampling sampling) {
  return sampling == Sampling::logarithmic ? "logarithmic" : "uniform";
}

Sampling parse_sampling(std::string_view text) {
  if (text == "logarithmic") return Sampling::logarithmic;
  if (text == "uniform") return Sampling::uniform;
  throw std::invalid_argument("unknown sampling '" + std::string(text) + "'");
}

void validate(const TargetSpec& spec) {
  if (spec.kind == TargetKind::csv_file) {
    if (spec.csv_path.empty()) throw std::invalid_argument("csv_file target needs a path");
    return;
  }
  if (spec.n_dim < 1) throw std::invalid_argument("target needs n_dim >= 1");
  if (spec.n_data < 2) throw std::invalid_argument("target needs n_data >= 2");
  if (spec.beta && static_cast<std::size_t>(spec.beta->size()) != spec.n_dim) {
    throw std::invalid_argument("beta length does not match n_dim");
  }
  if (spec.kind == TargetKind::pdf_proxy) {
    if (spec.n_dim != 1) throw std::invalid_argument("pdf_proxy is one-dimensional");
    if (!(spec.x_min > 0.0 && spec.x_min < 1.0)) throw std::invalid_argument("x_min must lie in (0, 1)");
  }
}

Eigen::VectorXd default_beta(std::size_t n_dim) {
  if (n_dim == 1) return Eigen::VectorXd::Constant(1, 0.5);
  return Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n_dim), 0.5, 2.5);
}

double multidim_cos(const Eigen::VectorXd& x, const Eigen::VectorXd& beta) {
  if (x.size() != beta.size()) throw std::invalid_argument("multidim_cos: dimension mismatch");
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const int i = static_cast<int>(k) + 1;
    const double bx = beta(k) * x(k);
    const double sign = i % 2 == 1 ? 1.0 : -1.0;
    sum += std::pow(std::cos(bx), i) + sign * bx;
  }
  return sum;
}

double pdf_proxy(double x, double a, double b) { return std::pow(x, -a) * std::pow(1.0 - x, b); }

Dataset rescale_targets(std::vector<Eigen::VectorXd> inputs, const Eigen::VectorXd& raw) {
  Dataset data;
  data.inputs = std::move(inputs);
  const double lo = raw.minCoeff();
  const double hi = raw.maxCoeff();
  const double span = hi - lo;
  data.target_offset = lo;
  data.target_scale = span > 0.0 ? span : 1.0;
  data.targets = (raw.array() - lo) / data.target_scale;
  return data;
}

Dataset gen_multidim_cos(const TargetSpec& spec, Rng& rng) {
  validate(spec);
  const Eigen::VectorXd beta = spec.beta ? *spec.beta : default_beta(spec.n_dim);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Eigen::VectorXd> inputs;
  inputs.reserve(spec.n_data);
  Eigen::VectorXd raw(static_cast<Eigen::Index>(spec.n_data));
  for (std::size_t i = 0; i < spec.n_data; ++i) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(spec.n_dim));
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = unit(rng);
    raw(static_cast<Eigen::Index>(i)) = multidim_cos(x, beta);
    inputs.push_back(std::move(x));
  }
  return rescale_targets(std::move(inputs), raw);
}

Dataset gen_pdf_proxy(const TargetSpec& spec, Rng& rng) {
  validate(spec);
  std::vector<Eigen::VectorXd> inputs;
  inputs.reserve(spec.n_data);
  Eigen::VectorXd raw(static_cast<Eigen::Index>(spec.n_data));
  const double log_lo = std::log(spec.x_min);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < spec.n_data; ++i) {
    double x;
    if (spec.sampling == Sampling::logarithmic) {
      const double t = static_cast<double>(i) / static_cast<double>(spec.n_data - 1);
      x = std::exp(log_lo * (1.0 - t));
    } else {
      x = spec.x_min + (1.0 - spec.x_min) * unit(rng);
    }
    raw(static_cast<Eigen::Index>(i)) = pdf_proxy(x, spec.a, spec.b);
    inputs.push_back(Eigen::VectorXd::Constant(1, x));
  }
  return rescale_targets(std::move(inputs), raw);
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw CsvError("line " + std::to_string(line) + ": cannot parse '" + std::string(field) + "' as a number", line);
  }
  return value;
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open " + path.string(), 0);
  std::string line;
  std::size_t line_no = 0;
  std::size_t n_dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw CsvError(path.string() + ": empty file", 0);
  {
    const auto header = split_commas(line);
    if (header.size() < 2) throw CsvError("line " + std::to_string(line_no) + ": header needs x1,...,xn,y", line_no);
    n_dim = header.size() - 1;
    for (std::size_t k = 0; k < n_dim; ++k) {
      if (trim(header[k]) != "x" + std::to_string(k + 1)) {
        throw CsvError("line " + std::to_string(line_no) + ": expected column x" + std::to_string(k + 1), line_no);
      }
    }
    if (trim(header.back()) != "y") throw CsvError("line " + std::to_string(line_no) + ": last column must be y", line_no);
  }

  std::vector<Eigen::VectorXd> inputs;
  std::vector<double> ys;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != n_dim + 1) {
      throw CsvError("line " + std::to_string(line_no) + ": expected " + std::to_string(n_dim + 1) + " fields, found " +
                         std::to_string(fields.size()),
                     line_no);
    }
    Eigen::VectorXd x(static_cast<Eigen::Index>(n_dim));
    for (std::size_t k = 0; k < n_dim; ++k) {
      x(static_cast<Eigen::Index>(k)) = parse_number(fields[k], line_no);
      if (x(static_cast<Eigen::Index>(k)) < 0.0 || x(static_cast<Eigen::Index>(k)) > 1.0) {
        throw CsvError("line " + std::to_string(line_no) + ": input outside [0, 1]", line_no);
      }
    }
    ys.push_back(parse_number(fields.back(), line_no));
    inputs.push_back(std::move(x));
  }
  if (inputs.empty()) throw CsvError(path.string() + ": no data rows", 0);
  return rescale_targets(std::move(inputs), Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size())));
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void write_csv(const Dataset& data, const std::filesystem::path& path) {
  validate(data);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const std::size_t n = data.n_dim();
  for (std::size_t k = 0; k < n; ++k) out << 'x' << k + 1 << ',';
  out << "y\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t k = 0; k < n; ++k) out << shortest(data.inputs[i](static_cast<Eigen::Index>(k))) << ',';
    out << shortest(data.target_offset + data.target_scale * data.targets(static_cast<Eigen::Index>(i))) << '\n';
  }
}

Dataset make_dataset(const TargetSpec& spec, Rng& rng) {
  validate(spec);
  switch (spec.kind) {
    case TargetKind::csv_file: return load_csv(spec.csv_path);
    case TargetKind::pdf_proxy: return gen_pdf_proxy(spec, rng);
    case TargetKind::multidim_cos: return gen_multidim_cos(spec, rng);
  }
  throw std::logic_error("unreachable target kind");
}

}  // namespace rtqem
