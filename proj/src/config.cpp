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

#include "rtqem/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

namespace rtqem {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

class ValueParser {
 public:
  ValueParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  json parse() {
    json v = value();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  json value() {
    skip_space();
    if (pos_ >= text_.size()) fail("missing value");
    const char c = text_[pos_];
    if (c == '"') return string();
    if (c == '[') return array();
    return scalar();
  }

  json string() {
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        if (++pos_ >= text_.size()) break;
        switch (text_[pos_]) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: fail("unsupported escape in string");
        }
      } else {
        out += text_[pos_];
      }
      ++pos_;
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  json array() {
    ++pos_;
    json out = json::array();
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return out;
    }
    while (true) {
      out.push_back(value());
      skip_space();
      if (pos_ >= text_.size()) fail("unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          return out;
        }
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        return out;
      }
      fail("expected ',' or ']' in array");
    }
  }

  json scalar() {
    std::size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' && text_[end] != ' ' && text_[end] != '\t') ++end;
    std::string token(text_.substr(pos_, end - pos_));
    pos_ = end;
    if (token == "true") return true;
    if (token == "false") return false;
    if (token == "inf" || token == "+inf") return std::numeric_limits<double>::infinity();
    std::erase(token, '_');
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (!token.empty() && *first == '+') ++first;
    const bool is_float = token.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      std::int64_t i = 0;
      const auto [ptr, ec] = std::from_chars(first, last, i);
      if (ec == std::errc{} && ptr == last) return i;
    } else {
      double d = 0.0;
      const auto [ptr, ec] = std::from_chars(first, last, d);
      if (ec == std::errc{} && ptr == last) return d;
    }
    fail("cannot parse value '" + token + "'");
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

// Drops a trailing comment, ignoring '#' inside strings.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool valid_key(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

}  // namespace

json parse_toml(std::string_view text) {
  json out = json::object();
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      throw ConfigError("line " + std::to_string(line_no) + ": tables are not supported, use flat keys");
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (!valid_key(key)) throw ConfigError("line " + std::to_string(line_no) + ": invalid key '" + key + "'");
    if (out.contains(key)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    out[key] = ValueParser(trim(line.substr(eq + 1)), line_no).parse();
  }
  return out;
}

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "name",          "seed",          "output_dir",     "svg",
      "mode",          "n_epochs",      "n_shots",        "eta",
      "epsilon_ell",   "mitigation_set_size", "n_runs",   "learn_initial_map",
      "min_epochs_between_relearns",  "unfold_iterations",
      "n_qubits",      "n_layers",      "activation",
      "target",        "n_dim",         "n_data",         "sampling",
      "beta",          "x_min",         "pdf_a",          "pdf_b",
      "csv_path",      "p_x",           "p_y",            "p_z",
      "p_flip",        "pauli_per_qubit", "readout_flips", "placement",
      "walk_sigma",    "walk_steps",    "walk_seed",
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(const json& raw) : raw_(raw) {}

  bool has(const std::string& key) const { return raw_.contains(key); }

  const json& require(const std::string& key) const {
    if (!raw_.contains(key)) throw ConfigError("missing required key '" + key + "'");
    return raw_.at(key);
  }

  std::string str(const std::string& key, std::string fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw_.at(key);
    if (!v.is_string()) throw ConfigError("key '" + key + "' must be a string");
    return v.get<std::string>();
  }

  std::string required_str(const std::string& key) const {
    require(key);
    return str(key, "");
  }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return as_real(key, raw_.at(key));
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    return as_count(key, raw_.at(key));
  }

  std::uint64_t required_count(const std::string& key) const { return as_count(key, require(key)); }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw_.at(key);
    if (!v.is_boolean()) throw ConfigError("key '" + key + "' must be true or false");
    return v.get<bool>();
  }

  std::vector<double> reals(const std::string& key, const json& v) const {
    if (!v.is_array()) throw ConfigError("key '" + key + "' must be an array");
    std::vector<double> out;
    for (const json& e : v) out.push_back(as_real(key, e));
    return out;
  }

  static double as_real(const std::string& key, const json& v) {
    if (v.is_string() && (v == "inf" || v == "+inf")) return std::numeric_limits<double>::infinity();
    if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
    const double d = v.get<double>();
    if (std::isnan(d)) throw ConfigError("key '" + key + "' is NaN");
    return d;
  }

  static std::uint64_t as_count(const std::string& key, const json& v) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      const auto i = v.get<std::int64_t>();
      if (i >= 0) return static_cast<std::uint64_t>(i);
    }
    throw ConfigError("key '" + key + "' must be a non-negative integer");
  }

 private:
  const json& raw_;
};

template <typename Parse>
auto parse_enum(const std::string& key, const std::string& text, Parse parse) {
  try {
    return parse(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

}  // namespace

RunConfig resolve_config(const json& raw, std::string_view stem) {
  if (!raw.is_object()) throw ConfigError("configuration must be a key/value object");
  for (const auto& [key, value] : raw.items()) {
    if (!known_keys().contains(key)) throw ConfigError("unknown key '" + key + "'");
  }
  const Reader r(raw);
  RunConfig cfg;
  cfg.name = r.str("name", std::string(stem));
  cfg.output_dir = r.str("output_dir", cfg.name);
  cfg.write_svg = r.flag("svg", true);

  TrainingConfig& t = cfg.training;
  t.mode = parse_enum("mode", r.required_str("mode"), parse_mode);
  t.seed = r.count("seed", t.seed);
  t.n_epochs = r.count("n_epochs", t.n_epochs);
  const std::uint64_t shots = r.count("n_shots", t.n_shots.value_or(0));
  t.n_shots = shots == 0 ? std::nullopt : std::optional<std::uint64_t>(shots);
  t.eta = r.real("eta", t.eta);
  t.epsilon_ell = r.real("epsilon_ell", t.epsilon_ell);
  t.mitigation_set_size = r.count("mitigation_set_size", t.mitigation_set_size);
  t.n_runs = r.count("n_runs", t.n_runs);
  t.learn_initial_map = r.flag("learn_initial_map", t.learn_initial_map);
  t.min_epochs_between_relearns = r.count("min_epochs_between_relearns", t.min_epochs_between_relearns);
  t.unfold_iterations = r.count("unfold_iterations", t.unfold_iterations);

  ModelSpec& m = cfg.model;
  m.n_qubits = r.required_count("n_qubits");
  m.n_layers = r.required_count("n_layers");
  m.activation.kind = parse_enum("activation", r.str("activation", "identity"), parse_activation);

  TargetSpec& ts = cfg.target;
  ts.kind = parse_enum("target", r.required_str("target"), parse_target_kind);
  ts.n_dim = r.count("n_dim", m.n_qubits);
  ts.n_data = r.count("n_data", ts.n_data);
  ts.sampling = parse_enum("sampling", r.str("sampling", ts.kind == TargetKind::pdf_proxy ? "logarithmic" : "uniform"),
                           parse_sampling);
  if (r.has("beta")) {
    const auto beta = r.reals("beta", raw.at("beta"));
    ts.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
  }
  ts.x_min = r.real("x_min", ts.x_min);
  ts.a = r.real("pdf_a", ts.a);
  ts.b = r.real("pdf_b", ts.b);
  if (ts.kind == TargetKind::csv_file) ts.csv_path = r.required_str("csv_path");

  const bool noisy = t.mode != TrainingMode::noiseless;
  static const char* noise_keys[] = {"p_x", "p_y", "p_z", "p_flip", "pauli_per_qubit", "readout_flips", "placement"};
  if (noisy) {
    NoiseModel nm;
    nm.n_qubits = m.n_qubits;
    nm.pauli.p_x = Reader::as_real("p_x", r.require("p_x"));
    nm.pauli.p_y = Reader::as_real("p_y", r.require("p_y"));
    nm.pauli.p_z = Reader::as_real("p_z", r.require("p_z"));
    nm.readout.p_flip = r.real("p_flip", 0.0);
    nm.placement = parse_enum("placement", r.str("placement", "every_layer"), parse_placement);
    if (r.has("pauli_per_qubit")) {
      const json& rows = raw.at("pauli_per_qubit");
      if (!rows.is_array() || rows.size() != m.n_qubits) {
        throw ConfigError("key 'pauli_per_qubit' needs one [p_x, p_y, p_z] triple per qubit");
      }
      for (std::size_t q = 0; q < m.n_qubits; ++q) {
        const auto p = r.reals("pauli_per_qubit", rows[q]);
        if (p.size() != 3) throw ConfigError("key 'pauli_per_qubit' entries must have three values");
        nm.per_qubit[q] = PauliNoiseParams{p[0], p[1], p[2]};
      }
    }
    if (r.has("readout_flips")) {
      const json& rows = raw.at("readout_flips");
      if (!rows.is_array() || rows.size() != m.n_qubits) {
        throw ConfigError("key 'readout_flips' needs one [p01, p10] pair per qubit");
      }
      std::vector<Eigen::Matrix2d> blocks;
      for (const json& row : rows) {
        const auto p = r.reals("readout_flips", row);
        if (p.size() != 2) throw ConfigError("key 'readout_flips' entries must have two values");
        blocks.push_back(single_qubit_response(p[0], p[1]));
        cfg.readout_flips.push_back({p[0], p[1]});
      }
      nm.readout.response = product_response(blocks);
    }
    try {
      validate(nm);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("noise: ") + e.what());
    }
    cfg.noise = std::move(nm);
  } else {
    for (const char* key : noise_keys) {
      if (r.has(key)) throw ConfigError(std::string("key '") + key + "' is not allowed in noiseless mode");
    }
  }

  if (r.has("walk_sigma") || r.has("walk_steps") || r.has("walk_seed")) {
    RandomWalkConfig w;
    w.sigma_delta = Reader::as_real("walk_sigma", r.require("walk_sigma"));
    w.n_steps = r.count("walk_steps", t.n_epochs);
    if (r.has("walk_seed")) w.seed = r.count("walk_seed", 0);
    t.walk = w;
  }

  try {
    validate(t);
    validate(m);
    validate(ts);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (ts.kind != TargetKind::csv_file && ts.n_dim != m.n_qubits) {
    throw ConfigError("key 'n_dim' must equal n_qubits (one qubit per input component)");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  json raw;
  if (path.extension() == ".json") {
    try {
      raw = json::parse(buffer.str());
    } catch (const json::parse_error& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  } else {
    try {
      raw = parse_toml(buffer.str());
    } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }
  try {
    return resolve_config(raw, path.stem().string());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace {

json real_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

json to_json(const RunConfig& c) {
  const TrainingConfig& t = c.training;
  json j;
  j["name"] = c.name;
  j["output_dir"] = c.output_dir.generic_string();
  j["svg"] = c.write_svg;
  j["mode"] = std::string(to_string(t.mode));
  j["seed"] = t.seed;
  j["n_epochs"] = t.n_epochs;
  j["n_shots"] = t.n_shots.value_or(0);
  j["eta"] = t.eta;
  j["epsilon_ell"] = real_or_inf(t.epsilon_ell);
  j["mitigation_set_size"] = t.mitigation_set_size;
  j["n_runs"] = t.n_runs;
  j["learn_initial_map"] = t.learn_initial_map;
  j["min_epochs_between_relearns"] = t.min_epochs_between_relearns;
  j["unfold_iterations"] = t.unfold_iterations;
  j["n_qubits"] = c.model.n_qubits;
  j["n_layers"] = c.model.n_layers;
  j["activation"] = std::string(to_string(c.model.activation.kind));
  j["target"] = std::string(to_string(c.target.kind));
  j["n_dim"] = c.target.n_dim;
  j["n_data"] = c.target.n_data;
  j["sampling"] = std::string(to_string(c.target.sampling));
  if (c.target.kind == TargetKind::multidim_cos) {
    const Eigen::VectorXd beta = c.target.beta ? *c.target.beta : default_beta(c.target.n_dim);
    j["beta"] = std::vector<double>(beta.data(), beta.data() + beta.size());
  }
  if (c.target.kind == TargetKind::pdf_proxy) {
    j["x_min"] = c.target.x_min;
    j["pdf_a"] = c.target.a;
    j["pdf_b"] = c.target.b;
  }
  if (c.target.kind == TargetKind::csv_file) j["csv_path"] = c.target.csv_path.generic_string();
  if (c.noise) {
    const NoiseModel& n = *c.noise;
    j["p_x"] = n.pauli.p_x;
    j["p_y"] = n.pauli.p_y;
    j["p_z"] = n.pauli.p_z;
    j["p_flip"] = n.readout.p_flip;
    j["placement"] = std::string(to_string(n.placement));
    if (!n.per_qubit.empty()) {
      json rows = json::array();
      for (const auto& [q, p] : n.per_qubit) rows.push_back({p.p_x, p.p_y, p.p_z});
      j["pauli_per_qubit"] = rows;
    }
    if (!c.readout_flips.empty()) {
      json rows = json::array();
      for (const auto& [p01, p10] : c.readout_flips) rows.push_back({p01, p10});
      j["readout_flips"] = rows;
    }
  }
  if (t.walk) {
    j["walk_sigma"] = t.walk->sigma_delta;
    j["walk_steps"] = t.walk->n_steps;
    if (t.walk->seed) j["walk_seed"] = *t.walk->seed;
  }
  return j;
}

}  // namespace rtqem
