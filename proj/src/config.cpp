// Copyright 2026 The rbmk Authors
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

#include "rbmk/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rbmk/errors.hpp"

namespace rbmk {

namespace {

using Json = nlohmann::ordered_json;

int line_of_offset(const std::string& text, size_t offset) {
  offset = std::min(offset, text.size());
  int line = 1;
  for (size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

// Line of the first occurrence of "key" as an object key; 1 if not found.
int line_of_key(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    size_t after = pos + needle.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (after < text.size() && text[after] == ':') {
      return line_of_offset(text, pos);
    }
    pos = after;
  }
  return 1;
}

class Collector {
 public:
  Collector(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  void add(const std::string& key, const std::string& message) {
    errors_.push_back(source_ + ":" + std::to_string(line_of_key(text_, key)) + ": " + message);
  }

  void raise_if_any() const {
    if (errors_.empty()) return;
    std::string all;
    for (const auto& e : errors_) {
      all += (all.empty() ? "" : "\n") + e;
    }
    throw ConfigError(all);
  }

 private:
  const std::string& text_;
  std::string source_;
  std::vector<std::string> errors_;
};

bool get_number(const Json& obj, const std::string& key, double& out, Collector& errs, bool required,
                const std::string& path) {
  if (!obj.contains(key)) {
    if (required) errs.add(path.empty() ? key : path, "missing required field '" + key + "'");
    return false;
  }
  if (!obj.at(key).is_number()) {
    errs.add(key, "field '" + key + "' must be a number");
    return false;
  }
  out = obj.at(key).get<double>();
  if (!std::isfinite(out)) {
    errs.add(key, "field '" + key + "' must be finite");
    return false;
  }
  return true;
}

ComplexMatrix ket_projector(Complex a, Complex b) {
  ComplexVector v(2);
  v << a, b;
  v.normalize();
  return v * v.adjoint();
}

void parse_channel_spec(const Json& j, ChannelSpec& spec, Collector& errs, const std::string& key) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    errs.add(key, "'" + key + "' must be an object with a string 'type'");
    return;
  }
  spec.type = j.at("type").get<std::string>();
  double v = 0.0;
  if (spec.type == "identity") {
    return;
  }
  const std::string param = spec.type == "depolarizing"        ? "lambda"
                            : spec.type == "amplitude_damping" ? "gamma"
                            : spec.type == "dephasing"         ? "prob"
                                                               : "";
  if (param.empty()) {
    errs.add("type", "unknown channel type '" + spec.type +
                         "' (expected paper, identity, depolarizing, amplitude_damping, dephasing)");
    return;
  }
  if (get_number(j, param, v, errs, true, "type")) {
    const double lo = spec.type == "depolarizing" ? -1.0 / 3.0 : 0.0;
    if (v < lo || v > 1.0) {
      errs.add(param, "'" + param + "' out of range for " + spec.type);
    }
    spec.param = v;
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Markov:
      return "markov";
    case ExperimentKind::NonMarkov:
      return "nonmarkov";
    case ExperimentKind::DD:
      return "dd";
    case ExperimentKind::RcMean:
      return "rc-mean";
    case ExperimentKind::RcVariance:
      return "rc-variance";
    case ExperimentKind::DeltaScan:
      return "delta-scan";
  }
  return "unknown";
}

QuantumChannel ChannelSpec::build() const {
  if (type == "identity") return QuantumChannel::identity(plain_dims(2));
  if (type == "depolarizing") return depolarizing_channel(param);
  if (type == "amplitude_damping") return amplitude_damping_channel(param);
  if (type == "dephasing") return dephasing_channel(param);
  throw ConfigError("unknown channel type '" + type + "'");
}

bool RBExperimentConfig::needs_samples() const {
  return kind == ExperimentKind::Markov || kind == ExperimentKind::NonMarkov || kind == ExperimentKind::DD ||
         kind == ExperimentKind::RcVariance;
}

ComplexMatrix parse_operator_spec(const Json& spec, int dim) {
  if (spec.is_string()) {
    const auto s = spec.get<std::string>();
    const Complex i(0.0, 1.0);
    if (s == "mixed") return ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
    if (s == "0") return basis_projector(dim, 0);
    if (s == "1" && dim >= 2) return basis_projector(dim, 1);
    if (dim == 2) {
      if (s == "+") return ket_projector(1.0, 1.0);
      if (s == "-") return ket_projector(1.0, -1.0);
      if (s == "+i") return ket_projector(1.0, i);
      if (s == "-i") return ket_projector(1.0, -i);
    }
    throw ConfigError("unknown operator '" + s + "'");
  }
  if (spec.is_object() && spec.contains("re")) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    const auto& re = spec.at("re");
    const Json im = spec.contains("im") ? spec.at("im") : Json();
    if (!re.is_array() || static_cast<int>(re.size()) != dim) {
      throw ConfigError("operator 're' must be a " + std::to_string(dim) + "x" + std::to_string(dim) + " array");
    }
    for (int r = 0; r < dim; ++r) {
      if (!re[static_cast<size_t>(r)].is_array() || static_cast<int>(re[static_cast<size_t>(r)].size()) != dim) {
        throw ConfigError("operator 're' row " + std::to_string(r) + " has wrong length");
      }
      for (int c = 0; c < dim; ++c) {
        double imag = 0.0;
        if (!im.is_null()) imag = im.at(static_cast<size_t>(r)).at(static_cast<size_t>(c)).get<double>();
        m(r, c) = Complex(re[static_cast<size_t>(r)][static_cast<size_t>(c)].get<double>(), imag);
      }
    }
    return m;
  }
  throw ConfigError("operator spec must be a string or an object with 're'/'im'");
}

RBExperimentConfig parse_config(const std::string& text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(source + ":" + std::to_string(line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0)) +
                      ": JSON parse error: " + e.what());
  }
  Collector errs(text, source);
  RBExperimentConfig cfg;
  if (!doc.is_object()) {
    errs.add("", "config must be a JSON object");
    errs.raise_if_any();
  }
  cfg.echo = doc;

  static const std::vector<std::string> known{"kind",    "model",   "m_list",      "n_samples", "seed",
                                              "tau_rb",  "tau_dd",  "tau_dd_grid", "dd_form",   "dd_spam",
                                              "rho_E",   "rho_S",   "M",           "combos",    "output_dir"};
  for (const auto& item : doc.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      errs.add(item.key(), "unknown field '" + item.key() + "'");
    }
  }

  // kind
  bool kind_ok = false;
  if (!doc.contains("kind") || !doc.at("kind").is_string()) {
    errs.add("kind", "missing or non-string field 'kind'");
  } else {
    const auto k = doc.at("kind").get<std::string>();
    for (const auto cand : {ExperimentKind::Markov, ExperimentKind::NonMarkov, ExperimentKind::DD,
                            ExperimentKind::RcMean, ExperimentKind::RcVariance, ExperimentKind::DeltaScan}) {
      if (to_string(cand) == k) {
        cfg.kind = cand;
        kind_ok = true;
      }
    }
    if (!kind_ok) {
      errs.add("kind", "unknown kind '" + k + "' (expected markov, nonmarkov, dd, rc-mean, rc-variance, delta-scan)");
    }
  }

  // model
  if (!doc.contains("model") || !doc.at("model").is_object()) {
    errs.add("model", "missing or non-object field 'model'");
  } else {
    const auto& model = doc.at("model");
    const std::string type = model.contains("type") && model.at("type").is_string()
                                 ? model.at("type").get<std::string>()
                                 : "";
    if (type == "paper") {
      cfg.model.paper = true;
      auto& p = cfg.model.params;
      get_number(model, "j", p.j, errs, true, "model");
      get_number(model, "hx", p.hx, errs, true, "model");
      get_number(model, "hy", p.hy, errs, true, "model");
      if (get_number(model, "gamma0", p.gamma0, errs, true, "model") && p.gamma0 < 0) {
        errs.add("gamma0", "gamma0 must be non-negative");
      }
      if (get_number(model, "gamma1", p.gamma1, errs, true, "model") && p.gamma1 < 0) {
        errs.add("gamma1", "gamma1 must be non-negative");
      }
      if (model.contains("taylor_order")) {
        if (!model.at("taylor_order").is_number_integer() || model.at("taylor_order").get<int>() < 1) {
          errs.add("taylor_order", "taylor_order must be an integer >= 1");
        } else {
          p.taylor_order = model.at("taylor_order").get<int>();
        }
      }
      if (model.contains("normalization")) {
        const auto n = model.at("normalization").is_string() ? model.at("normalization").get<std::string>() : "";
        if (n == "bare") {
          p.normalization = DissipatorNormalization::Bare;
        } else if (n == "orthonormal") {
          p.normalization = DissipatorNormalization::Orthonormal;
        } else {
          errs.add("normalization", "normalization must be 'bare' or 'orthonormal'");
        }
      }
    } else if (type.empty()) {
      errs.add("model", "model needs a string 'type'");
    } else {
      cfg.model.paper = false;
      parse_channel_spec(model, cfg.model.channel, errs, "model");
      if (model.contains("spam")) {
        ChannelSpec spam;
        parse_channel_spec(model.at("spam"), spam, errs, "spam");
        cfg.model.spam = spam;
      }
    }
  }

  // m_list
  if (!doc.contains("m_list")) {
    errs.add("m_list", "missing required field 'm_list'");
  } else {
    const auto& ml = doc.at("m_list");
    if (ml.is_array()) {
      for (const auto& v : ml) {
        if (!v.is_number_integer()) {
          errs.add("m_list", "m_list entries must be integers");
          break;
        }
        cfg.m_list.push_back(v.get<int>());
      }
    } else if (ml.is_object() && ml.contains("start") && ml.contains("stop")) {
      const int start = ml.at("start").get<int>();
      const int stop = ml.at("stop").get<int>();
      const int step = ml.contains("step") ? ml.at("step").get<int>() : 1;
      if (step < 1) {
        errs.add("step", "m_list step must be >= 1");
      } else {
        for (int m = start; m <= stop; m += step) cfg.m_list.push_back(m);
      }
    } else {
      errs.add("m_list", "m_list must be an array or {start, stop, step}");
    }
    if (cfg.m_list.empty()) {
      errs.add("m_list", "m_list is empty");
    }
    for (size_t i = 0; i < cfg.m_list.size(); ++i) {
      if (cfg.m_list[i] < 1) {
        errs.add("m_list", "m_list entries must be >= 1");
        break;
      }
      if (i > 0 && cfg.m_list[i] <= cfg.m_list[i - 1]) {
        errs.add("m_list", "m_list must be strictly increasing");
        break;
      }
    }
  }

  // seed
  if (!doc.contains("seed")) {
    errs.add("seed", "missing required field 'seed'");
  } else if (!doc.at("seed").is_number_unsigned()) {
    errs.add("seed", "seed must be a non-negative integer");
  } else {
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }

  // n_samples
  if (doc.contains("n_samples")) {
    if (!doc.at("n_samples").is_number_integer() || doc.at("n_samples").get<long long>() < 2) {
      errs.add("n_samples", "n_samples must be an integer >= 2");
    } else {
      cfg.n_samples = doc.at("n_samples").get<int>();
    }
  } else if (kind_ok && cfg.needs_samples()) {
    errs.add("kind", "kind '" + to_string(cfg.kind) + "' requires 'n_samples'");
  }

  // times
  const bool paper = cfg.model.paper && doc.contains("model");
  if (paper) {
    if (get_number(doc, "tau_rb", cfg.tau_rb, errs, true, "model") && !(cfg.tau_rb > 0)) {
      errs.add("tau_rb", "tau_rb must be positive");
    }
  } else if (doc.contains("tau_rb")) {
    errs.add("tau_rb", "tau_rb only applies to model type 'paper'");
  }
  if (kind_ok && cfg.kind == ExperimentKind::DD) {
    if (get_number(doc, "tau_dd", cfg.tau_dd, errs, true, "kind") && !(cfg.tau_dd > 0)) {
      errs.add("tau_dd", "tau_dd must be positive");
    }
  }
  if (kind_ok && cfg.kind == ExperimentKind::DeltaScan) {
    if (!doc.contains("tau_dd_grid") || !doc.at("tau_dd_grid").is_array() || doc.at("tau_dd_grid").empty()) {
      errs.add("tau_dd_grid", "kind 'delta-scan' requires a non-empty array 'tau_dd_grid'");
    } else {
      for (const auto& v : doc.at("tau_dd_grid")) {
        if (!v.is_number() || !(v.get<double>() > 0)) {
          errs.add("tau_dd_grid", "tau_dd_grid entries must be positive numbers");
          break;
        }
        cfg.tau_dd_grid.push_back(v.get<double>());
      }
    }
  }
  if (kind_ok && (cfg.kind == ExperimentKind::DD || cfg.kind == ExperimentKind::DeltaScan) && doc.contains("model") &&
      !cfg.model.paper) {
    errs.add("model", "kind '" + to_string(cfg.kind) + "' requires model type 'paper' (a Lindblad generator)");
  }
  if (kind_ok && cfg.kind == ExperimentKind::Markov && doc.contains("model") && cfg.model.paper) {
    errs.add("model", "kind 'markov' requires a channel model acting on S alone");
  }
  if (doc.contains("dd_form")) {
    const auto f = doc.at("dd_form").is_string() ? doc.at("dd_form").get<std::string>() : "";
    if (f == "plain") {
      cfg.dd_form = DDForm::Plain;
    } else if (f == "edge-split") {
      cfg.dd_form = DDForm::EdgeSplit;
    } else {
      errs.add("dd_form", "dd_form must be 'plain' or 'edge-split'");
    }
  }
  if (doc.contains("dd_spam")) {
    const auto f = doc.at("dd_spam").is_string() ? doc.at("dd_spam").get<std::string>() : "";
    if (f == "dd") {
      cfg.dd_spam = DDSpam::Dd;
    } else if (f == "bare") {
      cfg.dd_spam = DDSpam::Bare;
    } else {
      errs.add("dd_spam", "dd_spam must be 'dd' or 'bare'");
    }
  }

  // states
  const int d_env = paper ? 2 : 1;
  auto op_field = [&](const char* key, ComplexMatrix& out, int dim) {
    try {
      out = parse_operator_spec(doc.contains(key) ? doc.at(key) : Json("0"), dim);
    } catch (const std::exception& e) {
      errs.add(key, std::string("field '") + key + "': " + e.what());
    }
  };
  op_field("rho_E", cfg.rho_env, d_env);
  op_field("rho_S", cfg.rho_sys, 2);
  op_field("M", cfg.measurement, 2);
  auto check_positive = [&](const char* key, const ComplexMatrix& op, bool unit_trace) {
    if (op.size() == 0) return;
    if (!is_hermitian(op, 1e-10)) {
      errs.add(key, std::string("field '") + key + "' is not Hermitian");
      return;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(op, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
      errs.add(key, std::string("field '") + key + "' is not positive semidefinite");
    }
    if (unit_trace && std::abs(op.trace() - 1.0) > 1e-10) {
      errs.add(key, std::string("field '") + key + "' does not have unit trace");
    }
    if (!unit_trace && eig.eigenvalues().maxCoeff() > 1.0 + 1e-10) {
      errs.add(key, std::string("field '") + key + "' has eigenvalues above 1");
    }
  };
  check_positive("rho_E", cfg.rho_env, true);
  check_positive("rho_S", cfg.rho_sys, true);
  check_positive("M", cfg.measurement, false);

  // combos
  if (doc.contains("combos")) {
    if (!doc.at("combos").is_array() || doc.at("combos").empty()) {
      errs.add("combos", "combos must be a non-empty array");
    } else {
      for (const auto& c : doc.at("combos")) {
        try {
          cfg.combos.push_back(parse_twirl_combo(c.is_string() ? c.get<std::string>() : ""));
        } catch (const ConfigError& e) {
          errs.add("combos", e.what());
        }
      }
    }
  } else {
    cfg.combos = all_twirl_combos();
  }

  if (doc.contains("output_dir")) {
    if (!doc.at("output_dir").is_string()) {
      errs.add("output_dir", "output_dir must be a string");
    } else {
      cfg.output_dir = doc.at("output_dir").get<std::string>();
    }
  }
  errs.raise_if_any();
  return cfg;
}

RBExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace rbmk
