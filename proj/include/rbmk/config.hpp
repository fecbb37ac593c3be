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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rbmk/channels.hpp"
#include "rbmk/decoupler.hpp"
#include "rbmk/lindblad.hpp"
#include "rbmk/twirl_experiments.hpp"

namespace rbmk {

enum class ExperimentKind { Markov, NonMarkov, DD, RcMean, RcVariance, DeltaScan };

std::string to_string(ExperimentKind kind);

// identity | depolarizing(lambda) | amplitude_damping(gamma) | dephasing(prob)
struct ChannelSpec {
  std::string type = "identity";
  double param = 0.0;

  QuantumChannel build() const;
};

struct ModelSpec {
  bool paper = true;
  PaperModelParams params;
  ChannelSpec channel;
  // Applied before the measurement; channel models only.
  std::optional<ChannelSpec> spam;
};

struct RBExperimentConfig {
  ExperimentKind kind = ExperimentKind::NonMarkov;
  ModelSpec model;
  std::vector<int> m_list;
  int n_samples = 0;
  std::uint64_t seed = 0;
  double tau_rb = 0.0;
  double tau_dd = 0.0;
  std::vector<double> tau_dd_grid;
  DDForm dd_form = DDForm::Plain;
  DDSpam dd_spam = DDSpam::Dd;
  ComplexMatrix rho_env;
  ComplexMatrix rho_sys;
  ComplexMatrix measurement;
  std::vector<TwirlCombo> combos;
  std::string output_dir;
  nlohmann::ordered_json echo;

  bool needs_samples() const;
};

// Parses and validates a JSON config. All problems found are reported at once
// in a ConfigError whose lines read "<source>:<line>: <message>".
RBExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
// Throws IoError when the file cannot be read.
RBExperimentConfig load_config(const std::string& path);

// "0", "1", "+", "-", "+i", "-i", "mixed" or {"re": [[...]], "im": [[...]]}.
ComplexMatrix parse_operator_spec(const nlohmann::ordered_json& spec, int dim);

}  // namespace rbmk
