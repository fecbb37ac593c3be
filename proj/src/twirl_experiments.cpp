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

#include "rbmk/twirl_experiments.hpp"

#include "rbmk/errors.hpp"

namespace rbmk {

std::string to_string(TwirlCombo combo) {
  switch (combo) {
    case TwirlCombo::BareBare:
      return "bare/bare";
    case TwirlCombo::TwirledBulkBareSpam:
      return "twirled/bare";
    case TwirlCombo::BareBulkTwirledSpam:
      return "bare/twirled";
    case TwirlCombo::TwirledTwirled:
      return "twirled/twirled";
  }
  return "unknown";
}

TwirlCombo parse_twirl_combo(const std::string& text) {
  for (const auto c : all_twirl_combos()) {
    if (to_string(c) == text) {
      return c;
    }
  }
  throw ConfigError("unknown twirl combo '" + text +
                    "' (expected bare/bare, twirled/bare, bare/twirled or twirled/twirled)");
}

const std::vector<TwirlCombo>& all_twirl_combos() {
  static const std::vector<TwirlCombo> combos{TwirlCombo::BareBare, TwirlCombo::TwirledBulkBareSpam,
                                              TwirlCombo::BareBulkTwirledSpam, TwirlCombo::TwirledTwirled};
  return combos;
}

NoiseModel apply_twirl_combo(const NoiseModel& base, TwirlCombo combo) {
  NoiseModel out = base;
  const bool bulk = combo == TwirlCombo::TwirledBulkBareSpam || combo == TwirlCombo::TwirledTwirled;
  const bool spam = combo == TwirlCombo::BareBulkTwirledSpam || combo == TwirlCombo::TwirledTwirled;
  if (bulk) {
    out.bulk = s_pauli_twirl(base.bulk);
  }
  if (spam) {
    out.prep = s_pauli_twirl(base.prep);
    out.meas = s_pauli_twirl(base.meas);
  }
  return out;
}

void TwirlComparisonSpec::validate() const {
  if (combos.empty()) {
    throw ConfigError("combos must not be empty");
  }
  base.validate();
  MonteCarloOptions{m_list, n_samples, seed, threads}.validate();
}

std::vector<ComboSeries> rc_mean_comparison(const TwirlComparisonSpec& spec) {
  if (spec.combos.empty()) {
    throw ConfigError("combos must not be empty");
  }
  std::vector<ComboSeries> out;
  for (const auto combo : spec.combos) {
    out.push_back({combo, analytical_asf_clifford(apply_twirl_combo(spec.base, combo), spec.m_list)});
  }
  return out;
}

std::vector<VarianceRow> rc_variance_comparison(const TwirlComparisonSpec& spec, int max_exact_m) {
  const MonteCarloOptions options{spec.m_list, spec.n_samples, spec.seed, spec.threads};
  const NoiseModel bare = spec.base;
  const NoiseModel twirled = apply_twirl_combo(spec.base, TwirlCombo::TwirledTwirled);
  const auto samples = monte_carlo_samples({bare, twirled}, options);

  std::vector<VarianceRow> rows;
  for (size_t i = 0; i < spec.m_list.size(); ++i) {
    const int m = spec.m_list[i];
    VarianceRow row;
    row.m = m;
    row.var_bare = summarize_samples(m, samples[0][i]).variance;
    row.var_twirled = summarize_samples(m, samples[1][i]).variance;
    if (m <= std::min(max_exact_m, kMaxOracleLength)) {
      row.var_exact_bare = exact_sequence_statistics(bare.schedule(m)).variance;
      row.var_exact_twirled = exact_sequence_statistics(twirled.schedule(m)).variance;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rbmk
