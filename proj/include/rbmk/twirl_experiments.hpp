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

#include "rbmk/rb_engine.hpp"

namespace rbmk {

enum class TwirlCombo { BareBare, TwirledBulkBareSpam, BareBulkTwirledSpam, TwirledTwirled };

std::string to_string(TwirlCombo combo);
// Accepts "bare/bare", "twirled/bare", "bare/twirled", "twirled/twirled" (bulk/spam).
TwirlCombo parse_twirl_combo(const std::string& text);

const std::vector<TwirlCombo>& all_twirl_combos();

// `base` with the S-Pauli twirl applied to the bulk and/or SPAM channels.
NoiseModel apply_twirl_combo(const NoiseModel& base, TwirlCombo combo);

struct TwirlComparisonSpec {
  NoiseModel base;
  std::vector<TwirlCombo> combos;
  std::vector<int> m_list;
  int n_samples = 40;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

struct ComboSeries {
  TwirlCombo combo;
  std::vector<double> values;  // analytical ASF per m
};

std::vector<ComboSeries> rc_mean_comparison(const TwirlComparisonSpec& spec);

struct VarianceRow {
  int m = 0;
  double var_bare = 0.0;
  double var_twirled = 0.0;
  std::optional<double> var_exact_bare;
  std::optional<double> var_exact_twirled;
};

// Sampled variances use identical gate sequences for the bare and fully
// twirled models. Exact variances are added for m <= max_exact_m.
std::vector<VarianceRow> rc_variance_comparison(const TwirlComparisonSpec& spec, int max_exact_m = 2);

}  // namespace rbmk
