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

#include <string>
#include <vector>

#include "rbmk/rb_engine.hpp"

namespace rbmk {

struct FitResult {
  double a = 0.0;
  double b = 0.0;
  double p = 1.0;
  double residual_norm = 0.0;  // unweighted L2
  std::vector<double> residuals;  // data - model, per point
  bool identifiable = true;
  bool weighted = false;
};

// Minimizes sum_m w_m (y_m - A p^m - B)^2 over p in [1e-6, 1] by a grid scan and
// golden-section refinement, solving for (A, B) in closed form at each p.
// Weights are 1/stderr^2 when `stderr_values` is non-empty and all positive.
FitResult fit_exponential(const std::vector<int>& m, const std::vector<double>& y,
                          const std::vector<double>& stderr_values = {});
// Fits the sample means, or the analytical column when no samples are present.
FitResult fit_exponential(const DecaySeries& series);

double fit_model(const FitResult& fit, int m);

enum class Verdict { ConsistentWithExponential, SignificantDeviation };

std::string to_string(Verdict v);

struct Diagnostic {
  Verdict verdict = Verdict::ConsistentWithExponential;
  std::vector<double> z;
  double max_abs_z = 0.0;
  int n_significant = 0;
};

inline constexpr double kSignificanceZ = 3.0;

// z_m = residual / stderr; significant when |z| > 3 at two or more points.
Diagnostic nonexp_diagnostic(const DecaySeries& series, const FitResult& fit);

}  // namespace rbmk
