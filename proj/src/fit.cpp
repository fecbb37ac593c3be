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

#include "rbmk/fit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace rbmk {

namespace {

constexpr double kMinP = 1e-6;
constexpr int kGridUniform = 400;
constexpr int kGridLog = 400;

struct Problem {
  std::vector<double> m;
  std::vector<double> y;
  std::vector<double> w;
};

struct Linear {
  double a = 0.0;
  double b = 0.0;
  double cost = 0.0;
};

Linear solve_linear(const Problem& pr, double p) {
  // Normal equations for y ~ A x + B with x = p^m.
  double sw = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  std::vector<double> x(pr.m.size());
  for (size_t i = 0; i < pr.m.size(); ++i) {
    x[i] = std::pow(p, pr.m[i]);
    sw += pr.w[i];
    sx += pr.w[i] * x[i];
    sxx += pr.w[i] * x[i] * x[i];
    sy += pr.w[i] * pr.y[i];
    sxy += pr.w[i] * x[i] * pr.y[i];
  }
  Linear out;
  const double det = sw * sxx - sx * sx;
  if (std::abs(det) <= 1e-14 * std::max(1.0, sw * sxx)) {
    // x is (numerically) constant: only A x + B is determined.
    out.a = 0.0;
    out.b = sy / sw;
  } else {
    out.a = (sw * sxy - sx * sy) / det;
    out.b = (sxx * sy - sx * sxy) / det;
  }
  for (size_t i = 0; i < pr.m.size(); ++i) {
    const double r = pr.y[i] - out.a * x[i] - out.b;
    out.cost += pr.w[i] * r * r;
  }
  return out;
}

FitResult finish(const Problem& pr, double p, const Linear& lin, bool weighted) {
  FitResult fit;
  fit.p = p;
  fit.a = lin.a;
  fit.b = lin.b;
  fit.weighted = weighted;
  double ss = 0.0;
  for (size_t i = 0; i < pr.m.size(); ++i) {
    const double r = pr.y[i] - (lin.a * std::pow(p, pr.m[i]) + lin.b);
    fit.residuals.push_back(r);
    ss += r * r;
  }
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

}  // namespace

FitResult fit_exponential(const std::vector<int>& m, const std::vector<double>& y,
                          const std::vector<double>& stderr_values) {
  if (m.size() != y.size()) {
    throw std::invalid_argument("fit_exponential: m and values differ in length");
  }
  if (std::set<int>(m.begin(), m.end()).size() < 3) {
    throw std::invalid_argument("fit_exponential: need at least 3 distinct m values");
  }
  const bool weighted = !stderr_values.empty() &&
                        std::all_of(stderr_values.begin(), stderr_values.end(), [](double s) { return s > 0.0; });
  if (weighted && stderr_values.size() != y.size()) {
    throw std::invalid_argument("fit_exponential: stderr length mismatch");
  }
  Problem pr;
  for (size_t i = 0; i < m.size(); ++i) {
    pr.m.push_back(m[i]);
    pr.y.push_back(y[i]);
    pr.w.push_back(weighted ? 1.0 / (stderr_values[i] * stderr_values[i]) : 1.0);
  }

  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double scale = std::max(1.0, std::max(std::abs(*lo), std::abs(*hi)));
  if (*hi - *lo <= 1e-12 * scale) {
    double sw = 0, sy = 0;
    for (size_t i = 0; i < pr.y.size(); ++i) {
      sw += pr.w[i];
      sy += pr.w[i] * pr.y[i];
    }
    Linear lin;
    lin.b = sy / sw;
    FitResult fit = finish(pr, 1.0, lin, weighted);
    fit.identifiable = false;
    return fit;
  }

  std::vector<double> grid;
  for (int k = 0; k <= kGridUniform; ++k) {
    grid.push_back(kMinP + (1.0 - kMinP) * k / kGridUniform);
  }
  for (int k = 1; k <= kGridLog; ++k) {
    grid.push_back(1.0 - std::pow(10.0, -7.0 * k / kGridLog));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  size_t best = 0;
  double best_cost = solve_linear(pr, grid[0]).cost;
  for (size_t k = 1; k < grid.size(); ++k) {
    const double c = solve_linear(pr, grid[k]).cost;
    if (c < best_cost) {
      best_cost = c;
      best = k;
    }
  }

  double a = grid[best > 0 ? best - 1 : 0];
  double b = grid[std::min(best + 1, grid.size() - 1)];
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = solve_linear(pr, c).cost;
  double fd = solve_linear(pr, d).cost;
  for (int it = 0; it < 200 && (b - a) > 1e-15; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = solve_linear(pr, c).cost;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = solve_linear(pr, d).cost;
    }
  }
  double p = 0.5 * (a + b);
  Linear lin = solve_linear(pr, p);
  if (best_cost < lin.cost) {
    p = grid[best];
    lin = solve_linear(pr, p);
  }
  FitResult fit = finish(pr, p, lin, weighted);
  fit.identifiable = std::abs(lin.a) > 1e-12 * scale && p < 1.0;
  return fit;
}

FitResult fit_exponential(const DecaySeries& series) {
  std::vector<int> m;
  std::vector<double> y;
  std::vector<double> se;
  const bool sampled = !series.points.empty() && series.points.front().n > 0;
  for (const auto& pt : series.points) {
    m.push_back(pt.m);
    if (sampled) {
      y.push_back(pt.mean);
      se.push_back(pt.stderr_mean);
    } else {
      y.push_back(pt.analytical.value_or(0.0));
    }
  }
  return fit_exponential(m, y, se);
}

double fit_model(const FitResult& fit, int m) { return fit.a * std::pow(fit.p, m) + fit.b; }

std::string to_string(Verdict v) {
  return v == Verdict::SignificantDeviation ? "significant-deviation" : "consistent-with-exponential";
}

Diagnostic nonexp_diagnostic(const DecaySeries& series, const FitResult& fit) {
  if (fit.residuals.size() != series.points.size()) {
    throw std::invalid_argument("nonexp_diagnostic: fit does not belong to this series");
  }
  Diagnostic diag;
  for (size_t i = 0; i < series.points.size(); ++i) {
    const double se = std::max(series.points[i].stderr_mean, 1e-15);
    const double z = fit.residuals[i] / se;
    diag.z.push_back(z);
    diag.max_abs_z = std::max(diag.max_abs_z, std::abs(z));
    if (std::abs(z) > kSignificanceZ) {
      ++diag.n_significant;
    }
  }
  diag.verdict = diag.n_significant >= 2 ? Verdict::SignificantDeviation : Verdict::ConsistentWithExponential;
  return diag;
}

}  // namespace rbmk
