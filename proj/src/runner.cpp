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

#include "rbmk/runner.hpp"

#include <chrono>
#include <sstream>

#include "rbmk/errors.hpp"

#ifndef RBMK_VERSION
#define RBMK_VERSION "0.0.0"
#endif

namespace rbmk {

namespace {

using Json = nlohmann::ordered_json;

const char* const kBlue = "#1f77b4";
const char* const kRed = "#d62728";
const char* const kBlack = "#000000";
const char* const kGreen = "#2ca02c";
const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream out;
  fn(out);
  return out.str();
}

std::vector<double> as_double(const std::vector<int>& v) { return {v.begin(), v.end()}; }

PlotBand stderr_band(const DecaySeries& s) {
  PlotBand band;
  for (const auto& p : s.points) {
    band.x.push_back(p.m);
    band.lower.push_back(p.mean - p.stderr_mean);
    band.upper.push_back(p.mean + p.stderr_mean);
  }
  return band;
}

Json fit_block(const DecaySeries& series) {
  const FitResult fit = fit_exponential(series);
  Json j = fit_to_json(fit);
  if (!series.points.empty() && series.points.front().n > 0) {
    j["diagnostic"] = diagnostic_to_json(nonexp_diagnostic(series, fit));
  }
  return j;
}

void add_sampled_plot(ArtifactBundle& bundle, const std::string& title, const DecaySeries& series,
                      const std::string& analytical_name, const std::string& first_order_name) {
  Plot plot;
  plot.title = title;
  const auto xs = as_double(series.m_values());
  plot.band = stderr_band(series);
  plot.curves.push_back({"sampled mean", kRed, xs, series.means(), true});
  std::vector<double> an, fo;
  for (const auto& p : series.points) {
    if (p.analytical) an.push_back(*p.analytical);
    if (p.first_order) fo.push_back(*p.first_order);
  }
  if (an.size() == xs.size()) plot.curves.push_back({analytical_name, kBlue, xs, an, false});
  if (fo.size() == xs.size() && !first_order_name.empty()) plot.curves.push_back({first_order_name, kBlack, xs, fo, false});
  bundle.add("plot.svg", render([&](std::ostream& o) { write_plot_svg(o, plot); }));
}

}  // namespace

std::string version() { return RBMK_VERSION; }

NoiseModel build_noise_model(const RBExperimentConfig& cfg) {
  if (cfg.model.paper) {
    const auto gen = paper_two_qubit_model(cfg.model.params);
    const QuantumChannel lam = propagator(gen, cfg.tau_rb, cfg.model.params.taylor_order);
    return NoiseModel{lam, lam, lam, cfg.rho_env, cfg.rho_sys, cfg.measurement};
  }
  const QuantumChannel bulk = cfg.model.channel.build();
  const QuantumChannel id = QuantumChannel::identity(bulk.dims());
  const QuantumChannel meas = cfg.model.spam ? cfg.model.spam->build() : id;
  const ComplexMatrix rho_env = ComplexMatrix::Identity(1, 1);
  if (cfg.kind == ExperimentKind::Markov) {
    return NoiseModel{id, bulk, meas, rho_env, cfg.rho_sys, cfg.measurement};
  }
  return NoiseModel{meas, bulk, meas, rho_env, cfg.rho_sys, cfg.measurement};
}

ArtifactBundle run_to_bundle(const RBExperimentConfig& cfg, int threads) {
  const auto start = std::chrono::steady_clock::now();
  ArtifactBundle bundle;
  const NoiseModel base = build_noise_model(cfg);
  base.validate();
  const MonteCarloOptions mc{cfg.m_list, cfg.n_samples, cfg.seed, threads};
  Json fit_json;
  Json extra;

  switch (cfg.kind) {
    case ExperimentKind::Markov:
    case ExperimentKind::NonMarkov: {
      DecaySeries series = monte_carlo_asf(base, mc);
      std::vector<double> analytical;
      if (cfg.kind == ExperimentKind::Markov) {
        const auto asf = markovian_asf(base.bulk, base.prep, base.meas, base.rho_sys, base.measurement, cfg.m_list);
        analytical = asf.series;
        extra["markovian"] = {{"A", asf.a}, {"B", asf.b}, {"p", asf.p}};
      } else {
        analytical = analytical_asf_clifford(base, cfg.m_list);
      }
      for (size_t i = 0; i < series.points.size(); ++i) series.points[i].analytical = analytical[i];
      fit_json = fit_block(series);
      bundle.add("series.csv", render([&](std::ostream& o) { write_series_csv(o, series); }));
      add_sampled_plot(bundle, cfg.kind == ExperimentKind::Markov ? "Markovian RB" : "Non-Markovian RB", series,
                       "analytical", "");
      break;
    }
    case ExperimentKind::DD: {
      const auto gen = paper_two_qubit_model(cfg.model.params);
      DDPlan plan = xy4_plan(cfg.tau_dd, cfg.dd_form);
      const auto factory = lindblad_factory(gen, cfg.model.params.taylor_order);
      const NoiseModel model = interleave_dd(base, plan, factory, cfg.dd_spam);
      DecaySeries series = monte_carlo_asf(model, mc);
      const auto analytical = analytical_asf_clifford(model, cfg.m_list);
      const auto first = first_order_prediction(gen, plan, cfg.rho_sys, cfg.measurement, cfg.m_list, cfg.dd_spam);
      for (size_t i = 0; i < series.points.size(); ++i) {
        series.points[i].analytical = analytical[i];
        series.points[i].first_order = first.series[i];
      }
      fit_json = fit_block(series);
      extra["first_order"] = {{"p", first.p},       {"p_formula", first.p_formula},
                              {"p_rates", first.p_rates}, {"forms_diverge", first.forms_diverge},
                              {"A", first.a},       {"B", first.b}};
      bundle.add("series.csv", render([&](std::ostream& o) { write_series_csv(o, series); }));
      add_sampled_plot(bundle, "RB with interleaved XY4", series, "analytical (full)", "first order");
      break;
    }
    case ExperimentKind::RcMean: {
      TwirlComparisonSpec spec{base, cfg.combos, cfg.m_list, std::max(cfg.n_samples, 2), cfg.seed, threads};
      const auto combos = rc_mean_comparison(spec);
      DecaySeries series;
      for (size_t i = 0; i < cfg.m_list.size(); ++i) {
        DecayPoint p;
        p.m = cfg.m_list[i];
        p.analytical = combos.front().values[i];
        series.points.push_back(p);
      }
      if (cfg.m_list.size() >= 3) fit_json = fit_block(series);
      bundle.add("series.csv", render([&](std::ostream& o) { write_series_csv(o, series); }));
      bundle.add("means.csv", render([&](std::ostream& o) { write_means_csv(o, cfg.m_list, combos); }));
      Plot plot;
      plot.title = "Bare vs S-Pauli-twirled noise (bulk/SPAM)";
      for (size_t c = 0; c < combos.size(); ++c) {
        plot.curves.push_back({to_string(combos[c].combo), kPalette[c % 6], as_double(cfg.m_list), combos[c].values, false});
      }
      bundle.add("plot.svg", render([&](std::ostream& o) { write_plot_svg(o, plot); }));
      break;
    }
    case ExperimentKind::RcVariance: {
      TwirlComparisonSpec spec{base, cfg.combos, cfg.m_list, cfg.n_samples, cfg.seed, threads};
      const auto rows = rc_variance_comparison(spec);
      DecaySeries series = monte_carlo_asf(base, mc);
      const auto analytical = analytical_asf_clifford(base, cfg.m_list);
      for (size_t i = 0; i < series.points.size(); ++i) series.points[i].analytical = analytical[i];
      fit_json = fit_block(series);
      int violations = 0;
      for (const auto& r : rows) violations += r.var_twirled > r.var_bare ? 1 : 0;
      extra["sampled_variance_violations"] = violations;
      bundle.add("series.csv", render([&](std::ostream& o) { write_series_csv(o, series); }));
      bundle.add("variances.csv", render([&](std::ostream& o) { write_variances_csv(o, rows); }));
      Plot plot;
      plot.title = "Sequence-fidelity variance, bare vs twirled";
      plot.y_label = "variance";
      std::vector<double> vb, vt;
      for (const auto& r : rows) {
        vb.push_back(r.var_bare);
        vt.push_back(r.var_twirled);
      }
      plot.curves.push_back({"bare", kBlue, as_double(cfg.m_list), vb, true});
      plot.curves.push_back({"twirled", kGreen, as_double(cfg.m_list), vt, true});
      bundle.add("plot.svg", render([&](std::ostream& o) { write_plot_svg(o, plot); }));
      break;
    }
    case ExperimentKind::DeltaScan: {
      const auto gen = paper_two_qubit_model(cfg.model.params);
      std::vector<DDPlan> plans;
      for (const double t : cfg.tau_dd_grid) plans.push_back(xy4_plan(t, cfg.dd_form));
      const auto scan = delta_scan(gen, plans, base, cfg.m_list, cfg.dd_spam, cfg.model.params.taylor_order, threads);
      const auto factory = lindblad_factory(gen, cfg.model.params.taylor_order);
      const auto analytical = analytical_asf_clifford(interleave_dd(base, plans.front(), factory, cfg.dd_spam), cfg.m_list);
      const auto first =
          first_order_prediction(gen, plans.front(), cfg.rho_sys, cfg.measurement, cfg.m_list, cfg.dd_spam);
      DecaySeries series;
      for (size_t i = 0; i < cfg.m_list.size(); ++i) {
        DecayPoint p;
        p.m = cfg.m_list[i];
        p.analytical = analytical[i];
        p.first_order = first.series[i];
        series.points.push_back(p);
      }
      if (cfg.m_list.size() >= 3) fit_json = fit_block(series);
      Json slopes = Json::array();
      for (size_t i = 0; i < scan.taus.size(); ++i) slopes.push_back({{"tau_dd", scan.taus[i]}, {"slope", scan.slopes[i]}});
      extra["slopes"] = slopes;
      bundle.add("series.csv", render([&](std::ostream& o) { write_series_csv(o, series); }));
      bundle.add("delta_scan.csv", render([&](std::ostream& o) { write_delta_scan_csv(o, scan); }));
      Plot plot;
      plot.title = "Deviation from first-order exponential";
      plot.y_label = "delta F_m";
      for (size_t i = 0; i < scan.taus.size(); ++i) {
        std::vector<double> ys;
        for (const auto& r : scan.rows) {
          if (r.tau_dd == scan.taus[i]) ys.push_back(r.delta_f);
        }
        char name[48];
        std::snprintf(name, sizeof name, "tau_dd = %.4g", scan.taus[i]);
        plot.curves.push_back({name, kPalette[i % 6], as_double(cfg.m_list), ys, true});
      }
      bundle.add("plot.svg", render([&](std::ostream& o) { write_plot_svg(o, plot); }));
      break;
    }
  }

  Json fit_doc;
  fit_doc["kind"] = to_string(cfg.kind);
  fit_doc["fit"] = fit_json;
  for (auto& item : extra.items()) fit_doc[item.key()] = item.value();
  bundle.add("fit.json", fit_doc.dump(2) + "\n");

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Json summary;
  summary["config_echo"] = cfg.echo;
  summary["seed"] = cfg.seed;
  summary["version"] = version();
  summary["kind"] = to_string(cfg.kind);
  Json files = Json::array();
  for (const auto& [name, contents] : bundle.files()) files.push_back(name);
  files.push_back("summary.json");
  summary["files"] = files;
  summary["wall_time_s"] = wall;
  bundle.add("summary.json", summary.dump(2) + "\n");
  return bundle;
}

std::filesystem::path run_experiment(const RBExperimentConfig& cfg, const std::filesystem::path& out_dir,
                                     int threads) {
  std::filesystem::path target = out_dir;
  if (target.empty()) target = cfg.output_dir;
  if (target.empty()) {
    throw ConfigError("no output directory: pass --out or set 'output_dir'");
  }
  const ArtifactBundle bundle = run_to_bundle(cfg, threads);
  bundle.commit(target);
  return target;
}

}  // namespace rbmk
