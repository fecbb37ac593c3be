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

// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.
//
//   rbmk_acceptance <path to rbmk binary> <path to configs/>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rbmk/channels.hpp"
#include "rbmk/decoupler.hpp"
#include "rbmk/gates.hpp"
#include "rbmk/lindblad.hpp"
#include "rbmk/random.hpp"
#include "rbmk/rb_engine.hpp"
#include "rbmk/twirl_experiments.hpp"

using namespace rbmk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

ComplexMatrix ket0() { return basis_projector(2, 0); }

NoiseModel paper_model() {
  const auto lam = propagator(paper_two_qubit_model({}), 0.03);
  return NoiseModel{lam, lam, lam, ket0(), ket0(), ket0()};
}

NoiseModel random_model(std::mt19937_64& rng) {
  const CompositeDims dims{2, 2};
  return NoiseModel{random_cptp(dims, 3, rng), random_cptp(dims, 3, rng), random_cptp(dims, 3, rng),
                    random_density_matrix(2, rng), random_density_matrix(2, rng), random_density_matrix(2, rng)};
}

NoiseSchedule random_schedule(std::mt19937_64& rng, int m) {
  NoiseSchedule s;
  for (int i = 0; i < m + 2; ++i) s.channels.push_back(random_cptp({2, 2}, 2, rng));
  s.rho_env = random_density_matrix(2, rng);
  s.rho_sys = random_density_matrix(2, rng);
  s.measurement = random_density_matrix(2, rng);
  return s;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i <= hi; ++i) v.push_back(i);
  return v;
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1001);
  double worst = 0;
  auto check = [&](const NoiseModel& nm) {
    const auto an = analytical_asf_clifford(nm, {1, 2, 3});
    for (int m = 1; m <= 3; ++m) {
      worst = std::max(worst, std::abs(an[static_cast<size_t>(m - 1)] - exact_asf_oracle(nm.schedule(m))));
    }
  };
  check(paper_model());
  for (int k = 0; k < 20; ++k) check(random_model(rng));
  return {worst < 1e-10, "max |analytical - oracle| = " + fmt("%.3g", worst)};
}

Outcome markovian_reduction() {
  std::mt19937_64 rng(1002);
  const auto ms = range(1, 50);
  double worst = 0, worst_p = 0;
  for (int k = 0; k < 5; ++k) {
    auto env = [&] { return random_cptp(plain_dims(2), 2, rng); };
    auto prep = random_cptp(plain_dims(2), 2, rng);
    auto bulk = random_cptp(plain_dims(2), 2, rng);
    auto meas = random_cptp(plain_dims(2), 2, rng);
    NoiseModel nm{tensor_product(env(), prep), tensor_product(env(), bulk), tensor_product(env(), meas),
                  random_density_matrix(2, rng), random_density_matrix(2, rng), random_density_matrix(2, rng)};
    const auto an = analytical_asf_clifford(nm, ms);
    const auto mk = markovian_asf(bulk, prep, meas, nm.rho_sys, nm.measurement, ms);
    worst_p = std::max(worst_p, std::abs(mk.p - quality_factor(bulk)));
    for (size_t i = 0; i < ms.size(); ++i) {
      worst = std::max(worst, std::abs(an[i] - (mk.a * std::pow(mk.p, ms[i]) + mk.b)));
    }
  }
  return {worst < 1e-10 && worst_p < 1e-12,
          "max |F_m - (A p^m + B)| = " + fmt("%.3g", worst) + ", |p - quality_factor| = " + fmt("%.3g", worst_p)};
}

Outcome paper_monte_carlo() {
  const auto nm = paper_model();
  const auto ms = range(1, 50);
  const auto series = monte_carlo_asf(nm, {ms, 40, 20240611, 1});
  const auto an = analytical_asf_clifford(nm, ms);
  double worst = 0;
  bool monotone = true;
  for (size_t i = 0; i < ms.size(); ++i) {
    worst = std::max(worst, std::abs(series.points[i].mean - an[i]) / series.points[i].stderr_mean);
    if (i > 0 && an[i] >= an[i - 1]) monotone = false;
  }
  return {worst <= 4.0 && monotone,
          "max |mean - analytical| / stderr = " + fmt("%.3f", worst) + (monotone ? ", analytical curve monotone" : ", analytical curve NOT monotone")};
}

Outcome first_order_convergence() {
  const auto gen = paper_two_qubit_model({});
  const auto ms = range(1, 50);
  const std::vector<DDPlan> plans{xy4_plan(0.03), xy4_plan(0.015), xy4_plan(0.0075)};
  const auto scan = delta_scan(gen, plans, paper_model(), ms);
  bool pointwise = true;
  for (size_t k = 0; k < ms.size(); ++k) {
    for (size_t t = 1; t < plans.size(); ++t) {
      if (!(scan.rows[t * ms.size() + k].delta_f < scan.rows[(t - 1) * ms.size() + k].delta_f)) pointwise = false;
    }
  }
  const bool slopes = scan.slopes[0] > scan.slopes[1] && scan.slopes[1] > scan.slopes[2];
  const auto pred = first_order_prediction(gen, plans[0], ket0(), ket0(), {1});
  const bool p_ok = std::abs(pred.p_formula - 0.99928) < 1e-12;

  // Which dissipator normalization reproduces the closed-form p through the
  // assembled first-order map.
  PaperModelParams ortho;
  ortho.normalization = DissipatorNormalization::Orthonormal;
  const auto pred_ortho = first_order_prediction(paper_two_qubit_model(ortho), plans[0], ket0(), ket0(), {1});
  const std::string norm_note = std::string("; normalization: bare gives p_formula ") + fmt("%.6f", pred.p_formula) +
                                " vs map " + fmt("%.6f", pred.p) + ", orthonormal gives p_formula " +
                                fmt("%.6f", pred_ortho.p_formula) + " vs map " + fmt("%.6f", pred_ortho.p) +
                                (pred_ortho.forms_diverge ? "" : " (orthonormal matches)");
  return {pointwise && slopes && p_ok,
          "slopes " + fmt("%.3g", scan.slopes[0]) + " > " + fmt("%.3g", scan.slopes[1]) + " > " +
              fmt("%.3g", scan.slopes[2]) + (pointwise ? ", delta decreasing in tau at every m" : ", delta NOT decreasing at some m") +
              ", p_tau(0.03) = " + fmt("%.8f", pred.p_formula) + norm_note};
}

Outcome residual_order() {
  const auto gen = paper_two_qubit_model({});
  const auto factory = lindblad_factory(gen);
  std::vector<double> r;
  for (double tau : {0.03, 0.015, 0.0075}) {
    const auto plan = xy4_plan(tau);
    r.push_back(frobenius_distance(dd_superop(plan, factory).superop(), first_order_dd_map(gen, plan)));
  }
  const double q1 = r[0] / r[1], q2 = r[1] / r[2];
  const bool ok = q1 >= 3.5 && q1 <= 4.5 && q2 >= 3.5 && q2 <= 4.5;
  return {ok, "residual ratios " + fmt("%.3f", q1) + ", " + fmt("%.3f", q2)};
}

Outcome mean_invariance() {
  std::mt19937_64 rng(1006);
  const auto ms = range(1, 50);
  double worst = 0;
  auto check = [&](const NoiseModel& nm) {
    const auto bare = analytical_asf_clifford(nm, ms);
    const auto tw = analytical_asf_clifford(apply_twirl_combo(nm, TwirlCombo::TwirledBulkBareSpam), ms);
    for (size_t i = 0; i < ms.size(); ++i) worst = std::max(worst, std::abs(bare[i] - tw[i]));
  };
  check(paper_model());
  for (int k = 0; k < 10; ++k) check(random_model(rng));
  return {worst < 1e-10, "max |twirled-bulk - bare| = " + fmt("%.3g", worst)};
}

Outcome exact_variance() {
  std::mt19937_64 rng(1007);
  int violations = 0;
  double worst_gap = -1e300;
  auto check = [&](const NoiseSchedule& bare) {
    NoiseSchedule tw = bare;
    for (auto& ch : tw.channels) ch = s_pauli_twirl(ch);
    const double vb = exact_sequence_statistics(bare).variance;
    const double vt = exact_sequence_statistics(tw).variance;
    worst_gap = std::max(worst_gap, vt - vb);
    if (vt > vb + 1e-12) ++violations;
  };
  const auto paper = paper_model();
  for (int m : {1, 2}) check(paper.schedule(m));
  for (int k = 0; k < 20; ++k) {
    for (int m : {1, 2}) check(random_schedule(rng, m));
  }
  return {violations == 0,
          std::to_string(violations) + " violations over 42 enumerations, max(var_tw - var_bare) = " + fmt("%.3g", worst_gap)};
}

Outcome sampled_variance() {
  TwirlComparisonSpec spec{paper_model(), {TwirlCombo::BareBare, TwirlCombo::TwirledTwirled}, range(1, 50), 40,
                           20240611, 1};
  const auto rows = rc_variance_comparison(spec, 0);
  int violations = 0;
  for (const auto& r : rows) {
    if (r.var_twirled > r.var_bare) ++violations;
  }
  return {violations == 0, std::to_string(violations) + " of 50 lengths with var(twirled) > var(bare)"};
}

Outcome twirl_structure() {
  const auto lam = propagator(paper_two_qubit_model({}), 0.03);
  const auto tw = s_pauli_twirl(lam);
  const ComplexMatrix r = tw.ptm();
  double worst = 0;
  for (int i = 0; i < r.rows(); ++i) {
    for (int j = 0; j < r.cols(); ++j) {
      if (i % 4 != j % 4) worst = std::max(worst, std::abs(r(i, j)));
    }
  }
  const double df = std::abs(avg_gate_fidelity(tw) - avg_gate_fidelity(lam));
  return {worst < 1e-12 && df < 1e-12,
          "max mismatched PTM entry " + fmt("%.3g", worst) + ", fidelity change " + fmt("%.3g", df)};
}

Outcome decoupling() {
  const auto rep = verify_universal_decoupling(pauli_decoupling_group(), {2, 2}, 100, 1e-12, 1010);
  return {rep.passed && rep.max_deviation < 1e-12, "max deviation " + fmt("%.3g", rep.max_deviation)};
}

Outcome twisted_twirl() {
  std::mt19937_64 rng(1011);
  const CompositeDims dims{2, 2};
  double worst = 0;
  for (int k = 0; k < 5; ++k) {
    const auto lam = random_cptp(dims, 3, rng);
    const auto lam_tw = s_pauli_twirl(lam);
    for (const auto& g : clifford_group_1q().elements()) {
      const auto gate = embed_on_se(g, dims);
      worst = std::max(worst, frobenius_distance(g_twisted_twirl(compose(lam, gate), g).superop(),
                                                 compose(lam_tw, gate).superop()));
    }
  }
  return {worst < 1e-10, "max deviation over 120 cases " + fmt("%.3g", worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& cli, const std::string& configs) {
  const fs::path dir = fs::temp_directory_path() / "rbmk-acceptance-determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cfg = (fs::path(configs) / "nonmarkov_paper.json").string();
  std::vector<std::string> outputs;
  for (const char* run : {"t1a", "t1b", "t8a", "t8b"}) {
    const std::string threads = run[1] == '1' ? "1" : "8";
    const std::string cmd = cli + " run --config " + cfg + " --threads " + threads + " --out " + (dir / run).string() +
                            " > /dev/null";
    const int status = std::system(cmd.c_str());
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      return {false, std::string("rbmk run failed for ") + run};
    }
    outputs.push_back(slurp(dir / run / "series.csv"));
  }
  fs::remove_all(dir);
  bool same = !outputs[0].empty();
  for (const auto& o : outputs) same = same && o == outputs[0];
  return {same, same ? "series.csv identical across 4 runs (threads 1, 1, 8, 8), " + std::to_string(outputs[0].size()) + " bytes"
                     : "series.csv differs between runs"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <rbmk binary> <configs dir>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const std::string configs = argv[2];

  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Outcome()> fn;
  };
  const std::vector<Criterion> criteria{
      {"oracle equivalence", 120, oracle_equivalence},
      {"markovian reduction", 0, markovian_reduction},
      {"paper-model monte carlo", 300, paper_monte_carlo},
      {"first-order convergence", 0, first_order_convergence},
      {"second-order residual", 0, residual_order},
      {"twirled-bulk mean invariance", 0, mean_invariance},
      {"exact variance inequality", 180, exact_variance},
      {"sampled variance inequality", 0, sampled_variance},
      {"twirl structure", 0, twirl_structure},
      {"universal decoupling", 0, decoupling},
      {"g-twisted twirl identity", 0, twisted_twirl},
      {"determinism across threads", 0, [&] { return determinism(cli, configs); }},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += "; over time budget";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu (%s): %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
