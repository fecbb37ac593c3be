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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rbmk/channels.hpp"
#include "rbmk/config.hpp"
#include "rbmk/decoupler.hpp"
#include "rbmk/errors.hpp"
#include "rbmk/fit.hpp"
#include "rbmk/gates.hpp"
#include "rbmk/lindblad.hpp"
#include "rbmk/rb_engine.hpp"
#include "rbmk/runner.hpp"
#include "rbmk/twirl_experiments.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace rbmk;

namespace {

py::dict series_to_dict(const DecaySeries& s) {
  std::vector<int> m;
  std::vector<double> mean, var, se;
  std::vector<int> n;
  for (const auto& p : s.points) {
    m.push_back(p.m);
    mean.push_back(p.mean);
    var.push_back(p.variance);
    se.push_back(p.stderr_mean);
    n.push_back(p.n);
  }
  return py::dict("m"_a = m, "mean"_a = mean, "variance"_a = var, "stderr"_a = se, "n"_a = n);
}

NoiseModel make_model(const QuantumChannel& prep, const QuantumChannel& bulk, const QuantumChannel& meas,
                      const ComplexMatrix& rho_env, const ComplexMatrix& rho_sys, const ComplexMatrix& measurement) {
  NoiseModel nm{prep, bulk, meas, rho_env, rho_sys, measurement};
  nm.validate();
  return nm;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Randomized benchmarking under non-Markovian noise";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<StructureError>(m, "StructureError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<RepresentationError>(m, "RepresentationError", PyExc_RuntimeError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("version", &version);

  py::class_<CompositeDims>(m, "CompositeDims")
      .def(py::init<int, int>(), "env"_a, "sys"_a)
      .def_readonly("env", &CompositeDims::env)
      .def_readonly("sys", &CompositeDims::sys)
      .def("total", &CompositeDims::total)
      .def("__repr__", [](const CompositeDims& d) {
        return "CompositeDims(env=" + std::to_string(d.env) + ", sys=" + std::to_string(d.sys) + ")";
      });

  py::class_<QuantumChannel>(m, "QuantumChannel")
      .def_static("from_kraus", py::overload_cast<std::vector<ComplexMatrix>, CompositeDims>(&QuantumChannel::from_kraus),
                  "kraus"_a, "dims"_a)
      .def_static("from_superop", py::overload_cast<ComplexMatrix, CompositeDims>(&QuantumChannel::from_superop),
                  "superop"_a, "dims"_a)
      .def_static("from_choi", &QuantumChannel::from_choi, "choi"_a, "dims"_a)
      .def_static("from_ptm", &QuantumChannel::from_ptm, "ptm"_a, "dims"_a)
      .def_static("identity", &QuantumChannel::identity, "dims"_a)
      .def_static("unitary", &QuantumChannel::unitary, "u"_a, "dims"_a)
      .def_property_readonly("dims", &QuantumChannel::dims)
      .def_property_readonly("superop", &QuantumChannel::superop)
      .def_property_readonly("choi", &QuantumChannel::choi)
      .def_property_readonly("kraus", &QuantumChannel::kraus)
      .def_property_readonly("ptm", &QuantumChannel::ptm)
      .def("apply", &QuantumChannel::apply, "rho"_a);

  m.def("compose", &compose, "after"_a, "before"_a);
  m.def("tensor_product", &tensor_product, "env_part"_a, "sys_part"_a);
  m.def("plain_dims", &plain_dims, "d"_a);
  m.def("avg_gate_fidelity", &avg_gate_fidelity, "channel"_a);
  m.def("quality_factor", &quality_factor, "channel"_a);
  m.def("unitarity", &unitarity, "channel"_a);
  m.def("full_pauli_twirl", &full_pauli_twirl, "channel"_a);
  m.def("s_pauli_twirl", py::overload_cast<const QuantumChannel&>(&s_pauli_twirl), "channel"_a);
  m.def("g_twisted_twirl", &g_twisted_twirl, "noisy_gate"_a, "ideal_gate"_a);
  m.def("reduce_to_system", &reduce_to_system, "channel"_a, "rho_env"_a);
  m.def(
      "pauli_error_rates",
      [](const QuantumChannel& ch, bool walsh) {
        auto r = pauli_error_rates(ch, walsh ? PauliRateMode::FromPtmWalsh : PauliRateMode::FromChi);
        py::dict out;
        for (size_t i = 0; i < r.labels.size(); ++i) out[py::str(r.labels[i])] = r.rates[i];
        return out;
      },
      "channel"_a, "walsh"_a = false);
  m.def(
      "validate_channel",
      [](const QuantumChannel& ch, double tol) {
        auto r = validate_channel(ch, tol);
        return py::dict("cp"_a = r.cp, "tp"_a = r.tp, "trace_non_increasing"_a = r.trace_non_increasing,
                        "min_choi_eigenvalue"_a = r.min_choi_eigenvalue, "tp_defect"_a = r.tp_defect);
      },
      "channel"_a, "tol"_a = kDefaultTolerance);
  m.def("depolarizing_channel", &depolarizing_channel, "lam"_a, "d"_a = 2);
  m.def("amplitude_damping_channel", &amplitude_damping_channel, "gamma"_a);
  m.def("dephasing_channel", &dephasing_channel, "prob"_a);

  py::class_<PaperModelParams>(m, "PaperModelParams")
      .def(py::init<>())
      .def_readwrite("j", &PaperModelParams::j)
      .def_readwrite("hx", &PaperModelParams::hx)
      .def_readwrite("hy", &PaperModelParams::hy)
      .def_readwrite("gamma0", &PaperModelParams::gamma0)
      .def_readwrite("gamma1", &PaperModelParams::gamma1)
      .def_readwrite("taylor_order", &PaperModelParams::taylor_order);
  m.def(
      "paper_propagator",
      [](double t, const PaperModelParams& params) {
        return propagator(paper_two_qubit_model(params), t, params.taylor_order);
      },
      "t"_a, "params"_a = PaperModelParams{});

  m.def("clifford_group",
        [] { return clifford_group_1q().elements(); });
  m.def(
      "sample_rb_sequence",
      [](int len, std::uint64_t seed) {
        auto s = sample_rb_sequence(len, seed);
        return py::make_tuple(s.gates, s.undo);
      },
      "m"_a, "seed"_a);

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init(&make_model), "prep"_a, "bulk"_a, "meas"_a, "rho_env"_a, "rho_sys"_a, "measurement"_a)
      .def_readonly("bulk", &NoiseModel::bulk);

  m.def("analytical_asf", &analytical_asf_clifford, "model"_a, "m_list"_a);
  m.def(
      "exact_asf",
      [](const NoiseModel& nm, int len) {
        auto s = exact_sequence_statistics(nm.schedule(len));
        return py::make_tuple(s.mean, s.variance);
      },
      "model"_a, "m"_a);
  m.def(
      "monte_carlo_asf",
      [](const NoiseModel& nm, std::vector<int> m_list, int n_samples, std::uint64_t seed, int threads) {
        return series_to_dict(monte_carlo_asf(nm, {std::move(m_list), n_samples, seed, threads}));
      },
      "model"_a, "m_list"_a, "n_samples"_a = 40, "seed"_a = 0, "threads"_a = 1);
  m.def(
      "apply_twirl_combo",
      [](const NoiseModel& nm, const std::string& combo) { return apply_twirl_combo(nm, parse_twirl_combo(combo)); },
      "model"_a, "combo"_a);

  m.def(
      "first_order_prediction",
      [](double tau_dd, const std::vector<int>& m_list, const PaperModelParams& params) {
        const auto gen = paper_two_qubit_model(params);
        const auto r = first_order_prediction(gen, xy4_plan(tau_dd), basis_projector(2, 0), basis_projector(2, 0),
                                              m_list);
        return py::dict("p"_a = r.p, "p_formula"_a = r.p_formula, "A"_a = r.a, "B"_a = r.b, "series"_a = r.series);
      },
      "tau_dd"_a, "m_list"_a, "params"_a = PaperModelParams{});
  m.def(
      "xy4_interleaved",
      [](const NoiseModel& base, double tau_dd, const PaperModelParams& params) {
        return interleave_dd(base, xy4_plan(tau_dd), lindblad_factory(paper_two_qubit_model(params), params.taylor_order));
      },
      "base"_a, "tau_dd"_a, "params"_a = PaperModelParams{});

  m.def(
      "fit_exponential",
      [](const std::vector<int>& ms, const std::vector<double>& y, const std::vector<double>& se) {
        auto f = fit_exponential(ms, y, se);
        return py::dict("A"_a = f.a, "B"_a = f.b, "p"_a = f.p, "residual_norm"_a = f.residual_norm,
                        "identifiable"_a = f.identifiable);
      },
      "m"_a, "y"_a, "stderr"_a = std::vector<double>{});

  m.def(
      "run_config",
      [](const std::string& path, const std::string& out_dir, int threads) {
        const auto cfg = load_config(path);
        return run_experiment(cfg, out_dir, threads).string();
      },
      "config_path"_a, "out_dir"_a = "", "threads"_a = 1);
}
