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

#include "rbmk/decoupler.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "rbmk/errors.hpp"
#include "rbmk/gates.hpp"
#include "test_util.hpp"

using namespace rbmk;
using namespace rbmk::testing;

namespace {

LindbladGenerator coherent_coupling() {
  LindbladGenerator gen;
  gen.dims = {2, 2};
  // S-local and SE terms only; E-local terms survive decoupling at first order.
  gen.hamiltonian = 0.9 * kron(pauli(0), pauli(3)) + 0.6 * kron(pauli(0), pauli(1)) + 1.1 * kron(pauli(3), pauli(2)) +
                    0.4 * kron(pauli(1), pauli(1));
  return gen;
}

double distance_to_identity(const QuantumChannel& ch) {
  return frobenius_distance(ch.superop(), ComplexMatrix::Identity(ch.superop().rows(), ch.superop().cols()));
}

NoiseModel clean_model(const CompositeDims& dims) {
  auto id = QuantumChannel::identity(dims);
  return NoiseModel{id, id, id, ket0(), ket0(), ket0()};
}

}  // namespace

TEST(decoupler, plan_validation) {
  auto plan = xy4_plan(0.01);
  ASSERT_EQ(plan.eta(), 4);
  ASSERT_EQ(plan.resolved_order(), (std::vector<int>{0, 1, 2, 3}));
  plan.pulse_order = {0, 1, 1, 3};
  ASSERT_THROW(plan.validate(), std::invalid_argument);
  ASSERT_THROW(xy4_plan(0.0).validate(), std::invalid_argument);
  DDPlan no_identity{DecouplingGroup{{pauli(1), pauli(2)}}, 0.01, DDForm::EdgeSplit, {}};
  ASSERT_THROW(no_identity.validate(), StructureError);
}

TEST(decoupler, noiseless_factory) {
  PropagatorFactory ident = [](double) { return QuantumChannel::identity({2, 2}); };
  for (auto form : {DDForm::Plain, DDForm::EdgeSplit}) {
    ASSERT_LT(distance_to_identity(dd_superop(xy4_plan(0.03, form), ident)), 1e-15);
    auto model = interleave_dd(clean_model({2, 2}), xy4_plan(0.03, form), ident);
    for (double f : analytical_asf_clifford(model, {1, 5, 30})) ASSERT_NEAR(f, 1.0, 1e-12);
  }
}

TEST(decoupler, plain_form_is_product_of_conjugated_evolutions) {
  auto gen = paper_two_qubit_model({});
  auto plan = xy4_plan(0.02);
  const QuantumChannel free = propagator(gen, 0.02);
  ComplexMatrix want = ComplexMatrix::Identity(16, 16);
  for (int k = 0; k < 4; ++k) {
    const ComplexMatrix v = conjugation_superop(kron(pauli(0), pauli(k)));
    want = v * free.superop() * v.adjoint() * want;
  }
  ASSERT_TRUE(approx_equal(dd_superop(plan, lindblad_factory(gen)).superop(), want, 1e-13));
}

TEST(decoupler, local_coherent_noise_is_cancelled) {
  LindbladGenerator gen;
  gen.dims = {2, 2};
  gen.hamiltonian = kron(pauli(0), pauli(3));
  // XY4 conjugates of exp(-i t Z) commute and multiply to the identity.
  ASSERT_LT(distance_to_identity(dd_superop(xy4_plan(0.03), lindblad_factory(gen))), 1e-12);
}

TEST(decoupler, coupling_is_cancelled_to_first_order) {
  auto factory = lindblad_factory(coherent_coupling(), 16);
  const double d1 = distance_to_identity(dd_superop(xy4_plan(0.02), factory));
  const double d2 = distance_to_identity(dd_superop(xy4_plan(0.01), factory));
  ASSERT_GT(d1, 1e-6);
  ASSERT_NEAR(d1 / d2, 4.0, 0.2);
}

TEST(decoupler, pulse_order_and_form_agree_at_first_order) {
  auto factory = lindblad_factory(paper_two_qubit_model({}), 16);
  auto diff = [&](double tau, auto tweak) {
    DDPlan a = xy4_plan(tau);
    DDPlan b = a;
    tweak(b);
    return frobenius_distance(dd_superop(a, factory).superop(), dd_superop(b, factory).superop());
  };
  auto reorder = [](DDPlan& p) { p.pulse_order = {0, 2, 1, 3}; };
  auto split = [](DDPlan& p) { p.form = DDForm::EdgeSplit; };
  for (double tau : {0.02}) {
    const double r1 = diff(tau, reorder) / diff(tau / 2, reorder);
    const double r2 = diff(tau, split) / diff(tau / 2, split);
    ASSERT_NEAR(r1, 4.0, 0.3);
    ASSERT_NEAR(r2, 4.0, 0.3);
  }
}

TEST(decoupler, first_order_map_residual_is_quadratic) {
  auto gen = paper_two_qubit_model({});
  auto factory = lindblad_factory(gen);
  std::vector<double> residual;
  for (double tau : {0.03, 0.015, 0.0075}) {
    auto plan = xy4_plan(tau);
    residual.push_back(frobenius_distance(dd_superop(plan, factory).superop(), first_order_dd_map(gen, plan)));
  }
  for (size_t i = 1; i < residual.size(); ++i) {
    const double ratio = residual[i - 1] / residual[i];
    ASSERT_GE(ratio, 3.5);
    ASSERT_LE(ratio, 4.5);
  }
}

TEST(decoupler, dd_dissipator) {
  auto gen = paper_two_qubit_model({});
  auto plan = xy4_plan(0.03);
  const ComplexMatrix d = dd_dissipator(gen, plan);
  ASSERT_EQ(d.rows(), 4);
  // Pauli dissipators commute with Pauli conjugation, so the average is 4 D_S.
  const ComplexMatrix ds = 0.002 * dissipator_superop(pauli(1)) + 0.007 * dissipator_superop(pauli(3));
  ASSERT_TRUE(approx_equal(d, 4.0 * ds, 1e-14));
}

TEST(decoupler, first_order_prediction) {
  auto gen = paper_two_qubit_model({});
  auto pred = first_order_prediction(gen, xy4_plan(0.03), ket0(), ket0(), {1, 10, 50});
  ASSERT_NEAR(pred.p_formula, 0.99928, 1e-15);
  ASSERT_NEAR(pred.p_rates, 0.99856, 1e-15);
  ASSERT_NEAR(pred.p, pred.p_rates, 1e-14);
  ASSERT_TRUE(pred.forms_diverge);
  for (size_t i = 0; i < pred.series.size(); ++i) {
    const int m = std::vector<int>{1, 10, 50}[i];
    ASSERT_NEAR(pred.series[i], pred.a * std::pow(pred.p, m) + pred.b, 1e-15);
  }

  // Unit-norm operators make every closed form agree.
  PaperModelParams ortho;
  ortho.normalization = DissipatorNormalization::Orthonormal;
  auto op = first_order_prediction(paper_two_qubit_model(ortho), xy4_plan(0.03), ket0(), ket0(), {1});
  ASSERT_NEAR(op.p, op.p_formula, 1e-14);
  ASSERT_NEAR(op.p, pred.p, 1e-14);
  ASSERT_FALSE(op.forms_diverge);

  auto tiny = first_order_prediction(gen, xy4_plan(1e-12), ket0(), ket0(), {1, 20});
  ASSERT_NEAR(tiny.p, 1.0, 1e-12);
  for (double f : tiny.series) ASSERT_NEAR(f, 1.0, 1e-10);

  auto bare = first_order_prediction(gen, xy4_plan(0.03), ket0(), ket0(), {1}, DDSpam::Bare);
  ASSERT_NEAR(bare.a, 0.5, 1e-15);
  ASSERT_NEAR(bare.b, 0.5, 1e-15);

  LindbladGenerator se = gen;
  se.dissipators.push_back({kron(pauli(1), pauli(3)), 0.001, Locality::SE});
  ASSERT_THROW(first_order_prediction(se, xy4_plan(0.03), ket0(), ket0(), {1}), StructureError);
}

TEST(decoupler, dissipation_free_decay_is_second_order) {
  auto gen = coherent_coupling();
  auto factory = lindblad_factory(gen, 16);
  auto base = clean_model({2, 2});
  std::vector<double> dev;
  for (double tau : {0.02, 0.01}) {
    auto first = first_order_prediction(gen, xy4_plan(tau), ket0(), ket0(), {5});
    ASSERT_NEAR(first.p, 1.0, 1e-15);
    ASSERT_NEAR(first.series[0], 1.0, 1e-15);
    dev.push_back(1.0 - analytical_asf_clifford(interleave_dd(base, xy4_plan(tau), factory), {5})[0]);
  }
  ASSERT_GT(dev[0], 0.0);
  // 1 + O(tau^2) at least; for unitary joint dynamics the loss is quadratic in
  // the O(tau^2) superoperator error.
  ASSERT_GE(dev[0] / dev[1], 4.0);
}

TEST(decoupler, monte_carlo_follows_first_order_curve) {
  auto gen = paper_two_qubit_model({});
  auto model = interleave_dd(paper_noise_model(), xy4_plan(0.015), lindblad_factory(gen));
  const auto ms = range(1, 10);
  auto pred = first_order_prediction(gen, xy4_plan(0.015), ket0(), ket0(), ms);
  auto series = monte_carlo_asf(model, {ms, 40, 12345, 1});
  for (size_t i = 0; i < ms.size(); ++i) {
    ASSERT_LE(std::abs(series.points[i].mean - pred.series[i]), 3 * series.points[i].stderr_mean + 1e-12)
        << "m=" << ms[i];
  }
}

TEST(decoupler, delta_scan) {
  auto gen = paper_two_qubit_model({});
  auto base = paper_noise_model();
  const auto ms = range(1, 50);
  std::vector<DDPlan> plans{xy4_plan(0.03), xy4_plan(0.015), xy4_plan(0.0075)};
  auto scan = delta_scan(gen, plans, base, ms);
  ASSERT_EQ(scan.rows.size(), 150u);
  ASSERT_GT(scan.slopes[0], scan.slopes[1]);
  ASSERT_GT(scan.slopes[1], scan.slopes[2]);
  for (size_t k = 0; k < ms.size(); ++k) {
    ASSERT_GT(scan.rows[k].delta_f, scan.rows[50 + k].delta_f);
    ASSERT_GT(scan.rows[50 + k].delta_f, scan.rows[100 + k].delta_f);
  }
  auto threaded = delta_scan(gen, plans, base, ms, DDSpam::Dd, kDefaultTaylorOrder, 3);
  for (size_t i = 0; i < scan.rows.size(); ++i) ASSERT_EQ(scan.rows[i].delta_f, threaded.rows[i].delta_f);

  // Long pulse spacing: the deviation from the first-order curve builds up with m.
  auto coarse = delta_scan(gen, {xy4_plan(0.06)}, base, ms);
  ASSERT_GT(coarse.slopes[0], 0.0);
  ASSERT_GT(coarse.rows.back().delta_f, coarse.rows.front().delta_f);

  LindbladGenerator quiet;
  quiet.dims = {2, 2};
  quiet.hamiltonian = ComplexMatrix::Zero(4, 4);
  auto zero = delta_scan(quiet, plans, clean_model({2, 2}), ms);
  for (const auto& r : zero.rows) ASSERT_LT(r.delta_f, 1e-13);

  ASSERT_THROW(delta_scan(gen, {}, base, ms), std::invalid_argument);
}

TEST(decoupler, coherent_residual_orders) {
  auto gen = coherent_coupling();
  auto factory = lindblad_factory(gen, 16);
  auto base = clean_model({2, 2});
  // The superoperator residual is second order in tau_dd.
  auto s1 = dd_superop(xy4_plan(0.02), factory).superop();
  auto s2 = dd_superop(xy4_plan(0.01), factory).superop();
  const double map_order = std::log2(frobenius_distance(s1, first_order_dd_map(gen, xy4_plan(0.02))) /
                                     frobenius_distance(s2, first_order_dd_map(gen, xy4_plan(0.01))));
  ASSERT_NEAR(map_order, 2.0, 0.1);
  // The fidelity deviation of a coherent error is quadratic in that residual.
  auto scan = delta_scan(gen, {xy4_plan(0.02), xy4_plan(0.01)}, base, {10}, DDSpam::Dd, 16);
  const double order = std::log2(scan.rows[0].delta_f / scan.rows[1].delta_f);
  ASSERT_NEAR(order, 4.0, 0.15);
}

TEST(decoupler, linear_slope) {
  ASSERT_DOUBLE_EQ(linear_slope({1, 2, 3}, {2, 4, 6}), 2.0);
  ASSERT_THROW(linear_slope({1}, {1}), std::invalid_argument);
}
