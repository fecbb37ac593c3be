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

#include <functional>
#include <vector>

#include "rbmk/channels.hpp"
#include "rbmk/gates.hpp"
#include "rbmk/lindblad.hpp"
#include "rbmk/rb_engine.hpp"

namespace rbmk {

enum class DDForm { Plain, EdgeSplit };

// Where the interleaved sequence replaces the SPAM slots as well as the bulk.
enum class DDSpam { Dd, Bare };

struct DDPlan {
  DecouplingGroup group;
  double tau_dd = 0.0;
  DDForm form = DDForm::Plain;
  // Order in which the conjugated free evolutions are applied (first applied
  // first). Empty means group order.
  std::vector<int> pulse_order;

  int eta() const { return group.eta(); }
  std::vector<int> resolved_order() const;
  void validate() const;
};

// Single-qubit Pauli group XY4 plan.
DDPlan xy4_plan(double tau_dd, DDForm form = DDForm::Plain);

using PropagatorFactory = std::function<QuantumChannel(double)>;

PropagatorFactory lindblad_factory(const LindbladGenerator& gen, int order = kDefaultTaylorOrder);

// Plain:      prod_j (V_j Lambda^tau V_j^dagger), total time eta * tau.
// Edge split: Lambda^{tau/2} prod_{V != I} (V Lambda^tau V^dagger) Lambda^{tau/2}.
QuantumChannel dd_superop(const DDPlan& plan, const PropagatorFactory& factory);

// Replaces the bulk slots (and with DDSpam::Dd the SPAM slots) of `base` by the
// DD super-sequence.
NoiseModel interleave_dd(const NoiseModel& base, const DDPlan& plan, const PropagatorFactory& factory,
                         DDSpam spam = DDSpam::Dd);

// sum_j V_j D_S V_j^dagger as a dS^2 x dS^2 superoperator.
ComplexMatrix dd_dissipator(const LindbladGenerator& gen, const DDPlan& plan);

// I + tau sum_j (I (x) V_j) L (I (x) V_j)^dagger on the joint space.
ComplexMatrix first_order_dd_map(const LindbladGenerator& gen, const DDPlan& plan);

struct FirstOrderPrediction {
  // Quality factor of Omega = I + tau D_S^(dd); drives the series.
  double p = 1.0;
  // 1 - eta tau tr(gamma) / (dS - 1/dS).
  double p_formula = 1.0;
  // 1 - tau dS eta sum_k gamma_k tr(L_k L_k^dagger) / (dS^2 - 1).
  double p_rates = 1.0;
  // The closed forms above disagree (non-unit-norm dissipators).
  bool forms_diverge = false;
  double a = 0.0;
  double b = 0.0;
  std::vector<double> series;
};

// Throws StructureError when the generator carries SE dissipators.
FirstOrderPrediction first_order_prediction(const LindbladGenerator& gen, const DDPlan& plan,
                                            const ComplexMatrix& rho_sys, const ComplexMatrix& measurement,
                                            const std::vector<int>& m_list, DDSpam spam = DDSpam::Dd);

struct DeltaScanRow {
  double tau_dd = 0.0;
  int m = 0;
  double delta_f = 0.0;
  double slope = 0.0;
};

struct DeltaScan {
  std::vector<DeltaScanRow> rows;
  std::vector<double> taus;
  std::vector<double> slopes;  // per tau, least-squares slope of delta_f vs m
};

// |DD-interleaved analytical ASF - first-order exponential| over the grid.
DeltaScan delta_scan(const LindbladGenerator& gen, const std::vector<DDPlan>& plans,
                     const NoiseModel& base, const std::vector<int>& m_list, DDSpam spam = DDSpam::Dd,
                     int order = kDefaultTaylorOrder, int threads = 1);

// Ordinary least-squares slope.
double linear_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rbmk
