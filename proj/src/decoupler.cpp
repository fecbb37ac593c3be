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

#include <algorithm>
#include <cmath>
#include <string>

#include "rbmk/errors.hpp"
#include "rbmk/parallel.hpp"

namespace rbmk {

namespace {

int identity_index(const DecouplingGroup& group) {
  for (int i = 0; i < group.eta(); ++i) {
    const auto& v = group.elements[static_cast<size_t>(i)];
    const Complex phase = v(0, 0);
    if (std::abs(std::abs(phase) - 1.0) < 1e-12 &&
        approx_equal(v, phase * ComplexMatrix::Identity(v.rows(), v.cols()), 1e-12)) {
      return i;
    }
  }
  return -1;
}

ComplexMatrix conjugated(const ComplexMatrix& superop, const ComplexMatrix& v, const CompositeDims& dims) {
  const ComplexMatrix u = embed_sys_operator(v, dims);
  return conjugation_superop(u) * superop * conjugation_superop(u.adjoint());
}

}  // namespace

std::vector<int> DDPlan::resolved_order() const {
  if (!pulse_order.empty()) {
    return pulse_order;
  }
  std::vector<int> order(static_cast<size_t>(eta()));
  for (int i = 0; i < eta(); ++i) order[static_cast<size_t>(i)] = i;
  return order;
}

void DDPlan::validate() const {
  group.validate();
  if (!(tau_dd > 0.0)) {
    throw std::invalid_argument("tau_dd must be positive, got " + std::to_string(tau_dd));
  }
  std::vector<int> order = resolved_order();
  if (static_cast<int>(order.size()) != eta()) {
    throw std::invalid_argument("pulse_order must list every group element once");
  }
  std::sort(order.begin(), order.end());
  for (int i = 0; i < eta(); ++i) {
    if (order[static_cast<size_t>(i)] != i) {
      throw std::invalid_argument("pulse_order is not a permutation of the group elements");
    }
  }
  if (form == DDForm::EdgeSplit && identity_index(group) < 0) {
    throw StructureError("edge-split form requires the identity in the decoupling group");
  }
}

DDPlan xy4_plan(double tau_dd, DDForm form) {
  DDPlan plan;
  plan.group = pauli_decoupling_group(1);
  plan.tau_dd = tau_dd;
  plan.form = form;
  return plan;
}

PropagatorFactory lindblad_factory(const LindbladGenerator& gen, int order) {
  const ComplexMatrix l = build_generator(gen);
  const CompositeDims dims = gen.dims;
  return [l, dims, order](double t) {
    if (!(t >= 0.0)) {
      throw std::invalid_argument("propagator: time must be non-negative");
    }
    return QuantumChannel::from_superop(expm_truncated(l, t, order), dims);
  };
}

QuantumChannel dd_superop(const DDPlan& plan, const PropagatorFactory& factory) {
  plan.validate();
  const QuantumChannel free = factory(plan.tau_dd);
  const CompositeDims dims = free.dims();
  const auto order = plan.resolved_order();
  const int d2 = dims.total() * dims.total();
  ComplexMatrix total = ComplexMatrix::Identity(d2, d2);

  if (plan.form == DDForm::Plain) {
    for (const int k : order) {
      total = conjugated(free.superop(), plan.group.elements[static_cast<size_t>(k)], dims) * total;
    }
    return QuantumChannel::from_superop(std::move(total), dims);
  }

  const int id = identity_index(plan.group);
  const ComplexMatrix half = factory(plan.tau_dd / 2.0).superop();
  total = half;
  for (const int k : order) {
    if (k == id) continue;
    total = conjugated(free.superop(), plan.group.elements[static_cast<size_t>(k)], dims) * total;
  }
  total = half * total;
  return QuantumChannel::from_superop(std::move(total), dims);
}

NoiseModel interleave_dd(const NoiseModel& base, const DDPlan& plan, const PropagatorFactory& factory,
                         DDSpam spam) {
  const QuantumChannel s = dd_superop(plan, factory);
  if (!(s.dims() == base.dims())) {
    throw DimensionError("DD plan dims do not match the experiment");
  }
  NoiseModel out = base;
  out.bulk = s;
  if (spam == DDSpam::Dd) {
    out.prep = s;
    out.meas = s;
  }
  return out;
}

ComplexMatrix dd_dissipator(const LindbladGenerator& gen, const DDPlan& plan) {
  plan.group.validate();
  const int ds = gen.dims.sys;
  const CompositeDims sys_only = plain_dims(ds);
  ComplexMatrix d_s = ComplexMatrix::Zero(ds * ds, ds * ds);
  for (const auto& diss : gen.dissipators) {
    if (diss.locality == Locality::S) {
      d_s += diss.rate * dissipator_superop(diss.op);
    }
  }
  ComplexMatrix out = ComplexMatrix::Zero(ds * ds, ds * ds);
  for (const auto& v : plan.group.elements) {
    out += conjugated(d_s, v, sys_only);
  }
  return out;
}

ComplexMatrix first_order_dd_map(const LindbladGenerator& gen, const DDPlan& plan) {
  plan.validate();
  const ComplexMatrix l = build_generator(gen);
  ComplexMatrix avg = ComplexMatrix::Zero(l.rows(), l.cols());
  for (const auto& v : plan.group.elements) {
    avg += conjugated(l, v, gen.dims);
  }
  return ComplexMatrix::Identity(l.rows(), l.cols()) + plan.tau_dd * avg;
}

FirstOrderPrediction first_order_prediction(const LindbladGenerator& gen, const DDPlan& plan,
                                            const ComplexMatrix& rho_sys, const ComplexMatrix& measurement,
                                            const std::vector<int>& m_list, DDSpam spam) {
  gen.validate();
  plan.validate();
  if (gen.has_se_dissipators()) {
    throw StructureError(
        "first-order DD prediction requires only local S and E dissipators; "
        "the generator has an SE dissipator");
  }
  const int ds = gen.dims.sys;
  const double d = ds;
  const double eta = plan.eta();
  const double tau = plan.tau_dd;

  FirstOrderPrediction out;
  out.p_formula = 1.0 - eta * tau * gen.rate_trace() / (d - 1.0 / d);
  double weighted = 0.0;
  for (const auto& diss : gen.dissipators) {
    if (diss.locality == Locality::S) {
      weighted += diss.rate * hs_inner(diss.op, diss.op).real();
    }
  }
  out.p_rates = 1.0 - tau * d * eta * weighted / (d * d - 1.0);

  const ComplexMatrix omega = ComplexMatrix::Identity(ds * ds, ds * ds) + tau * dd_dissipator(gen, plan);
  out.p = (omega.trace().real() - 1.0) / (d * d - 1.0);
  out.forms_diverge = std::abs(out.p_formula - out.p) > 1e-12;

  const ComplexMatrix spam_map =
      spam == DDSpam::Dd ? omega : ComplexMatrix::Identity(ds * ds, ds * ds);
  const ComplexMatrix psi = clifford_projector(ds, 1);
  const ComplexMatrix rest = clifford_projector(ds, 2);
  const Eigen::RowVectorXcd row = vectorize(measurement.transpose()).transpose() * spam_map;
  const ComplexVector v0 = spam_map * vectorize(rho_sys);
  out.a = (row * (rest * v0))(0).real();
  out.b = (row * (psi * v0))(0).real();
  for (const int m : m_list) {
    out.series.push_back(out.a * std::pow(out.p, m) + out.b);
  }
  return out;
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("linear_slope: need two or more paired points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

DeltaScan delta_scan(const LindbladGenerator& gen, const std::vector<DDPlan>& plans,
                     const NoiseModel& base, const std::vector<int>& m_list, DDSpam spam, int order,
                     int threads) {
  if (plans.empty()) {
    throw std::invalid_argument("delta_scan: tau_dd grid is empty");
  }
  const PropagatorFactory factory = lindblad_factory(gen, order);
  std::vector<std::vector<double>> deltas(plans.size());
  parallel_for(plans.size(), threads, [&](size_t i) {
    const NoiseModel model = interleave_dd(base, plans[i], factory, spam);
    const auto full = analytical_asf_clifford(model, m_list);
    const auto first = first_order_prediction(gen, plans[i], base.rho_sys, base.measurement, m_list, spam);
    std::vector<double> d(m_list.size());
    for (size_t k = 0; k < m_list.size(); ++k) {
      d[k] = std::abs(full[k] - first.series[k]);
    }
    deltas[i] = std::move(d);
  });

  DeltaScan scan;
  const std::vector<double> xs(m_list.begin(), m_list.end());
  for (size_t i = 0; i < plans.size(); ++i) {
    const double slope = m_list.size() >= 2 ? linear_slope(xs, deltas[i]) : 0.0;
    scan.taus.push_back(plans[i].tau_dd);
    scan.slopes.push_back(slope);
    for (size_t k = 0; k < m_list.size(); ++k) {
      scan.rows.push_back({plans[i].tau_dd, m_list[k], deltas[i][k], slope});
    }
  }
  return scan;
}

}  // namespace rbmk
