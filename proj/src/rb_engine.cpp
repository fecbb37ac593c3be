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

#include "rbmk/rb_engine.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "rbmk/errors.hpp"
#include "rbmk/parallel.hpp"
#include "rbmk/random.hpp"

namespace rbmk {

namespace {

constexpr double kStateTolerance = 1e-10;

void check_state(const ComplexMatrix& rho, int d, const char* what) {
  if (rho.rows() != d || rho.cols() != d) {
    throw DimensionError(std::string(what) + " has wrong dimension");
  }
  if (!is_hermitian(rho, kStateTolerance)) {
    throw std::invalid_argument(std::string(what) + " is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > kStateTolerance) {
    throw std::invalid_argument(std::string(what) + " does not have unit trace");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(rho, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kStateTolerance) {
    throw std::invalid_argument(std::string(what) + " is not positive semidefinite");
  }
}

void check_effect(const ComplexMatrix& m, int d) {
  if (m.rows() != d || m.cols() != d) {
    throw DimensionError("measurement operator has wrong dimension");
  }
  if (!is_hermitian(m, kStateTolerance)) {
    throw std::invalid_argument("measurement operator is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kStateTolerance ||
      eig.eigenvalues().maxCoeff() > 1.0 + kStateTolerance) {
    throw std::invalid_argument("measurement operator is not between 0 and 1");
  }
}

// Row vector w with w . vec(rho) = tr(M tr_E rho).
Eigen::RowVectorXcd measurement_row(const ComplexMatrix& m, const CompositeDims& dims) {
  const int d = dims.total();
  Eigen::RowVectorXcd w = Eigen::RowVectorXcd::Zero(d * d);
  for (int e = 0; e < dims.env; ++e) {
    for (int s = 0; s < dims.sys; ++s) {
      for (int t = 0; t < dims.sys; ++t) {
        w(dims.index(e, s) * d + dims.index(e, t)) = m(t, s);
      }
    }
  }
  return w;
}

std::vector<ComplexMatrix> gate_superops(const CompositeDims& dims) {
  const auto& group = clifford_group_1q();
  if (dims.sys != 2) {
    throw DimensionError("Clifford sequences are implemented for a single system qubit");
  }
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<size_t>(group.size()));
  for (const auto& g : group.elements()) {
    out.push_back(conjugation_superop(embed_sys_operator(g, dims)));
  }
  return out;
}

// Precomputed pieces for repeatedly evaluating sequences of a stationary model.
struct StationaryEvaluator {
  std::vector<ComplexMatrix> bulk_gate;  // Lambda_bulk G_g
  std::vector<Eigen::RowVectorXcd> final_row;  // <<M| T Lambda_{m+1} G_g
  ComplexVector initial;

  explicit StationaryEvaluator(const NoiseModel& model) {
    const auto& dims = model.dims();
    const auto gates = gate_superops(dims);
    const Eigen::RowVectorXcd row = measurement_row(model.measurement, dims) * model.meas.superop();
    for (const auto& g : gates) {
      bulk_gate.push_back(model.bulk.superop() * g);
      final_row.push_back(row * g);
    }
    initial = model.prep.superop() * vectorize(kron(model.rho_env, model.rho_sys));
  }

  double operator()(const RBSequence& seq) const {
    ComplexVector v = initial;
    for (const int g : seq.gates) {
      v = bulk_gate[static_cast<size_t>(g)] * v;
    }
    return (final_row[static_cast<size_t>(seq.undo)] * v)(0).real();
  }
};

ComplexMatrix power(const ComplexMatrix& q, int m) {
  ComplexMatrix out = ComplexMatrix::Identity(q.rows(), q.cols());
  for (int k = 0; k < m; ++k) {
    out = out * q;
  }
  return out;
}

}  // namespace

void NoiseSchedule::validate() const {
  if (channels.size() < 3) {
    throw std::invalid_argument("noise schedule needs m >= 1 (at least three channels)");
  }
  const CompositeDims& d = dims();
  for (const auto& ch : channels) {
    if (!(ch.dims() == d)) {
      throw DimensionError("noise schedule channels act on different spaces");
    }
  }
  check_state(rho_env, d.env, "rho_E");
  check_state(rho_sys, d.sys, "rho_S");
  check_effect(measurement, d.sys);
}

NoiseSchedule NoiseModel::schedule(int m) const {
  if (m < 1) {
    throw std::invalid_argument("sequence length must be >= 1, got " + std::to_string(m));
  }
  NoiseSchedule s;
  s.channels.reserve(static_cast<size_t>(m) + 2);
  s.channels.push_back(prep);
  for (int i = 0; i < m; ++i) {
    s.channels.push_back(bulk);
  }
  s.channels.push_back(meas);
  s.rho_env = rho_env;
  s.rho_sys = rho_sys;
  s.measurement = measurement;
  return s;
}

void NoiseModel::validate() const {
  const CompositeDims& d = dims();
  if (!(prep.dims() == d) || !(meas.dims() == d)) {
    throw DimensionError("SPAM and bulk channels act on different spaces");
  }
  check_state(rho_env, d.env, "rho_E");
  check_state(rho_sys, d.sys, "rho_S");
  check_effect(measurement, d.sys);
}

ComplexMatrix default_env_state(int d_env) { return basis_projector(d_env, 0); }

std::vector<int> DecaySeries::m_values() const {
  std::vector<int> out;
  for (const auto& p : points) out.push_back(p.m);
  return out;
}

std::vector<double> DecaySeries::means() const {
  std::vector<double> out;
  for (const auto& p : points) out.push_back(p.mean);
  return out;
}

std::vector<double> DecaySeries::stderrs() const {
  std::vector<double> out;
  for (const auto& p : points) out.push_back(p.stderr_mean);
  return out;
}

DecayPoint summarize_samples(int m, const std::vector<double>& samples) {
  DecayPoint pt;
  pt.m = m;
  pt.n = static_cast<int>(samples.size());
  if (samples.empty()) {
    return pt;
  }
  double sum = 0.0;
  for (const double x : samples) sum += x;
  pt.mean = sum / pt.n;
  if (pt.n > 1) {
    double ss = 0.0;
    for (const double x : samples) ss += (x - pt.mean) * (x - pt.mean);
    pt.variance = ss / (pt.n - 1);
  }
  pt.stderr_mean = std::sqrt(pt.variance / pt.n);
  return pt;
}

double sequence_fidelity(const RBSequence& seq, const NoiseSchedule& sched) {
  if (seq.m != sched.m() || static_cast<int>(seq.gates.size()) != seq.m) {
    throw DimensionError("sequence length " + std::to_string(seq.m) +
                         " does not match schedule length " + std::to_string(sched.m()));
  }
  const auto& dims = sched.dims();
  const auto gates = gate_superops(dims);
  ComplexVector v = sched.channels.front().superop() * vectorize(kron(sched.rho_env, sched.rho_sys));
  for (int i = 0; i < seq.m; ++i) {
    v = sched.channels[static_cast<size_t>(i) + 1].superop() * (gates[static_cast<size_t>(seq.gates[static_cast<size_t>(i)])] * v);
  }
  v = sched.channels.back().superop() * (gates[static_cast<size_t>(seq.undo)] * v);
  return (measurement_row(sched.measurement, dims) * v)(0).real();
}

ExactStatistics exact_sequence_statistics(const NoiseSchedule& sched) {
  const int m = sched.m();
  if (m < 1 || m > kMaxOracleLength) {
    throw std::invalid_argument("exact enumeration supports 1 <= m <= " +
                                std::to_string(kMaxOracleLength) + ", got " + std::to_string(m));
  }
  const auto& group = clifford_group_1q();
  const auto& dims = sched.dims();
  const auto gates = gate_superops(dims);
  const int n = group.size();

  std::vector<std::vector<ComplexMatrix>> step(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (int g = 0; g < n; ++g) {
      step[static_cast<size_t>(i)].push_back(sched.channels[static_cast<size_t>(i) + 1].superop() * gates[static_cast<size_t>(g)]);
    }
  }
  const Eigen::RowVectorXcd row = measurement_row(sched.measurement, dims) * sched.channels.back().superop();
  std::vector<Eigen::RowVectorXcd> final_row;
  for (int g = 0; g < n; ++g) final_row.push_back(row * gates[static_cast<size_t>(g)]);

  // Depth-first over gate prefixes; each level reuses its parent's state.
  std::vector<ComplexVector> state(static_cast<size_t>(m) + 1);
  state[0] = sched.channels.front().superop() * vectorize(kron(sched.rho_env, sched.rho_sys));
  double sum = 0.0;
  double sum_sq = 0.0;
  long long count = 0;
  auto recurse = [&](auto&& self, int level, int cumulative) -> void {
    if (level == m) {
      const double f = (final_row[static_cast<size_t>(group.inverse(cumulative))] * state[static_cast<size_t>(level)])(0).real();
      sum += f;
      sum_sq += f * f;
      ++count;
      return;
    }
    for (int g = 0; g < n; ++g) {
      state[static_cast<size_t>(level) + 1] = step[static_cast<size_t>(level)][static_cast<size_t>(g)] * state[static_cast<size_t>(level)];
      self(self, level + 1, group.multiply(g, cumulative));
    }
  };
  recurse(recurse, 0, 0);

  ExactStatistics stats;
  stats.count = count;
  stats.mean = sum / static_cast<double>(count);
  stats.variance = std::max(0.0, sum_sq / static_cast<double>(count) - stats.mean * stats.mean);
  return stats;
}

double exact_asf_oracle(const NoiseSchedule& sched) { return exact_sequence_statistics(sched).mean; }

ThetaDollar theta_dollar_maps(const QuantumChannel& ch) {
  const auto& dims = ch.dims();
  const int de = dims.env;
  const int ds = dims.sys;
  ThetaDollar out;
  out.theta = ComplexMatrix::Zero(de * de, de * de);
  const ComplexMatrix half_id = ComplexMatrix::Identity(ds, ds) / static_cast<double>(ds);
  for (int a = 0; a < de; ++a) {
    for (int b = 0; b < de; ++b) {
      ComplexMatrix unit = ComplexMatrix::Zero(de, de);
      unit(a, b) = 1.0;
      const ComplexMatrix image = partial_trace(ch.apply(kron(unit, half_id)), dims, Subsystem::Sys);
      out.theta.col(a * de + b) = vectorize(image);
    }
  }
  std::vector<ComplexMatrix> reduced;
  for (const auto& k : ch.kraus()) {
    ComplexMatrix r = ComplexMatrix::Zero(de, de);
    for (int e = 0; e < de; ++e) {
      for (int f = 0; f < de; ++f) {
        for (int s = 0; s < ds; ++s) {
          r(e, f) += k(dims.index(e, s), dims.index(f, s));
        }
      }
    }
    reduced.push_back(std::move(r));
  }
  out.dollar = superop_from_kraus(reduced);
  return out;
}

ComplexMatrix clifford_projector(int d_sys, int which) {
  const ComplexVector id = vectorize(ComplexMatrix::Identity(d_sys, d_sys));
  const ComplexMatrix psi = id * id.adjoint() / static_cast<double>(d_sys);
  if (which == 1) {
    return psi;
  }
  if (which == 2) {
    return ComplexMatrix::Identity(psi.rows(), psi.cols()) - psi;
  }
  throw std::invalid_argument("clifford_projector: which must be 1 or 2");
}

ComplexMatrix quality_map_step(const QuantumChannel& ch, const ComplexMatrix& projector) {
  const auto& dims = ch.dims();
  const int de = dims.env;
  const int ds = dims.sys;
  const int d = dims.total();
  if (projector.rows() != ds * ds || projector.cols() != ds * ds) {
    throw DimensionError("projector does not act on the system superoperator space");
  }
  const double tr_p = projector.trace().real();
  const ComplexMatrix& s = ch.superop();
  ComplexMatrix q = ComplexMatrix::Zero(de * de, de * de);
  ComplexMatrix block(ds * ds, ds * ds);
  for (int eo = 0; eo < de; ++eo) {
    for (int eo2 = 0; eo2 < de; ++eo2) {
      for (int ei = 0; ei < de; ++ei) {
        for (int ei2 = 0; ei2 < de; ++ei2) {
          for (int so = 0; so < ds; ++so) {
            for (int so2 = 0; so2 < ds; ++so2) {
              for (int si = 0; si < ds; ++si) {
                for (int si2 = 0; si2 < ds; ++si2) {
                  block(so * ds + so2, si * ds + si2) =
                      s(dims.index(eo, so) * d + dims.index(eo2, so2), dims.index(ei, si) * d + dims.index(ei2, si2));
                }
              }
            }
          }
          q(eo * de + eo2, ei * de + ei2) = (block * projector).trace() / tr_p;
        }
      }
    }
  }
  return q;
}

ComplexMatrix generic_quality_map(const std::vector<QuantumChannel>& noise_list,
                                  const ComplexMatrix& projector, const CompositeDims& dims) {
  if ((projector * projector - projector).norm() > kDefaultTolerance) {
    throw std::invalid_argument("generic_quality_map: projector is not idempotent");
  }
  ComplexMatrix q = ComplexMatrix::Identity(dims.env * dims.env, dims.env * dims.env);
  for (const auto& ch : noise_list) {
    if (!(ch.dims() == dims)) {
      throw DimensionError("generic_quality_map: noise channel dims mismatch");
    }
    q = quality_map_step(ch, projector) * q;
  }
  return q;
}

ComplexMatrix lift_quality_map(const ComplexMatrix& q, const ComplexMatrix& projector,
                               const CompositeDims& dims) {
  const int de = dims.env;
  const int ds = dims.sys;
  const int d = dims.total();
  ComplexMatrix out(d * d, d * d);
  for (int eo = 0; eo < de; ++eo)
    for (int eo2 = 0; eo2 < de; ++eo2)
      for (int ei = 0; ei < de; ++ei)
        for (int ei2 = 0; ei2 < de; ++ei2) {
          const Complex qv = q(eo * de + eo2, ei * de + ei2);
          for (int so = 0; so < ds; ++so)
            for (int so2 = 0; so2 < ds; ++so2)
              for (int si = 0; si < ds; ++si)
                for (int si2 = 0; si2 < ds; ++si2) {
                  out(dims.index(eo, so) * d + dims.index(eo2, so2), dims.index(ei, si) * d + dims.index(ei2, si2)) =
                      qv * projector(so * ds + so2, si * ds + si2);
                }
        }
  return out;
}

double asf_from_quality_maps(const NoiseSchedule& sched, const std::vector<ComplexMatrix>& q_maps,
                             const std::vector<ComplexMatrix>& projectors) {
  if (q_maps.size() != projectors.size()) {
    throw std::invalid_argument("asf_from_quality_maps: one quality map per projector required");
  }
  const auto& dims = sched.dims();
  const ComplexVector v0 = sched.channels.front().superop() * vectorize(kron(sched.rho_env, sched.rho_sys));
  const Eigen::RowVectorXcd row = measurement_row(sched.measurement, dims) * sched.channels.back().superop();
  Complex total = 0.0;
  for (size_t k = 0; k < q_maps.size(); ++k) {
    total += (row * (lift_quality_map(q_maps[k], projectors[k], dims) * v0))(0);
  }
  return total.real();
}

std::vector<double> analytical_asf_clifford(const NoiseModel& model, const std::vector<int>& m_list) {
  const auto& dims = model.dims();
  const int ds = dims.sys;
  const auto maps = theta_dollar_maps(model.bulk);
  const ComplexMatrix q_psi = maps.theta;
  const ComplexMatrix q_rest = (maps.dollar - maps.theta) / static_cast<double>(ds * ds - 1);
  const ComplexMatrix p1 = clifford_projector(ds, 1);
  const ComplexMatrix p2 = clifford_projector(ds, 2);

  const ComplexVector v0 = model.prep.superop() * vectorize(kron(model.rho_env, model.rho_sys));
  const Eigen::RowVectorXcd row = measurement_row(model.measurement, dims) * model.meas.superop();

  std::vector<double> out;
  out.reserve(m_list.size());
  for (const int m : m_list) {
    if (m < 1) {
      throw std::invalid_argument("sequence length must be >= 1, got " + std::to_string(m));
    }
    const ComplexMatrix lifted =
        lift_quality_map(power(q_psi, m), p1, dims) + lift_quality_map(power(q_rest, m), p2, dims);
    out.push_back((row * (lifted * v0))(0).real());
  }
  return out;
}

double analytical_asf_generic(const NoiseSchedule& sched) {
  sched.validate();
  const auto& dims = sched.dims();
  const std::vector<QuantumChannel> bulk(sched.channels.begin() + 1, sched.channels.end() - 1);
  const std::vector<ComplexMatrix> projectors{clifford_projector(dims.sys, 1), clifford_projector(dims.sys, 2)};
  std::vector<ComplexMatrix> q;
  for (const auto& p : projectors) {
    q.push_back(generic_quality_map(bulk, p, dims));
  }
  return asf_from_quality_maps(sched, q, projectors);
}

MarkovianAsf markovian_asf(const QuantumChannel& bulk, const QuantumChannel& spam_prep,
                           const QuantumChannel& spam_meas, const ComplexMatrix& rho_sys,
                           const ComplexMatrix& measurement, const std::vector<int>& m_list) {
  const int d = bulk.dim();
  if (bulk.dims().env != 1 || spam_prep.dim() != d || spam_meas.dim() != d) {
    throw DimensionError("markovian_asf: channels must act on S alone");
  }
  const ComplexMatrix psi = clifford_projector(d, 1);
  const ComplexMatrix rest = clifford_projector(d, 2);
  const Eigen::RowVectorXcd row = vectorize(measurement.transpose()).transpose() * spam_meas.superop();
  const ComplexVector v0 = spam_prep.superop() * vectorize(rho_sys);

  MarkovianAsf out;
  out.p = quality_factor(bulk);
  out.a = (row * (rest * v0))(0).real();
  out.b = (row * (psi * v0))(0).real();
  for (const int m : m_list) {
    if (m < 1) {
      throw std::invalid_argument("sequence length must be >= 1, got " + std::to_string(m));
    }
    out.series.push_back(out.a * std::pow(out.p, m) + out.b);
  }
  return out;
}

MarkovianAsf markovian_asf(const QuantumChannel& bulk, const QuantumChannel& spam,
                           const ComplexMatrix& rho_sys, const ComplexMatrix& measurement,
                           const std::vector<int>& m_list) {
  return markovian_asf(bulk, QuantumChannel::identity(spam.dims()), spam, rho_sys, measurement, m_list);
}

void MonteCarloOptions::validate() const {
  std::string problems;
  if (m_list.empty()) {
    problems += "m_list is empty; ";
  }
  for (size_t i = 0; i < m_list.size(); ++i) {
    if (m_list[i] < 1) problems += "m_list entries must be >= 1; ";
    if (i > 0 && m_list[i] <= m_list[i - 1]) problems += "m_list must be strictly increasing; ";
  }
  if (n_samples < 2) {
    problems += "n_samples must be >= 2; ";
  }
  if (!problems.empty()) {
    throw ConfigError(problems.substr(0, problems.size() - 2));
  }
}

std::uint64_t sequence_seed(std::uint64_t master, int m, int sample) {
  return counter_hash(master, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(sample));
}

std::vector<std::vector<std::vector<double>>> monte_carlo_samples(
    const std::vector<NoiseModel>& models, const MonteCarloOptions& options) {
  options.validate();
  std::vector<StationaryEvaluator> evaluators;
  for (const auto& model : models) {
    model.validate();
    evaluators.emplace_back(model);
  }
  const size_t n_m = options.m_list.size();
  const auto n_s = static_cast<size_t>(options.n_samples);
  std::vector<std::vector<std::vector<double>>> out(
      models.size(), std::vector<std::vector<double>>(n_m, std::vector<double>(n_s, 0.0)));

  parallel_for(n_m * n_s, options.threads, [&](size_t task) {
    const size_t mi = task / n_s;
    const size_t si = task % n_s;
    const int m = options.m_list[mi];
    const RBSequence seq = sample_rb_sequence(m, sequence_seed(options.seed, m, static_cast<int>(si)));
    for (size_t k = 0; k < evaluators.size(); ++k) {
      out[k][mi][si] = evaluators[k](seq);
    }
  });
  return out;
}

DecaySeries monte_carlo_asf(const NoiseModel& model, const MonteCarloOptions& options) {
  const auto samples = monte_carlo_samples({model}, options);
  DecaySeries series;
  for (size_t i = 0; i < options.m_list.size(); ++i) {
    series.points.push_back(summarize_samples(options.m_list[i], samples[0][i]));
  }
  return series;
}

}  // namespace rbmk
