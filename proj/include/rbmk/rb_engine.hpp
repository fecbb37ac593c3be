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
#include <vector>

#include "rbmk/channels.hpp"
#include "rbmk/gates.hpp"
#include "rbmk/tensor.hpp"

namespace rbmk {

// Lambda_0 (preparation), Lambda_1..Lambda_m (after each gate) and
// Lambda_{m+1} (after the undo gate), all on E (x) S.
struct NoiseSchedule {
  std::vector<QuantumChannel> channels;  // size m + 2
  ComplexMatrix rho_env;
  ComplexMatrix rho_sys;
  ComplexMatrix measurement;

  int m() const { return static_cast<int>(channels.size()) - 2; }
  const CompositeDims& dims() const { return channels.front().dims(); }
  // Throws DimensionError / std::invalid_argument on inconsistent data.
  void validate() const;
};

// Time-stationary noise: the same bulk channel after every gate.
struct NoiseModel {
  QuantumChannel prep;
  QuantumChannel bulk;
  QuantumChannel meas;
  ComplexMatrix rho_env;
  ComplexMatrix rho_sys;
  ComplexMatrix measurement;

  const CompositeDims& dims() const { return bulk.dims(); }
  NoiseSchedule schedule(int m) const;
  void validate() const;
};

// |0><0| on the environment, the default fiducial.
ComplexMatrix default_env_state(int d_env);

struct DecayPoint {
  int m = 0;
  double mean = 0.0;
  double variance = 0.0;
  double stderr_mean = 0.0;
  int n = 0;
  std::optional<double> analytical;
  std::optional<double> first_order;
};

struct DecaySeries {
  std::vector<DecayPoint> points;

  std::vector<int> m_values() const;
  std::vector<double> means() const;
  std::vector<double> stderrs() const;
};

// Mean, unbiased variance and standard error of the mean.
DecayPoint summarize_samples(int m, const std::vector<double>& samples);

double sequence_fidelity(const RBSequence& seq, const NoiseSchedule& sched);

struct ExactStatistics {
  double mean = 0.0;
  // Variance of f_m over the uniform distribution of all 24^m sequences.
  double variance = 0.0;
  long long count = 0;
};

inline constexpr int kMaxOracleLength = 3;

// Exhaustive average over all 24^m Clifford sequences; m <= 3.
ExactStatistics exact_sequence_statistics(const NoiseSchedule& sched);
double exact_asf_oracle(const NoiseSchedule& sched);

struct ThetaDollar {
  ComplexMatrix theta;   // X -> tr_S Lambda(X (x) I/dS)
  ComplexMatrix dollar;  // X -> sum_mu tr_S(l_mu) X tr_S(l_mu)^dagger
};

ThetaDollar theta_dollar_maps(const QuantumChannel& ch);

// Psi = |I>><<I| / dS for which = 1, 1 - Psi for which = 2.
ComplexMatrix clifford_projector(int d_sys, int which);

// E-superoperator with entries tr(B P) / tr(P), B the dS^2 x dS^2 block of the
// superoperator at fixed E indices.
ComplexMatrix quality_map_step(const QuantumChannel& ch, const ComplexMatrix& projector);

// Q_m ... Q_1 for the given noise list, normalized by tr(P)^m.
ComplexMatrix generic_quality_map(const std::vector<QuantumChannel>& noise_list,
                                  const ComplexMatrix& projector, const CompositeDims& dims);

// Joint superoperator of Q (x) P with E-first index ordering.
ComplexMatrix lift_quality_map(const ComplexMatrix& q, const ComplexMatrix& projector,
                               const CompositeDims& dims);

// <<M| tr_E Lambda_{m+1} (sum_pi Q_pi (x) P_pi) Lambda_0 |rho>>.
double asf_from_quality_maps(const NoiseSchedule& sched, const std::vector<ComplexMatrix>& q_maps,
                             const std::vector<ComplexMatrix>& projectors);

// Average sequence fidelity from the Theta / $ closed form. The bulk map must
// be CP.
std::vector<double> analytical_asf_clifford(const NoiseModel& model, const std::vector<int>& m_list);

// The same quantity for a general (non-stationary) schedule via generic_quality_map.
double analytical_asf_generic(const NoiseSchedule& sched);

struct MarkovianAsf {
  double a = 0.0;
  double b = 0.0;
  double p = 0.0;
  std::vector<double> series;
};

// F_m = A p^m + B for noise on S alone; spam_prep and spam_meas are applied
// before the first and after the last gate.
MarkovianAsf markovian_asf(const QuantumChannel& bulk, const QuantumChannel& spam_prep,
                           const QuantumChannel& spam_meas, const ComplexMatrix& rho_sys,
                           const ComplexMatrix& measurement, const std::vector<int>& m_list);
// A single SPAM channel is taken to act before the measurement.
MarkovianAsf markovian_asf(const QuantumChannel& bulk, const QuantumChannel& spam,
                           const ComplexMatrix& rho_sys, const ComplexMatrix& measurement,
                           const std::vector<int>& m_list);

struct MonteCarloOptions {
  std::vector<int> m_list;
  int n_samples = 40;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

std::uint64_t sequence_seed(std::uint64_t master, int m, int sample);

// samples[model][m index][sample]; every model sees the same gate sequences.
std::vector<std::vector<std::vector<double>>> monte_carlo_samples(
    const std::vector<NoiseModel>& models, const MonteCarloOptions& options);

DecaySeries monte_carlo_asf(const NoiseModel& model, const MonteCarloOptions& options);

}  // namespace rbmk
