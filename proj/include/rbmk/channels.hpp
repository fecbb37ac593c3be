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

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "rbmk/tensor.hpp"

namespace rbmk {

enum class Representation { Kraus, Superoperator, Choi, PTM };

std::string to_string(Representation r);

// A linear map on operators of an E (x) S space (or of S alone, env = 1).
//
// Values are immutable and cheap to copy; the data is shared. The
// superoperator is always materialized; Kraus operators are extracted on
// first request and cached.
class QuantumChannel {
 public:
  static QuantumChannel from_kraus(std::vector<ComplexMatrix> kraus, CompositeDims dims);
  static QuantumChannel from_kraus(std::vector<ComplexMatrix> kraus);
  static QuantumChannel from_superop(ComplexMatrix superop, CompositeDims dims);
  static QuantumChannel from_superop(ComplexMatrix superop);
  // Choi matrix J = sum_ij |i><j| (x) Phi(|i><j|) (input factor first).
  // Throws RepresentationError when J is not Hermitian.
  static QuantumChannel from_choi(ComplexMatrix choi, CompositeDims dims);
  static QuantumChannel from_ptm(ComplexMatrix ptm, CompositeDims dims);
  static QuantumChannel identity(CompositeDims dims);
  static QuantumChannel unitary(const ComplexMatrix& u, CompositeDims dims);

  const CompositeDims& dims() const;
  int dim() const { return dims().total(); }
  Representation representation() const;

  const ComplexMatrix& superop() const;
  ComplexMatrix choi() const;
  // Kraus operators from the Choi eigendecomposition; eigenvalues below 1e-12
  // are discarded. Throws RepresentationError when the map is not CP.
  const std::vector<ComplexMatrix>& kraus() const;
  // (R)_ij = 2^-n tr[P_i Phi(P_j)] over all qubits of the joint space.
  ComplexMatrix ptm() const;

  ComplexMatrix apply(const ComplexMatrix& rho) const;

 private:
  struct State;
  explicit QuantumChannel(std::shared_ptr<const State> state);
  std::shared_ptr<const State> state_;
};

// after o before
QuantumChannel compose(const QuantumChannel& after, const QuantumChannel& before);
QuantumChannel tensor_product(const QuantumChannel& env_part, const QuantumChannel& sys_part);

QuantumChannel convert_representation(const QuantumChannel& ch, Representation target);

// Plain single-register dims {1, d}.
CompositeDims plain_dims(int d);

struct ChannelReport {
  bool cp = false;
  bool tp = false;
  bool trace_non_increasing = false;
  double min_choi_eigenvalue = 0.0;
  double tp_defect = 0.0;
};

ChannelReport validate_channel(const QuantumChannel& ch, double tol = kDefaultTolerance);

// (d + tr S) / (d (d + 1)) with d the full Hilbert dimension of the channel.
double avg_gate_fidelity(const QuantumChannel& ch);
// (d F - 1) / (d - 1)
double quality_factor(const QuantumChannel& ch);
double fidelity_from_quality_factor(double p, int d);

QuantumChannel full_pauli_twirl(const QuantumChannel& ch);
// Twirl over the Pauli group of S only; E is left untouched.
QuantumChannel s_pauli_twirl(const QuantumChannel& ch);
QuantumChannel s_pauli_twirl(const QuantumChannel& ch, const CompositeDims& dims);
// The part of the map that the S-twirl removes: ch - s_pauli_twirl(ch).
QuantumChannel s_pauli_offdiagonal_part(const QuantumChannel& ch);

// 4^-n sum_P P o noisy_gate o (G^dagger P G), with `ideal_gate` acting on S.
QuantumChannel g_twisted_twirl(const QuantumChannel& noisy_gate, const ComplexMatrix& ideal_gate);

enum class PauliRateMode { FromChi, FromPtmWalsh };

struct PauliErrorRates {
  std::vector<std::string> labels;
  std::vector<double> rates;
};

PauliErrorRates pauli_error_rates(const QuantumChannel& ch, PauliRateMode mode);

// Sum of squared entries of the unital block of the PTM divided by d^2 - 1.
double unitarity(const QuantumChannel& ch);

// Reduced S channel rho_S -> tr_E ch(rho_E (x) rho_S).
QuantumChannel reduce_to_system(const QuantumChannel& ch, const ComplexMatrix& rho_env);

// Writes the real part of a PTM as CSV with a header row of Pauli labels.
void write_ptm_csv(std::ostream& out, const ComplexMatrix& ptm);

// Standard qubit (or qudit, for depolarizing) channels.
QuantumChannel depolarizing_channel(double lambda, int d = 2);
QuantumChannel amplitude_damping_channel(double gamma);
QuantumChannel dephasing_channel(double prob);

}  // namespace rbmk
