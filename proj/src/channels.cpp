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

#include "rbmk/channels.hpp"

#include <cmath>
#include <cstdio>
#include <mutex>
#include <optional>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "rbmk/errors.hpp"

namespace rbmk {

namespace {

constexpr double kKrausCutoff = 1e-12;
constexpr double kCpTolerance = 1e-8;

ComplexMatrix superop_to_choi(const ComplexMatrix& s, int d) {
  ComplexMatrix j(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c) {
        for (int e = 0; e < d; ++e) {
          j(c * d + a, e * d + b) = s(a * d + b, c * d + e);
        }
      }
    }
  }
  return j;
}

ComplexMatrix choi_to_superop(const ComplexMatrix& j, int d) {
  ComplexMatrix s(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c) {
        for (int e = 0; e < d; ++e) {
          s(a * d + b, c * d + e) = j(c * d + a, e * d + b);
        }
      }
    }
  }
  return s;
}

// Columns are vec(P_j) for the n-qubit Pauli basis.
ComplexMatrix pauli_vec_matrix(int n) {
  const auto basis = pauli_basis(n);
  const auto d2 = static_cast<Eigen::Index>(basis.size());
  ComplexMatrix b(d2, d2);
  for (Eigen::Index j = 0; j < d2; ++j) {
    b.col(j) = vectorize(basis[static_cast<size_t>(j)]);
  }
  return b;
}

int require_qubits(int dim, const char* what) {
  const int n = qubit_count(dim);
  if (n < 0) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(dim) +
                         " is not a power of two");
  }
  return n;
}

void check_dims(const ComplexMatrix& s, const CompositeDims& dims) {
  dims.validate();
  const auto d2 = static_cast<Eigen::Index>(dims.total()) * dims.total();
  if (s.rows() != d2 || s.cols() != d2) {
    throw DimensionError("superoperator is " + std::to_string(s.rows()) + "x" +
                         std::to_string(s.cols()) + ", dims require " + std::to_string(d2) + "x" +
                         std::to_string(d2));
  }
}

}  // namespace

std::string to_string(Representation r) {
  switch (r) {
    case Representation::Kraus:
      return "kraus";
    case Representation::Superoperator:
      return "superop";
    case Representation::Choi:
      return "choi";
    case Representation::PTM:
      return "ptm";
  }
  return "unknown";
}

struct QuantumChannel::State {
  CompositeDims dims;
  Representation rep = Representation::Superoperator;
  ComplexMatrix superop;
  mutable std::once_flag kraus_once;
  mutable std::vector<ComplexMatrix> kraus;
};

QuantumChannel::QuantumChannel(std::shared_ptr<const State> state) : state_(std::move(state)) {}

CompositeDims plain_dims(int d) {
  CompositeDims dims{1, d};
  dims.validate();
  return dims;
}

QuantumChannel QuantumChannel::from_kraus(std::vector<ComplexMatrix> kraus, CompositeDims dims) {
  auto st = std::make_shared<State>();
  st->superop = superop_from_kraus(kraus);
  check_dims(st->superop, dims);
  st->dims = dims;
  st->rep = Representation::Kraus;
  // Pre-populate the cache with the caller's decomposition.
  std::call_once(st->kraus_once, [&] { st->kraus = std::move(kraus); });
  return QuantumChannel(std::move(st));
}

QuantumChannel QuantumChannel::from_kraus(std::vector<ComplexMatrix> kraus) {
  if (kraus.empty()) {
    throw DimensionError("from_kraus: empty Kraus list");
  }
  const auto d = static_cast<int>(kraus.front().rows());
  return from_kraus(std::move(kraus), plain_dims(d));
}

QuantumChannel QuantumChannel::from_superop(ComplexMatrix superop, CompositeDims dims) {
  check_dims(superop, dims);
  auto st = std::make_shared<State>();
  st->dims = dims;
  st->superop = std::move(superop);
  st->rep = Representation::Superoperator;
  return QuantumChannel(std::move(st));
}

QuantumChannel QuantumChannel::from_superop(ComplexMatrix superop) {
  const auto d = static_cast<int>(std::llround(std::sqrt(static_cast<double>(superop.rows()))));
  return from_superop(std::move(superop), plain_dims(d));
}

QuantumChannel QuantumChannel::from_choi(ComplexMatrix choi, CompositeDims dims) {
  dims.validate();
  const int d = dims.total();
  if (choi.rows() != d * d || choi.cols() != d * d) {
    throw DimensionError("from_choi: Choi matrix does not match dims");
  }
  const double scale = std::max(1.0, choi.norm());
  if ((choi - choi.adjoint()).norm() > kDefaultTolerance * scale) {
    throw RepresentationError("from_choi: Choi matrix is not Hermitian");
  }
  auto st = std::make_shared<State>();
  st->dims = dims;
  st->superop = choi_to_superop(choi, d);
  st->rep = Representation::Choi;
  return QuantumChannel(std::move(st));
}

QuantumChannel QuantumChannel::from_ptm(ComplexMatrix ptm, CompositeDims dims) {
  dims.validate();
  const int d = dims.total();
  const int n = require_qubits(d, "from_ptm");
  if (ptm.rows() != d * d || ptm.cols() != d * d) {
    throw DimensionError("from_ptm: PTM does not match dims");
  }
  const ComplexMatrix b = pauli_vec_matrix(n);
  auto st = std::make_shared<State>();
  st->dims = dims;
  st->superop = b * ptm * b.adjoint() / static_cast<double>(d);
  st->rep = Representation::PTM;
  return QuantumChannel(std::move(st));
}

QuantumChannel QuantumChannel::identity(CompositeDims dims) {
  dims.validate();
  const int d = dims.total();
  return from_superop(ComplexMatrix::Identity(d * d, d * d), dims);
}

QuantumChannel QuantumChannel::unitary(const ComplexMatrix& u, CompositeDims dims) {
  return from_kraus({u}, dims);
}

const CompositeDims& QuantumChannel::dims() const { return state_->dims; }

Representation QuantumChannel::representation() const { return state_->rep; }

const ComplexMatrix& QuantumChannel::superop() const { return state_->superop; }

ComplexMatrix QuantumChannel::choi() const { return superop_to_choi(state_->superop, dim()); }

const std::vector<ComplexMatrix>& QuantumChannel::kraus() const {
  std::call_once(state_->kraus_once, [this] {
    const int d = dim();
    ComplexMatrix j = choi();
    j = (j + j.adjoint()).eval() / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(j);
    const auto& values = eig.eigenvalues();
    const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    if (values.minCoeff() < -kCpTolerance * scale) {
      throw RepresentationError("kraus: map is not completely positive (min Choi eigenvalue " +
                                std::to_string(values.minCoeff()) + ")");
    }
    std::vector<ComplexMatrix> out;
    for (Eigen::Index k = values.size() - 1; k >= 0; --k) {
      if (values(k) < kKrausCutoff) {
        continue;
      }
      const double w = std::sqrt(values(k));
      ComplexMatrix op(d, d);
      for (int a = 0; a < d; ++a) {
        for (int c = 0; c < d; ++c) {
          op(a, c) = w * eig.eigenvectors()(c * d + a, k);
        }
      }
      out.push_back(std::move(op));
    }
    if (out.empty()) {
      out.push_back(ComplexMatrix::Zero(d, d));
    }
    state_->kraus = std::move(out);
  });
  return state_->kraus;
}

ComplexMatrix QuantumChannel::ptm() const {
  const int d = dim();
  const int n = require_qubits(d, "ptm");
  const ComplexMatrix b = pauli_vec_matrix(n);
  return b.adjoint() * state_->superop * b / static_cast<double>(d);
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& rho) const {
  if (rho.rows() != dim() || rho.cols() != dim()) {
    throw DimensionError("apply: operator does not match channel dimension");
  }
  return devectorize(state_->superop * vectorize(rho));
}

QuantumChannel compose(const QuantumChannel& after, const QuantumChannel& before) {
  if (!(after.dims() == before.dims())) {
    throw DimensionError("compose: channels act on different spaces");
  }
  return QuantumChannel::from_superop(after.superop() * before.superop(), after.dims());
}

QuantumChannel tensor_product(const QuantumChannel& env_part, const QuantumChannel& sys_part) {
  // Kraus of a product map are products of Kraus; keeps E-first ordering.
  std::vector<ComplexMatrix> kraus;
  for (const auto& a : env_part.kraus()) {
    for (const auto& b : sys_part.kraus()) {
      kraus.push_back(kron(a, b));
    }
  }
  return QuantumChannel::from_kraus(std::move(kraus), CompositeDims{env_part.dim(), sys_part.dim()});
}

QuantumChannel convert_representation(const QuantumChannel& ch, Representation target) {
  switch (target) {
    case Representation::Kraus:
      return QuantumChannel::from_kraus(ch.kraus(), ch.dims());
    case Representation::Superoperator:
      return QuantumChannel::from_superop(ch.superop(), ch.dims());
    case Representation::Choi:
      return QuantumChannel::from_choi(ch.choi(), ch.dims());
    case Representation::PTM:
      return QuantumChannel::from_ptm(ch.ptm(), ch.dims());
  }
  throw RepresentationError("convert_representation: unknown target");
}

ChannelReport validate_channel(const QuantumChannel& ch, double tol) {
  ChannelReport report;
  const int d = ch.dim();
  ComplexMatrix j = ch.choi();
  j = (j + j.adjoint()).eval() / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(j, Eigen::EigenvaluesOnly);
  report.min_choi_eigenvalue = eig.eigenvalues().minCoeff();
  report.cp = report.min_choi_eigenvalue >= -tol;

  // sum_mu K^dagger K, read off the Choi matrix by tracing the output factor.
  ComplexMatrix kk = ComplexMatrix::Zero(d, d);
  for (int c = 0; c < d; ++c) {
    for (int e = 0; e < d; ++e) {
      for (int a = 0; a < d; ++a) {
        kk(e, c) += j(c * d + a, e * d + a);
      }
    }
  }
  report.tp_defect = (kk - ComplexMatrix::Identity(d, d)).norm();
  report.tp = report.tp_defect <= tol;
  kk = (kk + kk.adjoint()).eval() / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> kk_eig(kk, Eigen::EigenvaluesOnly);
  report.trace_non_increasing = kk_eig.eigenvalues().maxCoeff() <= 1.0 + tol;
  return report;
}

double avg_gate_fidelity(const QuantumChannel& ch) {
  const double d = ch.dim();
  const Complex tr = ch.superop().trace();
  if (std::abs(tr.imag()) > 1e-12 * d * d) {
    throw InvariantError("avg_gate_fidelity: superoperator trace has imaginary part " +
                         std::to_string(tr.imag()));
  }
  return (d + tr.real()) / (d * (d + 1.0));
}

double quality_factor(const QuantumChannel& ch) {
  const double d = ch.dim();
  return (d * avg_gate_fidelity(ch) - 1.0) / (d - 1.0);
}

double fidelity_from_quality_factor(double p, int d) { return p + (1.0 - p) / d; }

QuantumChannel full_pauli_twirl(const QuantumChannel& ch) {
  const int n = require_qubits(ch.dim(), "full_pauli_twirl");
  const auto paulis = pauli_basis(n);
  ComplexMatrix acc = ComplexMatrix::Zero(ch.superop().rows(), ch.superop().cols());
  for (const auto& p : paulis) {
    const ComplexMatrix c = conjugation_superop(p);
    acc += c * ch.superop() * c;
  }
  acc /= static_cast<double>(paulis.size());
  return QuantumChannel::from_superop(std::move(acc), ch.dims());
}

QuantumChannel s_pauli_twirl(const QuantumChannel& ch, const CompositeDims& dims) {
  dims.validate();
  if (dims.total() != ch.dim()) {
    throw DimensionError("s_pauli_twirl: dims (" + std::to_string(dims.env) + ", " +
                         std::to_string(dims.sys) + ") inconsistent with channel dimension " +
                         std::to_string(ch.dim()));
  }
  const int n = require_qubits(dims.sys, "s_pauli_twirl");
  const auto paulis = pauli_basis(n);
  ComplexMatrix acc = ComplexMatrix::Zero(ch.superop().rows(), ch.superop().cols());
  for (const auto& p : paulis) {
    const ComplexMatrix c = conjugation_superop(embed_sys_operator(p, dims));
    acc += c * ch.superop() * c;
  }
  acc /= static_cast<double>(paulis.size());
  return QuantumChannel::from_superop(std::move(acc), dims);
}

QuantumChannel s_pauli_twirl(const QuantumChannel& ch) { return s_pauli_twirl(ch, ch.dims()); }

QuantumChannel s_pauli_offdiagonal_part(const QuantumChannel& ch) {
  return QuantumChannel::from_superop(ch.superop() - s_pauli_twirl(ch).superop(), ch.dims());
}

QuantumChannel g_twisted_twirl(const QuantumChannel& noisy_gate, const ComplexMatrix& ideal_gate) {
  const CompositeDims& dims = noisy_gate.dims();
  if (ideal_gate.rows() != dims.sys || ideal_gate.cols() != dims.sys) {
    throw DimensionError("g_twisted_twirl: ideal gate does not act on the system");
  }
  if (!is_unitary(ideal_gate, kDefaultTolerance)) {
    throw std::invalid_argument("g_twisted_twirl: ideal gate is not unitary");
  }
  const int n = require_qubits(dims.sys, "g_twisted_twirl");
  const auto paulis = pauli_basis(n);
  ComplexMatrix acc = ComplexMatrix::Zero(noisy_gate.superop().rows(), noisy_gate.superop().cols());
  for (const auto& p : paulis) {
    const ComplexMatrix outer = conjugation_superop(embed_sys_operator(p, dims));
    const ComplexMatrix twisted = ideal_gate.adjoint() * p * ideal_gate;
    const ComplexMatrix inner = conjugation_superop(embed_sys_operator(twisted, dims));
    acc += outer * noisy_gate.superop() * inner;
  }
  acc /= static_cast<double>(paulis.size());
  return QuantumChannel::from_superop(std::move(acc), dims);
}

PauliErrorRates pauli_error_rates(const QuantumChannel& ch, PauliRateMode mode) {
  if (ch.dims().env != 1) {
    throw DimensionError("pauli_error_rates: channel must act on S alone");
  }
  const int d = ch.dim();
  const int n = require_qubits(d, "pauli_error_rates");
  const auto paulis = pauli_basis(n);
  PauliErrorRates out;
  out.labels = pauli_labels(n);
  out.rates.assign(paulis.size(), 0.0);

  if (mode == PauliRateMode::FromChi) {
    for (const auto& k : ch.kraus()) {
      for (size_t i = 0; i < paulis.size(); ++i) {
        const Complex alpha = (paulis[i] * k).trace() / static_cast<double>(d);
        out.rates[i] += std::norm(alpha);
      }
    }
    return out;
  }

  const ComplexMatrix r = ch.ptm();
  const ComplexMatrix off = r - ComplexMatrix(r.diagonal().asDiagonal());
  if (off.norm() > kDefaultTolerance) {
    throw StructureError("pauli_error_rates: PTM is not diagonal (off-diagonal norm " +
                         std::to_string(off.norm()) + "); channel is not a Pauli channel");
  }
  // Walsh-Hadamard inversion: lambda_j = sum_i s(i, j) p_i with s = +-1 for
  // commuting / anticommuting pairs.
  for (size_t i = 0; i < paulis.size(); ++i) {
    double acc = 0.0;
    for (size_t j = 0; j < paulis.size(); ++j) {
      const bool commute =
          (paulis[i] * paulis[j] - paulis[j] * paulis[i]).norm() < kDefaultTolerance;
      acc += (commute ? 1.0 : -1.0) * r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real();
    }
    out.rates[i] = acc / static_cast<double>(paulis.size());
  }
  return out;
}

double unitarity(const QuantumChannel& ch) {
  if (ch.dims().env != 1) {
    throw DimensionError("unitarity: channel must act on S alone");
  }
  const ComplexMatrix r = ch.ptm();
  const Eigen::Index n = r.rows() - 1;
  return r.bottomRightCorner(n, n).squaredNorm() / static_cast<double>(n);
}

QuantumChannel reduce_to_system(const QuantumChannel& ch, const ComplexMatrix& rho_env) {
  const CompositeDims& dims = ch.dims();
  if (rho_env.rows() != dims.env || rho_env.cols() != dims.env) {
    throw DimensionError("reduce_to_system: environment state has wrong dimension");
  }
  const int ds = dims.sys;
  ComplexMatrix s(ds * ds, ds * ds);
  for (int a = 0; a < ds; ++a) {
    for (int b = 0; b < ds; ++b) {
      ComplexMatrix unit = ComplexMatrix::Zero(ds, ds);
      unit(a, b) = 1.0;
      const ComplexMatrix out = partial_trace(ch.apply(kron(rho_env, unit)), dims, Subsystem::Env);
      s.col(a * ds + b) = vectorize(out);
    }
  }
  return QuantumChannel::from_superop(std::move(s), plain_dims(ds));
}

void write_ptm_csv(std::ostream& out, const ComplexMatrix& ptm) {
  const int n = qubit_count(static_cast<int>(std::llround(std::sqrt(static_cast<double>(ptm.rows())))));
  const auto labels = pauli_labels(n);
  for (size_t i = 0; i < labels.size(); ++i) {
    out << (i ? "," : "") << labels[i];
  }
  out << "\n";
  char buf[40];
  for (Eigen::Index i = 0; i < ptm.rows(); ++i) {
    for (Eigen::Index j = 0; j < ptm.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ptm(i, j).real());
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

QuantumChannel depolarizing_channel(double lambda, int d) {
  // lambda * rho + (1 - lambda) tr(rho) I / d
  const CompositeDims dims = plain_dims(d);
  ComplexMatrix s = lambda * ComplexMatrix::Identity(d * d, d * d);
  const ComplexVector id = vectorize(ComplexMatrix::Identity(d, d));
  s += (1.0 - lambda) / d * id * id.adjoint();
  return QuantumChannel::from_superop(std::move(s), dims);
}

QuantumChannel amplitude_damping_channel(double gamma) {
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, std::sqrt(1.0 - gamma);
  k1 << 0, std::sqrt(gamma), 0, 0;
  return QuantumChannel::from_kraus({k0, k1}, plain_dims(2));
}

QuantumChannel dephasing_channel(double prob) {
  const auto& p = single_qubit_paulis();
  return QuantumChannel::from_kraus({std::sqrt(1.0 - prob) * p[0], std::sqrt(prob) * p[3]},
                                    plain_dims(2));
}

}  // namespace rbmk
