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

#include "rbmk/lindblad.hpp"

#include <cmath>
#include <string>

#include "rbmk/errors.hpp"

namespace rbmk {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kOrthoTolerance = 1e-10;

}  // namespace

double LindbladGenerator::rate_trace() const {
  double total = 0.0;
  for (const auto& d : dissipators) {
    if (d.locality == Locality::S) {
      total += d.rate;
    }
  }
  return total;
}

bool LindbladGenerator::has_se_dissipators() const {
  for (const auto& d : dissipators) {
    if (d.locality == Locality::SE) {
      return true;
    }
  }
  return false;
}

ComplexMatrix LindbladGenerator::full_operator(const Dissipator& d) const {
  switch (d.locality) {
    case Locality::S:
      return embed_sys_operator(d.op, dims);
    case Locality::E:
      return embed_env_operator(d.op, dims);
    case Locality::SE:
      if (d.op.rows() != dims.total() || d.op.cols() != dims.total()) {
        throw DimensionError("SE dissipator does not act on the full space");
      }
      return d.op;
  }
  throw StructureError("unknown dissipator locality");
}

void LindbladGenerator::validate() const {
  dims.validate();
  const int d = dims.total();
  if (hamiltonian.rows() != d || hamiltonian.cols() != d) {
    throw DimensionError("Hamiltonian is " + std::to_string(hamiltonian.rows()) + "x" +
                         std::to_string(hamiltonian.cols()) + ", expected " + std::to_string(d) +
                         "x" + std::to_string(d));
  }
  if (!is_hermitian(hamiltonian, kHermitianTolerance)) {
    throw StructureError("Hamiltonian is not Hermitian");
  }
  std::vector<const ComplexMatrix*> s_ops;
  for (size_t k = 0; k < dissipators.size(); ++k) {
    const auto& dk = dissipators[k];
    if (!(dk.rate >= 0.0)) {
      throw StructureError("dissipator " + std::to_string(k) + " has negative rate");
    }
    full_operator(dk);  // shape check
    if (std::abs(dk.op.trace()) > kOrthoTolerance) {
      throw StructureError("dissipator " + std::to_string(k) + " is not traceless");
    }
    if (dk.locality == Locality::S) {
      s_ops.push_back(&dk.op);
    }
  }
  for (size_t a = 0; a < s_ops.size(); ++a) {
    for (size_t b = a; b < s_ops.size(); ++b) {
      const Complex overlap = hs_inner(*s_ops[b], *s_ops[a]);  // tr[L_a L_b^dagger]
      if (a != b && std::abs(overlap) > kOrthoTolerance) {
        throw StructureError("S dissipators " + std::to_string(a) + " and " + std::to_string(b) +
                             " are not orthogonal");
      }
      if (a == b && strict_orthonormal && std::abs(overlap - 1.0) > kOrthoTolerance) {
        throw StructureError("S dissipator " + std::to_string(a) + " is not normalized");
      }
    }
  }
}

ComplexMatrix dissipator_superop(const ComplexMatrix& l) {
  const Eigen::Index d = l.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix ldl = l.adjoint() * l;
  // vec(A X B) = (A (x) B^T) vec(X) for row stacking.
  return kron(l, l.conjugate()) - 0.5 * kron(ldl, id) - 0.5 * kron(id, ldl.transpose());
}

ComplexMatrix hamiltonian_superop(const ComplexMatrix& h) {
  const Eigen::Index d = h.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const Complex i(0.0, 1.0);
  return -i * (kron(h, id) - kron(id, h.transpose()));
}

ComplexMatrix build_generator(const LindbladGenerator& gen) {
  gen.validate();
  ComplexMatrix l = hamiltonian_superop(gen.hamiltonian);
  for (const auto& d : gen.dissipators) {
    l += d.rate * dissipator_superop(gen.full_operator(d));
  }
  return l;
}

QuantumChannel propagator(const LindbladGenerator& gen, double t, int order) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("propagator: time must be non-negative, got " + std::to_string(t));
  }
  return QuantumChannel::from_superop(expm_truncated(build_generator(gen), t, order), gen.dims);
}

LindbladGenerator paper_two_qubit_model(const PaperModelParams& params) {
  if (params.taylor_order < 1) {
    throw std::invalid_argument("taylor_order must be >= 1");
  }
  const auto& p = single_qubit_paulis();
  LindbladGenerator gen;
  gen.dims = CompositeDims{2, 2};
  gen.hamiltonian = params.j * kron(p[1], p[1]) + params.hx * (kron(p[1], p[0]) + kron(p[0], p[1])) +
                    params.hy * (kron(p[2], p[0]) + kron(p[0], p[2]));
  double scale = 1.0;
  double rate_factor = 1.0;
  if (params.normalization == DissipatorNormalization::Orthonormal) {
    scale = 1.0 / std::sqrt(2.0);
    rate_factor = 2.0;
    gen.strict_orthonormal = true;
  }
  gen.dissipators.push_back({scale * p[1], rate_factor * params.gamma0, Locality::S});
  gen.dissipators.push_back({scale * p[3], rate_factor * params.gamma1, Locality::S});
  return gen;
}

}  // namespace rbmk
