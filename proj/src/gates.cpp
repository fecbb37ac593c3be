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

#include "rbmk/gates.hpp"

#include <cmath>
#include <deque>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "rbmk/errors.hpp"
#include "rbmk/random.hpp"

namespace rbmk {

ComplexMatrix canonical_phase(const ComplexMatrix& u) {
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      const double mag = std::abs(u(i, j));
      if (mag > 1e-9) {
        return u * (std::conj(u(i, j)) / mag);
      }
    }
  }
  return u;
}

int CliffordGroup::find(const ComplexMatrix& u, double tol) const {
  const ComplexMatrix c = canonical_phase(u);
  for (int i = 0; i < size(); ++i) {
    if (approx_equal(elements_[static_cast<size_t>(i)], c, tol)) {
      return i;
    }
  }
  return -1;
}

const CliffordGroup& clifford_group_1q() {
  static const CliffordGroup group = [] {
    CliffordGroup g;
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix h(2, 2), s(2, 2);
    h << r, r, r, -r;
    s << 1, 0, 0, Complex(0.0, 1.0);
    const std::vector<ComplexMatrix> generators{h, s};

    g.elements_.push_back(ComplexMatrix::Identity(2, 2));
    std::deque<int> frontier{0};
    while (!frontier.empty()) {
      const int cur = frontier.front();
      frontier.pop_front();
      for (const auto& gen : generators) {
        const ComplexMatrix next = canonical_phase(gen * g.elements_[static_cast<size_t>(cur)]);
        if (g.find(next) < 0) {
          g.elements_.push_back(next);
          frontier.push_back(g.size() - 1);
        }
      }
    }
    if (g.size() != CliffordGroup::kOrder) {
      throw InvariantError("Clifford enumeration produced " + std::to_string(g.size()) +
                           " elements");
    }
    const int n = g.size();
    g.mul_.assign(static_cast<size_t>(n * n), -1);
    g.inv_.assign(static_cast<size_t>(n), -1);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const int c = g.find(g.elements_[static_cast<size_t>(a)] * g.elements_[static_cast<size_t>(b)]);
        if (c < 0) {
          throw InvariantError("Clifford group not closed under multiplication");
        }
        g.mul_[static_cast<size_t>(a * n + b)] = c;
        if (c == 0) {
          g.inv_[static_cast<size_t>(a)] = b;
        }
      }
    }
    return g;
  }();
  return group;
}

void write_clifford_fixture(std::ostream& out) {
  const auto& group = clifford_group_1q();
  nlohmann::ordered_json doc;
  doc["group"] = "clifford_1q";
  doc["phase_convention"] = "first nonzero entry (row-major) real positive";
  doc["generators"] = {"H", "S"};
  nlohmann::ordered_json elems = nlohmann::ordered_json::array();
  for (int i = 0; i < group.size(); ++i) {
    const auto& u = group.element(i);
    nlohmann::ordered_json re = nlohmann::ordered_json::array();
    nlohmann::ordered_json im = nlohmann::ordered_json::array();
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        // Round away floating-point dust so the fixture is stable.
        re.push_back(std::round(u(r, c).real() * 1e15) / 1e15);
        im.push_back(std::round(u(r, c).imag() * 1e15) / 1e15);
      }
    }
    elems.push_back({{"index", i}, {"inverse", group.inverse(i)}, {"re", re}, {"im", im}});
  }
  doc["elements"] = elems;
  out << doc.dump(2) << "\n";
}

int undo_index(const std::vector<int>& gates) {
  const auto& group = clifford_group_1q();
  int total = 0;
  for (const int g : gates) {
    total = group.multiply(g, total);
  }
  return group.inverse(total);
}

RBSequence sample_rb_sequence(int m, std::uint64_t seed) {
  if (m < 1) {
    throw std::invalid_argument("sample_rb_sequence: m must be >= 1, got " + std::to_string(m));
  }
  RBSequence seq;
  seq.m = m;
  seq.gates.reserve(static_cast<size_t>(m));
  for (int k = 0; k < m; ++k) {
    seq.gates.push_back(uniform_index(counter_hash(seed, static_cast<std::uint64_t>(k)), CliffordGroup::kOrder));
  }
  seq.undo = undo_index(seq.gates);
  return seq;
}

void DecouplingGroup::validate() const {
  if (elements.empty()) {
    throw StructureError("decoupling group is empty");
  }
  const auto d = elements.front().rows();
  for (const auto& v : elements) {
    if (v.rows() != d || v.cols() != d) {
      throw DimensionError("decoupling group elements differ in dimension");
    }
    if (!is_unitary(v, 1e-12)) {
      throw StructureError("decoupling group element is not unitary");
    }
  }
}

DecouplingGroup pauli_decoupling_group(int n_qubits) {
  return DecouplingGroup{pauli_basis(n_qubits)};
}

QuantumChannel embed_on_se(const ComplexMatrix& gate, const CompositeDims& dims) {
  if (!is_unitary(gate, kDefaultTolerance)) {
    throw std::invalid_argument("embed_on_se: gate is not unitary");
  }
  return QuantumChannel::unitary(embed_sys_operator(gate, dims), dims);
}

double decoupling_deviation(const DecouplingGroup& group, const CompositeDims& dims,
                            const ComplexMatrix& z) {
  group.validate();
  ComplexMatrix avg = ComplexMatrix::Zero(dims.total(), dims.total());
  for (const auto& v : group.elements) {
    const ComplexMatrix u = embed_sys_operator(v, dims);
    avg += u * z * u.adjoint();
  }
  avg /= static_cast<double>(group.eta());
  const ComplexMatrix w = partial_trace(z, dims, Subsystem::Sys) / static_cast<double>(dims.sys);
  return (avg - embed_env_operator(w, dims)).cwiseAbs().maxCoeff();
}

DecouplingReport verify_universal_decoupling(const DecouplingGroup& group, const CompositeDims& dims,
                                             int trials, double tol, std::uint64_t seed) {
  if (trials < 1) {
    throw std::invalid_argument("verify_universal_decoupling: trials must be >= 1");
  }
  std::mt19937_64 rng(seed);
  DecouplingReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    const ComplexMatrix z = random_complex_matrix(dims.total(), dims.total(), rng);
    report.max_deviation = std::max(report.max_deviation, decoupling_deviation(group, dims, z));
  }
  report.passed = report.max_deviation < tol;
  return report;
}

}  // namespace rbmk
