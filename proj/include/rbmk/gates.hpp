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
#include <iosfwd>
#include <vector>

#include "rbmk/channels.hpp"
#include "rbmk/tensor.hpp"

namespace rbmk {

// The 24-element single-qubit Clifford group modulo phase, with element 0 the
// identity. Elements are enumerated breadth-first from {H, S} and each matrix
// is phase-fixed so that its first non-zero entry (row-major) is real positive.
class CliffordGroup {
 public:
  static constexpr int kOrder = 24;

  int size() const { return static_cast<int>(elements_.size()); }
  const ComplexMatrix& element(int i) const { return elements_.at(static_cast<size_t>(i)); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  // Index of element(a) * element(b).
  int multiply(int a, int b) const { return mul_[static_cast<size_t>(a * size() + b)]; }
  int inverse(int a) const { return inv_[static_cast<size_t>(a)]; }
  // Index of the element equal to u up to a global phase; -1 if none.
  int find(const ComplexMatrix& u, double tol = 1e-9) const;

 private:
  friend const CliffordGroup& clifford_group_1q();
  std::vector<ComplexMatrix> elements_;
  std::vector<int> mul_;
  std::vector<int> inv_;
};

const CliffordGroup& clifford_group_1q();

// Removes the global phase so that the first non-zero entry is real positive.
ComplexMatrix canonical_phase(const ComplexMatrix& u);

// Writes the canonical element list as JSON (index, re, im row-major).
void write_clifford_fixture(std::ostream& out);

struct RBSequence {
  int m = 0;
  std::vector<int> gates;  // g_1 .. g_m
  int undo = 0;            // g_{m+1}
};

// Gates are uniform over the Clifford group, drawn from counter_hash(seed, position).
RBSequence sample_rb_sequence(int m, std::uint64_t seed);
// Undo index for a given gate list, from the group tables.
int undo_index(const std::vector<int>& gates);

struct DecouplingGroup {
  std::vector<ComplexMatrix> elements;
  int eta() const { return static_cast<int>(elements.size()); }
  void validate() const;
};

// {I, X, Y, Z} on one qubit; tensor products of these on n qubits.
DecouplingGroup pauli_decoupling_group(int n_qubits = 1);

// Channel X -> (I_E (x) G) X (I_E (x) G)^dagger. Throws on non-unitary G.
QuantumChannel embed_on_se(const ComplexMatrix& gate, const CompositeDims& dims);

struct DecouplingReport {
  bool passed = false;
  double max_deviation = 0.0;
  int trials = 0;
};

// || (1/eta) sum_v (I (x) v) Z (I (x) v)^dagger - tr_S(Z)/dS (x) I ||_max
double decoupling_deviation(const DecouplingGroup& group, const CompositeDims& dims,
                            const ComplexMatrix& z);

DecouplingReport verify_universal_decoupling(const DecouplingGroup& group, const CompositeDims& dims,
                                             int trials, double tol, std::uint64_t seed = 1);

}  // namespace rbmk
