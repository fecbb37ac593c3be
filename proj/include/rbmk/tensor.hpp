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

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rbmk {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr int kDefaultTaylorOrder = 10;

// Dimensions of a composite environment-system space.
//
// Composite spaces are always ordered environment first, i.e. the joint
// basis vector |e>|s> has index e * sys + s. Every partial trace, embedding
// and superoperator reshuffle in the library goes through index() below.
struct CompositeDims {
  int env = 1;
  int sys = 2;

  constexpr int total() const { return env * sys; }
  constexpr int index(int e, int s) const { return e * sys + s; }

  // Throws DimensionError unless env >= 1 and sys >= 2 is a power of two.
  void validate() const;

  friend bool operator==(const CompositeDims&, const CompositeDims&) = default;
};

enum class Subsystem { Env, Sys };

// Row-stacking vectorization: vec(|i><j|) = |ij>, i.e. vec(A)[i*d + j] = A(i, j).
ComplexVector vectorize(const ComplexMatrix& op);
ComplexMatrix devectorize(const ComplexVector& v);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Traces out `traced` from an operator on E (x) S.
ComplexMatrix partial_trace(const ComplexMatrix& op, const CompositeDims& dims, Subsystem traced);

// sum_mu K_mu (x) conj(K_mu), so that S vec(rho) = vec(sum K rho K^dagger).
ComplexMatrix superop_from_kraus(std::span<const ComplexMatrix> kraus);

// Superoperator of X -> U X U^dagger.
ComplexMatrix conjugation_superop(const ComplexMatrix& u);

// Rectangular (sys^2 x total^2) map with T vec(A) = vec(tr_E A).
ComplexMatrix env_trace_superop(const CompositeDims& dims);

// sum_{k=0}^{order} (t M)^k / k!
ComplexMatrix expm_truncated(const ComplexMatrix& m, double t, int order = kDefaultTaylorOrder);

// <<A|B>> = vec(A)^dagger vec(B) = tr(A^dagger B).
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol = kDefaultTolerance);

// I_E (x) G on the composite space.
ComplexMatrix embed_sys_operator(const ComplexMatrix& g, const CompositeDims& dims);
// W (x) I_S on the composite space.
ComplexMatrix embed_env_operator(const ComplexMatrix& w, const CompositeDims& dims);

// Single-qubit Paulis in (I, X, Y, Z) order.
const std::vector<ComplexMatrix>& single_qubit_paulis();
// n-qubit Pauli strings, lexicographic over tensor factors with (I, X, Y, Z)
// per factor, leftmost factor most significant.
std::vector<ComplexMatrix> pauli_basis(int n_qubits);
std::vector<std::string> pauli_labels(int n_qubits);

// log2(d) for powers of two, -1 otherwise.
int qubit_count(int dim);

bool is_unitary(const ComplexMatrix& u, double tol = kDefaultTolerance);
bool is_hermitian(const ComplexMatrix& h, double tol = kDefaultTolerance);

// |i><i| on a d-dimensional space.
ComplexMatrix basis_projector(int dim, int i);

}  // namespace rbmk
