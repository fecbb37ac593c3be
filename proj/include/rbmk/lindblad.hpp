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

#include <vector>

#include "rbmk/channels.hpp"
#include "rbmk/tensor.hpp"

namespace rbmk {

// Where a dissipator acts. S and E operators are stored on their own factor
// (dS x dS, dE x dE); SE operators act on the full space.
enum class Locality { S, E, SE };

struct Dissipator {
  ComplexMatrix op;
  double rate = 0.0;
  Locality locality = Locality::S;
};

struct LindbladGenerator {
  CompositeDims dims;
  ComplexMatrix hamiltonian;  // on E (x) S
  std::vector<Dissipator> dissipators;
  // Require tr[L_i L_j^dagger] = delta_ij for S-local operators rather than
  // only orthogonality.
  bool strict_orthonormal = false;

  // Sum of the S-local rates.
  double rate_trace() const;
  bool has_se_dissipators() const;
  // Dissipator operator lifted to the full space.
  ComplexMatrix full_operator(const Dissipator& d) const;
  // Throws StructureError naming the violated check.
  void validate() const;
};

enum class DissipatorNormalization { Bare, Orthonormal };

struct PaperModelParams {
  double j = 1.7;
  double hx = 1.47;
  double hy = -1.05;
  double gamma0 = 0.002;
  double gamma1 = 0.007;
  int taylor_order = kDefaultTaylorOrder;
  DissipatorNormalization normalization = DissipatorNormalization::Bare;
};

// Superoperator of rho -> L rho L^dagger - {L^dagger L, rho} / 2.
ComplexMatrix dissipator_superop(const ComplexMatrix& l);

// Superoperator of rho -> -i[H, rho].
ComplexMatrix hamiltonian_superop(const ComplexMatrix& h);

ComplexMatrix build_generator(const LindbladGenerator& gen);

// exp(t L) by truncated Taylor series. Throws std::invalid_argument for t < 0.
QuantumChannel propagator(const LindbladGenerator& gen, double t, int order = kDefaultTaylorOrder);

// H = J XX + hx (XI + IX) + hy (YI + IY) on E (x) S with S dissipators X and Z.
// In orthonormal mode the operators are X/sqrt(2), Z/sqrt(2) and the rates are
// doubled, which leaves the generator unchanged.
LindbladGenerator paper_two_qubit_model(const PaperModelParams& params);

}  // namespace rbmk
