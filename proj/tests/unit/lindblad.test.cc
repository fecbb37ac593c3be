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

#include <gtest/gtest.h>

#include <cmath>

#include "rbmk/errors.hpp"
#include "test_util.hpp"

using namespace rbmk;
using namespace rbmk::testing;

namespace {

LindbladGenerator qubit_generator(ComplexMatrix h, std::vector<Dissipator> ds) {
  LindbladGenerator gen;
  gen.dims = plain_dims(2);
  gen.hamiltonian = std::move(h);
  gen.dissipators = std::move(ds);
  return gen;
}

}  // namespace

TEST(lindblad, empty_generator_is_zero) {
  auto gen = qubit_generator(ComplexMatrix::Zero(2, 2), {});
  ASSERT_EQ(build_generator(gen), ComplexMatrix::Zero(4, 4));

  PaperModelParams zero;
  zero.j = zero.hx = zero.hy = zero.gamma0 = zero.gamma1 = 0;
  ASSERT_EQ(build_generator(paper_two_qubit_model(zero)), ComplexMatrix::Zero(16, 16));
}

TEST(lindblad, dephasing_closed_form) {
  const double gamma = 0.37;
  const double t = 0.8;
  auto gen = qubit_generator(ComplexMatrix::Zero(2, 2), {{pauli(3), gamma, Locality::S}});
  auto lam = propagator(gen, t, 30);
  ComplexMatrix rho = ComplexMatrix::Constant(2, 2, 0.5);
  ComplexMatrix out = lam.apply(rho);
  ASSERT_NEAR(std::abs(out(0, 1)), 0.5 * std::exp(-2 * gamma * t), 1e-10);
  ASSERT_NEAR(out(0, 0).real(), 0.5, 1e-12);

  const double q = (1 - std::exp(-2 * gamma * t)) / 2;
  ASSERT_TRUE(approx_equal(lam.superop(), dephasing_channel(q).superop(), 1e-10));
}

TEST(lindblad, hamiltonian_superop_is_commutator) {
  std::mt19937_64 rng(51);
  ComplexMatrix a = random_complex_matrix(3, 3, rng);
  ComplexMatrix h = a + a.adjoint();
  ComplexMatrix rho = random_density_matrix(3, rng);
  ComplexMatrix direct = -Complex(0, 1) * (h * rho - rho * h);
  ASSERT_TRUE(approx_equal(devectorize(hamiltonian_superop(h) * vectorize(rho)), direct, 1e-12));

  ComplexMatrix l = random_complex_matrix(3, 3, rng);
  ComplexMatrix want = l * rho * l.adjoint() - 0.5 * (l.adjoint() * l * rho + rho * l.adjoint() * l);
  ASSERT_TRUE(approx_equal(devectorize(dissipator_superop(l) * vectorize(rho)), want, 1e-12));
}

TEST(lindblad, paper_model) {
  auto gen = paper_two_qubit_model({});
  ASSERT_EQ(gen.dims, (CompositeDims{2, 2}));
  ASSERT_EQ(gen.hamiltonian.rows(), 4);
  ASSERT_TRUE(is_hermitian(gen.hamiltonian, 1e-15));
  ASSERT_NEAR(gen.rate_trace(), 0.009, 1e-15);
  ASSERT_FALSE(gen.has_se_dissipators());

  // E-first ordering: XI acts on the environment.
  const auto& p = single_qubit_paulis();
  ComplexMatrix h = 1.7 * kron(p[1], p[1]) + 1.47 * (kron(p[1], p[0]) + kron(p[0], p[1])) -
                    1.05 * (kron(p[2], p[0]) + kron(p[0], p[2]));
  ASSERT_TRUE(approx_equal(gen.hamiltonian, h, 1e-15));

  ComplexMatrix l = build_generator(gen);
  ASSERT_EQ(l.rows(), 16);
  ComplexVector id = vectorize(ComplexMatrix::Identity(4, 4));
  ASSERT_LT((id.adjoint() * l).norm(), 1e-12);
}

TEST(lindblad, normalizations_give_same_generator) {
  PaperModelParams ortho;
  ortho.normalization = DissipatorNormalization::Orthonormal;
  auto a = paper_two_qubit_model({});
  auto b = paper_two_qubit_model(ortho);
  ASSERT_TRUE(approx_equal(build_generator(a), build_generator(b), 1e-14));
  ASSERT_NEAR(b.rate_trace(), 0.018, 1e-15);
  ASSERT_TRUE(b.strict_orthonormal);
}

TEST(lindblad, validation) {
  auto non_hermitian = qubit_generator(pauli(1) * Complex(0, 1), {});
  ASSERT_THROW(build_generator(non_hermitian), StructureError);
  auto negative = qubit_generator(ComplexMatrix::Zero(2, 2), {{pauli(1), -0.1, Locality::S}});
  ASSERT_THROW(negative.validate(), StructureError);
  auto traceful = qubit_generator(ComplexMatrix::Zero(2, 2), {{ComplexMatrix::Identity(2, 2), 0.1, Locality::S}});
  ASSERT_THROW(traceful.validate(), StructureError);
  auto parallel = qubit_generator(ComplexMatrix::Zero(2, 2), {{pauli(1), 0.1, Locality::S},
                                                               {pauli(1) * 2.0, 0.1, Locality::S}});
  ASSERT_THROW(parallel.validate(), StructureError);
  auto strict = qubit_generator(ComplexMatrix::Zero(2, 2), {{pauli(1), 0.1, Locality::S}});
  ASSERT_NO_THROW(strict.validate());
  strict.strict_orthonormal = true;
  ASSERT_THROW(strict.validate(), StructureError);
  ASSERT_THROW(propagator(paper_two_qubit_model({}), -0.1), std::invalid_argument);
}

TEST(lindblad, propagator) {
  auto gen = paper_two_qubit_model({});
  ASSERT_TRUE(approx_equal(propagator(gen, 0.0).superop(), ComplexMatrix::Identity(16, 16), 0));

  auto lam = propagator(gen, 0.03);
  auto rep = validate_channel(lam, 1e-8);
  ASSERT_TRUE(rep.cp);
  ASSERT_TRUE(rep.tp);
  ComplexVector id = vectorize(ComplexMatrix::Identity(4, 4));
  ASSERT_LT((id.adjoint() * lam.superop() - id.adjoint()).norm(), 1e-10);

  // Semigroup property up to the order-10 truncation error, which at t = 0.06
  // is about (0.06 ||L||)^11 / 11!.
  const double norm = build_generator(gen).operatorNorm();
  const double bound = 2 * std::pow(0.06 * norm, 11) / std::tgamma(12.0) * std::sqrt(16.0);
  auto l2 = propagator(gen, 0.06);
  ASSERT_LT(frobenius_distance(l2.superop(), lam.superop() * lam.superop()), bound);
  auto exact2 = propagator(gen, 0.06, 30);
  auto exact1 = propagator(gen, 0.03, 30);
  ASSERT_LT(frobenius_distance(exact2.superop(), exact1.superop() * exact1.superop()), 1e-13);
}

TEST(lindblad, semigroup_on_random_generators) {
  std::mt19937_64 rng(53);
  for (int k = 0; k < 5; ++k) {
    ComplexMatrix a = random_complex_matrix(4, 4, rng);
    LindbladGenerator gen;
    gen.dims = {2, 2};
    gen.hamiltonian = (a + a.adjoint()) / 4.0;
    ComplexMatrix l = random_complex_matrix(4, 4, rng);
    l -= l.trace() / 4.0 * ComplexMatrix::Identity(4, 4);
    gen.dissipators.push_back({l, 0.05, Locality::SE});
    auto one = propagator(gen, 0.01, 12);
    auto two = propagator(gen, 0.02, 12);
    ASSERT_LT(frobenius_distance(two.superop(), one.superop() * one.superop()), 1e-12);
  }
}
