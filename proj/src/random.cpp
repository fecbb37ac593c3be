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

#include "rbmk/random.hpp"

#include <Eigen/QR>

#include "rbmk/errors.hpp"

namespace rbmk {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

int uniform_index(std::uint64_t hash, int n) {
  const auto wide = static_cast<unsigned __int128>(hash) * static_cast<unsigned __int128>(n);
  return static_cast<int>(wide >> 64);
}

ComplexMatrix random_complex_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

ComplexMatrix random_unitary(int d, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex_matrix(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution is Haar.
  for (int k = 0; k < d; ++k) {
    const Complex rkk = r(k, k);
    const double mag = std::abs(rkk);
    if (mag > 0.0) {
      q.col(k) *= rkk / mag;
    }
  }
  return q;
}

ComplexMatrix random_density_matrix(int d, std::mt19937_64& rng) {
  const ComplexMatrix g = random_complex_matrix(d, d, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

QuantumChannel random_cptp(const CompositeDims& dims, int n_kraus, std::mt19937_64& rng) {
  dims.validate();
  if (n_kraus < 1) {
    throw std::invalid_argument("random_cptp: need at least one Kraus operator");
  }
  const int d = dims.total();
  const ComplexMatrix u = random_unitary(d * n_kraus, rng);
  // The first d columns form an isometry V; K_k are its d x d row blocks.
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(static_cast<size_t>(n_kraus));
  for (int k = 0; k < n_kraus; ++k) {
    kraus.push_back(u.block(k * d, 0, d, d));
  }
  return QuantumChannel::from_kraus(std::move(kraus), dims);
}

}  // namespace rbmk
