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
#include <random>

#include "rbmk/channels.hpp"
#include "rbmk/tensor.hpp"

namespace rbmk {

// Counter-based hashing: the output depends only on the key, so draws can be
// made in any order and from any thread.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);
// Maps a 64-bit hash onto [0, n) by multiply-high.
int uniform_index(std::uint64_t hash, int n);

// Test and experiment helpers (Ginibre / Haar based).
ComplexMatrix random_complex_matrix(int rows, int cols, std::mt19937_64& rng);
ComplexMatrix random_unitary(int d, std::mt19937_64& rng);
ComplexMatrix random_density_matrix(int d, std::mt19937_64& rng);
// Random CPTP map from a Haar-random isometry with `n_kraus` Kraus operators.
QuantumChannel random_cptp(const CompositeDims& dims, int n_kraus, std::mt19937_64& rng);

}  // namespace rbmk
