// Copyright 2026 The qdfa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDFA_RNG_HPP
#define QDFA_RNG_HPP

#include <cstdint>
#include <random>

#include "qdfa/types.hpp"

namespace qdfa {

/// Deterministic RNG with explicit uniform/Gaussian transforms.
///
/// mt19937_64 output is pinned by the standard; the [0,1) and Box-Muller
/// transforms are spelled out here so that streams do not depend on the
/// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  /// Independent child stream. Used for per-trial seed splitting.
  Rng child(std::uint64_t salt) const { return Rng(mix(seed_, salt)); }

  std::uint64_t seed() const { return seed_; }

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double gauss();

  Complex cgauss() { double re = gauss(); return {re, gauss()}; }

  CMatrix gaussian_matrix(Index rows, Index cols);
  CMatrix hermitian_matrix(Index d);
  CMatrix psd_matrix(Index d);
  CMatrix rank_one(Index d);
  CVector unit_vector(Index d);

  /// Unitary from QR of a Gaussian matrix with the R-diagonal phase fix.
  CMatrix haar_unitary(Index d);

  /// rows x cols isometry (V^dag V = I), rows >= cols.
  CMatrix isometry(Index rows, Index cols);

 private:
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qdfa

#endif  // QDFA_RNG_HPP
