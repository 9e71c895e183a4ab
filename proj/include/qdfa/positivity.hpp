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

#ifndef QDFA_POSITIVITY_HPP
#define QDFA_POSITIVITY_HPP

#include <optional>

#include "qdfa/channel.hpp"
#include "qdfa/spectral.hpp"

namespace qdfa {

/// CP certification plus randomized falsification results. Absence of a
/// violation is not a certification; `resolved` distinguishes the cases.
struct PositivityReport {
  bool is_cp = false;
  double choi_min_eigenvalue = 0.0;
  struct Violation {
    CMatrix witness;      // the X that produced the negative eigenvalue
    double min_eigenvalue = 0.0;
  };
  std::optional<Violation> schwarz_violation;
  std::optional<Violation> star_schwarz_violation;
  int trials = 0;
  std::uint64_t seed = 0;
  /// "cp-certified", "falsified-schwarz", or "unresolved".
  std::string classification;
};

/// Choi PSD test (sufficient for the Schwarz property).
PositivityReport certify_cp(const Channel& ch);

/// Sample seeded random probes (Gaussian, rank-one, Hermitian, unitary) and
/// record the most negative eigenvalue of Phi(X^dag X) - Phi(X)^dag Phi(X).
/// A violation below -tol.psd is re-verified before being reported.
PositivityReport falsify_schwarz(const Channel& ch, int trials, std::uint64_t seed);

/// Same protocol for Phi(X^dag * X) - Phi(X)^dag * Phi(X) with the
/// Choi-Effros product of the channel's own peripheral projector.
PositivityReport falsify_star_schwarz(const Channel& ch, const PeripheralData& pd, int trials,
                                      std::uint64_t seed);

}  // namespace qdfa

#endif  // QDFA_POSITIVITY_HPP
