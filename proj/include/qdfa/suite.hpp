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

#ifndef QDFA_SUITE_HPP
#define QDFA_SUITE_HPP

#include <string>
#include <vector>

#include "qdfa/algebra.hpp"
#include "qdfa/channel.hpp"

namespace qdfa {

/// Corpus and invariant-battery configuration. The fault-injection knobs
/// exist for mutation sanity tests: each one must make at least one
/// invariant fail.
struct SuiteOptions {
  std::uint64_t seed = 1;
  std::vector<Index> dims = {2, 3, 4};
  int random_per_dim = 70;  // ~half Stinespring, rest block + composed
  int trials = 500;         // falsification trials per channel class
  Tolerances tol;
  bool flip_star_sign = false;                 // fault: X*Y -> -P(XY)
  std::optional<double> peripheral_tol_override;  // fault: e.g. 0.5
  std::optional<double> support_cutoff_override;  // fault: e.g. 1e6
};

struct InvariantResult {
  std::string name;
  std::string law;        // registered descriptive statement
  double worst_residual = 0.0;
  double bound = 0.0;
  bool passed = false;
  std::string witness;    // label/seed of the worst channel, when failing
};

/// Built-ins plus seeded random channels. Half the random corpus is built
/// from block constructions (unitary conjugation on a subspace composed
/// with a contraction of the rest) and compositions of built-ins with
/// random unitaries, because pure Stinespring channels almost surely have
/// peripheral spectrum {1} and under-test the algebra code.
std::vector<Channel> build_corpus(const SuiteOptions& opts);

/// Evaluate every registered invariant on every applicable corpus member;
/// qubit-only laws filter to d = 2. Results sorted by name. Failures are
/// results, not errors.
std::vector<InvariantResult> run_invariant_suite(const std::vector<Channel>& corpus,
                                                 const SuiteOptions& opts);

/// The registry of law names; the suite's own traceability check verifies
/// every result carries one of these.
const std::vector<std::pair<std::string, std::string>>& invariant_registry();

struct GoldenExpectation {
  std::string name;
  Index attr = 0, fix = 0, ce_dfa = 0, kernel = 0;
  std::optional<Index> dfa;
  bool faithful = false, peripherally_automorphic = false;
  AsymptoticClass cls = AsymptoticClass::generic;
};

/// The pinned golden fixtures with their expected dims and flags.
std::vector<std::pair<Channel, GoldenExpectation>> golden_fixtures(const Tolerances& tol = {});

/// Deterministic JSON for the suite run (plus a generated_at timestamp that
/// comparisons must exclude).
std::string suite_report_json(const std::vector<InvariantResult>& results,
                              const SuiteOptions& opts);

}  // namespace qdfa

#endif  // QDFA_SUITE_HPP
