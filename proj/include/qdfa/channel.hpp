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

#ifndef QDFA_CHANNEL_HPP
#define QDFA_CHANNEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "qdfa/linalg.hpp"
#include "qdfa/types.hpp"

namespace qdfa {

enum class Picture { heisenberg, schrodinger };
enum class Representation { kraus, superop, choi };

std::string to_string(Picture p);
std::string to_string(Representation r);
Picture picture_from_string(const std::string& s);
Representation representation_from_string(const std::string& s);

struct ValidationReport {
  double unitality_residual = 0.0;   // ||Phi(I) - I|| on the Heisenberg side
  double hermiticity_residual = 0.0; // ||C - C^dag|| of the Choi matrix
  double choi_min_eigenvalue = 0.0;  // of the Hermitian part of the Choi matrix
  bool is_ucp = false;
};

/// A linear map on d x d matrices held in up to three interconvertible
/// representations. Kraus lists follow the picture: Heisenberg maps act as
/// X -> sum_i K_i^dag X K_i (unitality sum_i K_i^dag K_i = I), Schrodinger
/// maps as rho -> sum_i K_i rho K_i^dag. Superoperators use the
/// column-stacking vec convention.
///
/// Channels are immutable after construction; all representations are
/// materialized eagerly (Kraus only when the map is CP), so concurrent use
/// is unrestricted.
class Channel {
 public:
  /// Empty (dim-0) channel; useful only as a placeholder to assign over.
  Channel() = default;

  static Channel from_kraus(std::vector<CMatrix> kraus, Picture picture, std::string label,
                            const Tolerances& tol = {}, bool permissive = false);
  static Channel from_superop(CMatrix superop, Picture picture, std::string label,
                              const Tolerances& tol = {}, bool permissive = false);
  static Channel from_choi(CMatrix choi, Picture picture, std::string label,
                           const Tolerances& tol = {}, bool permissive = false);

  Index dim() const { return dim_; }
  Picture picture() const { return picture_; }
  const std::string& label() const { return label_; }
  const Tolerances& tolerances() const { return tol_; }
  bool permissive() const { return permissive_; }
  const ValidationReport& validation() const { return validation_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Superoperator of the map in its stored picture.
  const CMatrix& superop_matrix() const { return superop_; }

  /// Choi matrix of the map in its stored picture.
  const CMatrix& choi_matrix() const { return choi_; }

  bool has_kraus() const { return kraus_.has_value(); }
  const std::vector<CMatrix>& kraus_ops() const;

  /// Superoperator of the Heisenberg-picture map (adjoint taken when the
  /// stored picture is Schrodinger). All asymptotic analysis runs on this.
  CMatrix heisenberg_superop() const;

  /// Kraus operators of the Heisenberg-picture map; CP channels only.
  std::vector<CMatrix> heisenberg_kraus() const;

  /// unvec(superop * vec(X)) in the stored picture.
  CMatrix apply(const CMatrix& X) const;

  /// Picture toggled, superoperator conjugate-transposed.
  Channel adjoint() const;

  Channel with_label(std::string label) const;

 private:
  Index dim_ = 0;
  Picture picture_ = Picture::heisenberg;
  std::string label_;
  Tolerances tol_;
  bool permissive_ = false;
  std::optional<std::vector<CMatrix>> kraus_;
  CMatrix superop_;
  CMatrix choi_;
  ValidationReport validation_;
  std::vector<std::string> warnings_;
};

/// a after b; same dim and picture required.
Channel compose(const Channel& a, const Channel& b);

/// n-fold composition by repeated squaring; power(ch, 0) is the identity.
Channel power(const Channel& ch, unsigned n);

// Representation conversions (free functions, used by Channel and tests).
CMatrix kraus_to_superop(const std::vector<CMatrix>& kraus, Picture picture);
CMatrix superop_to_choi(const CMatrix& superop);
CMatrix choi_to_superop(const CMatrix& choi);
std::vector<CMatrix> choi_to_kraus(const CMatrix& choi, Picture picture, const Tolerances& tol,
                                   std::vector<std::string>* warnings = nullptr);

/// Superoperator of X -> fn(X) built column-by-column from matrix units.
template <typename Fn>
CMatrix superop_from_map(Index d, Fn&& fn) {
  CMatrix s(d * d, d * d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) {
      CMatrix unit = CMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      s.col(j * d + i) = vec(fn(unit));
    }
  return s;
}

/// Seeded Stinespring channel: a Haar-ish isometry V : H -> H (x) H_env from
/// QR of a Gaussian matrix, Heisenberg map X -> V^dag (X (x) I_env) V.
/// env_dim = 1 gives a unitary conjugation. Deterministic in the seed.
Channel random_ucp(Index dim, Index env_dim, std::uint64_t seed, const Tolerances& tol = {});

// Built-in channels (all Heisenberg picture).

/// Idempotent UCP projection on M3: keeps the upper 2x2 block and copies the
/// (1,1) entry to the (3,3) corner.
Channel builtin_corner_projection(const Tolerances& tol = {});

/// Idempotent UCP pinching on M3: X -> diag(x11, x22, x11).
Channel builtin_pinch_projection(const Tolerances& tol = {});

/// Markovian relaxation with the pinch projection as generator, built in
/// closed form as e^{-1} Id + (1 - e^{-1}) pinch (valid because the pinch is
/// idempotent).
Channel builtin_pinched_relaxation(const Tolerances& tol = {});

/// X -> tr(X)/d * I, the maximally depolarizing unital idempotent.
Channel builtin_trace_map(Index d, const Tolerances& tol = {});

/// Heisenberg adjoint of the contraction onto the state rho: X -> tr(rho X) I.
Channel builtin_state_contraction(const CMatrix& rho, const Tolerances& tol = {});

/// X -> U^dag X U.
Channel builtin_unitary(const CMatrix& u, const Tolerances& tol = {});

/// Name-based lookup used by fixtures and the suite; throws on unknown names.
/// Known names: corner_projection, pinch_projection, pinched_relaxation,
/// trace_map_d2, trace_map_d3, contraction_qubit, unitary_phase.
Channel builtin(const std::string& name, const Tolerances& tol = {});

// Channel JSON: {"dim", "picture", "representation", "matrices", "label"}
// with complex entries encoded as [re, im] and matrices as row-major nested
// arrays. This is the CLI's sole ingestion format.
Channel channel_from_json_text(const std::string& text, bool permissive, const Tolerances& tol = {});
Channel channel_from_json_file(const std::string& path, bool permissive, const Tolerances& tol = {});
std::string channel_to_json_text(const Channel& ch, Representation rep);

}  // namespace qdfa

#endif  // QDFA_CHANNEL_HPP
