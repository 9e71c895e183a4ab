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

#ifndef QDFA_ALGEBRA_HPP
#define QDFA_ALGEBRA_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdfa/channel.hpp"
#include "qdfa/spectral.hpp"

namespace qdfa {

/// X * Y := P(XY) with P the peripheral projector. Bilinear on all of B(H),
/// associative only on the right subspaces.
CMatrix choi_effros_product(const PeripheralData& pd, const CMatrix& X, const CMatrix& Y);

enum class ProductKind { composition, choi_effros };

/// Finite-dimensional *-algebra presentation over an operator subspace:
/// basis, structure constants for the chosen product, unit coordinates when
/// a two-sided unit exists, and residuals of the algebra axioms.
struct CStarPresentation {
  OperatorSubspace space;
  ProductKind product_kind = ProductKind::choi_effros;
  // structure_constants[i](j, k) = c_ijk with b_i o b_j = sum_k c_ijk b_k
  std::vector<CMatrix> structure_constants;
  std::optional<CVector> unit_coords;
  struct Residuals {
    double closure = 0.0;
    double associativity = 0.0;
    double unit = 0.0;
    double involution_closure = 0.0;
    double cstar_identity = 0.0;  // sampled |  ||X^dag o X|| - ||X||^2  |
  } residuals;
};

/// Presentation of (space, product); the C*-identity residual is sampled
/// over seeded random elements of the space.
CStarPresentation algebra_presentation(const OperatorSubspace& space, ProductKind kind,
                                       const PeripheralData& pd, const Tolerances& tol,
                                       std::uint64_t seed);

/// The attractor with the Choi-Effros product: a unital C*-algebra.
/// Closure failures above tol.residual raise ConsistencyError.
CStarPresentation attractor_algebra(const PeripheralData& pd, const Tolerances& tol,
                                    std::uint64_t seed = 1);

/// Two-sided multiplicative domain
///   {X : Phi(X^dag X) = Phi(X)^dag Phi(X), Phi(X X^dag) = Phi(X) Phi(X)^dag}
/// as the null space of the linear system {X K_i = K_i Phi(X),
/// K_i^dag X = Phi(X) K_i^dag}. The linearization is exact: with
/// D_i = X K_i - K_i Phi(X) one has sum_i D_i^dag D_i =
/// Phi(X^dag X) - Phi(X)^dag Phi(X) >= 0, so saturation of the Schwarz
/// inequality is equivalent to D_i = 0 for all i (and the mirrored
/// conditions handle the X X^dag side). Requires a Kraus form.
OperatorSubspace multiplicative_domain(const Channel& ch);

/// Multiplicative domain from the bimodule conditions
/// {Phi(YX) = Phi(Y)Phi(X), Phi(XY) = Phi(X)Phi(Y) for all Y}, linear in X
/// with Y running over matrix units. Agrees with multiplicative_domain on CP
/// channels; usable for permissive non-CP maps where no Kraus form exists.
OperatorSubspace multiplicative_domain_bimodule(const Channel& ch);

/// The decoherence-free algebra N: the largest Phi-invariant subspace of the
/// two-sided multiplicative domain, by the fixpoint iteration
/// V_{k+1} = V_k cap Phi^{-1}(V_k). Any Phi-invariant subspace of the
/// multiplicative domain satisfies the multiplicativity conditions for every
/// power by induction (Phi(X) stays in the domain), so the fixpoint equals
/// the all-powers definition; dfa_power_check verifies this directly.
OperatorSubspace dfa(const Channel& ch);

/// Direct residual of the saturation conditions Phi^n(X^dag X) =
/// Phi^n(X)^dag Phi^n(X) (and the X <-> X^dag twin) for n = 1..d^2 over the
/// basis of the candidate space. Cross-check for dfa on CP channels.
double dfa_power_check(const Channel& ch, const OperatorSubspace& space);

/// K(P) = {X : P(X^dag X) = P(X X^dag) = 0}, computed as
/// (I - Pi) B(H) (I - Pi) with Pi the support projection of P^dag(I):
/// for PSD Y, P(Y) = 0 iff tr(P^dag(I) Y) = 0, and tr(P^dag(I) X^dag X) = 0
/// iff X Pi = 0 (symmetrically Pi X = 0 for the twin). Cross-checked by
/// direct evaluation of P(X^dag X) on the returned basis.
OperatorSubspace kernel_ideal(const PeripheralData& pd);

/// N* = Attr (+) K as a direct subspace sum (the intersection must be zero);
/// cross-checked against the saturation conditions for the Choi-Effros
/// product for n = 1..d^2 on the returned basis.
OperatorSubspace ce_dfa(const Channel& ch, const PeripheralData& pd,
                        const OperatorSubspace& kernel);

/// Residual of the Choi-Effros saturation conditions for n = 1..d^2.
double ce_dfa_power_check(const Channel& ch, const PeripheralData& pd,
                          const OperatorSubspace& space);

struct FaithfulnessResult {
  bool faithful = false;
  CMatrix sigma;                      // P^dag(I)/d, max-rank asymptotic state
  double sigma_min_eigenvalue = 0.0;
  double sigma_stationarity_residual = 0.0;  // ||Phi^dag(sigma) - sigma||
  bool stationarity_is_theorem = false;      // enforced only when true
  Index support_dim = 0;
  CMatrix support;                    // Pi
};

/// Faithful iff the support of P^dag(I) is all of H (min eigenvalue >
/// tol.psd). The decision must agree with dim K = 0; disagreement raises
/// ConsistencyError. sigma is stationary for Phi^dag whenever the channel is
/// faithful or the peripheral spectrum is {1}; the residual is enforced in
/// those cases and reported otherwise.
FaithfulnessResult is_faithful(const Channel& ch, const PeripheralData& pd,
                               const OperatorSubspace& kernel);

struct PeripheralAutomorphismResult {
  bool holds = false;
  double max_residual = 0.0;   // max_{ij} ||b_i b_j - P(b_i b_j)||
  Index witness_i = -1, witness_j = -1;
  double definition_residual = 0.0;  // random-pair check of X*Y = XY
};

/// True iff the attractor is closed under the composition product; must
/// agree with the direct product-comparison on random attractor pairs.
PeripheralAutomorphismResult is_peripherally_automorphic(const PeripheralData& pd,
                                                         const Tolerances& tol,
                                                         std::uint64_t seed = 1);

/// GNS form omega(X^dag Y) = tr(P^dag(I) X^dag Y)/d on N*; PSD sesquilinear,
/// with null space equal to K. Membership in N* is checked.
Complex gns_form(const PeripheralData& pd, const OperatorSubspace& nstar, const CMatrix& X,
                 const CMatrix& Y);

/// omega(X) = spectral_radius(X^dag * X)^{1/2} on N*; equals ||P(X)||.
double seminorm_omega(const PeripheralData& pd, const OperatorSubspace& nstar, const CMatrix& X);

/// Quotient norm inf{||X + K||} on N*, via its closed form ||P(X)||;
/// sampled lower-bound cross-check against random K.
double quotient_norm(const PeripheralData& pd, const OperatorSubspace& nstar, const CMatrix& X,
                     std::uint64_t seed = 1);

enum class AsymptoticClass { faithful, peripherally_automorphic, generic };

std::string to_string(AsymptoticClass c);

struct AnalysisReport {
  struct Dims {
    Index attr = 0, fix = 0, ce_dfa = 0, kernel_ideal = 0;
    std::optional<Index> dfa;  // absent for non-CP permissive inputs
  } dims;
  bool faithful = false;
  bool peripherally_automorphic = false;
  /// Whether (N*, projected product) has a two-sided unit. A unit forces
  /// K = 0 (u * X lands in the attractor, so X in K must vanish), hence this
  /// holds exactly for faithful channels; recorded per channel.
  bool nstar_star_unit_exists = false;
  AsymptoticClass asymptotic_class = AsymptoticClass::generic;
  std::map<std::string, double> invariant_residuals;
  CMatrix stationary_state;  // sigma
  Index support_dim = 0;
};

struct AnalyzeOptions {
  Tolerances tol;
  std::uint64_t seed = 1;
  int trials = 500;
  bool compute_dfa = true;
};

/// Everything classify computes, kept for reuse by the suite and reports.
struct AnalysisData {
  Channel channel;
  SpectralDecomposition sd;
  PeripheralData pd;
  OperatorSubspace fix;
  std::optional<OperatorSubspace> dfa_space;
  OperatorSubspace kernel;
  OperatorSubspace nstar;
  CStarPresentation attractor_alg;
  CStarPresentation nstar_alg;  // (N*, projected product) presentation
  FaithfulnessResult faith;
  PeripheralAutomorphismResult pa;
  AnalysisReport report;
};

/// Full pipeline: spectrum -> projector -> attractor -> N -> K -> N* ->
/// classification, with the inclusion-chain checks for the detected class
/// and the unconditional N subseteq N*, Phi(N*) subseteq N* checks.
/// Chain violations raise ConsistencyError naming the witness.
AnalysisData classify(const Channel& ch, const AnalyzeOptions& opts = {});

}  // namespace qdfa

#endif  // QDFA_ALGEBRA_HPP
