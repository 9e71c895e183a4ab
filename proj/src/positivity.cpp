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

#include "qdfa/positivity.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "qdfa/algebra.hpp"
#include "qdfa/rng.hpp"

namespace qdfa {

PositivityReport certify_cp(const Channel& ch) {
  PositivityReport rep;
  rep.choi_min_eigenvalue = ch.validation().choi_min_eigenvalue;
  rep.is_cp = rep.choi_min_eigenvalue >= -ch.tolerances().psd &&
              ch.validation().hermiticity_residual <=
                  ch.tolerances().residual * residual_scale({ch.choi_matrix().norm()});
  rep.classification = rep.is_cp ? "cp-certified" : "unresolved";
  return rep;
}

namespace {

// Probe kinds cycle through Gaussian, rank-one, Hermitian and unitary
// samples; each trial draws from its own child stream so that the merge is
// independent of evaluation order.
CMatrix probe(Rng& rng, Index d, int trial) {
  switch (trial % 4) {
    case 0: return rng.gaussian_matrix(d, d);
    case 1: return rng.rank_one(d);
    case 2: return rng.hermitian_matrix(d);
    default: return rng.haar_unitary(d);
  }
}

double min_eig_hermitian(const CMatrix& H) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((H + H.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw NumericError("positivity: eigensolver failure");
  return es.eigenvalues().minCoeff();
}

template <typename Defect>
PositivityReport falsify(const Channel& ch, int trials, std::uint64_t seed, Defect&& defect,
                         bool star) {
  PositivityReport rep = certify_cp(ch);
  rep.trials = trials;
  rep.seed = seed;
  const Index d = ch.dim();
  const double tol_psd = ch.tolerances().psd;
  Rng root(seed);
  double worst = 0.0;
  std::optional<PositivityReport::Violation> found;
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.child(static_cast<std::uint64_t>(t));
    const CMatrix x = probe(rng, d, t);
    const double me = min_eig_hermitian(defect(x));
    if (me < worst) {
      worst = me;
      if (me < -tol_psd * residual_scale({x.norm() * x.norm()}))
        found = PositivityReport::Violation{x, me};
    }
  }
  if (found) {
    // Re-verify the certificate through the general (non-self-adjoint)
    // eigensolver before reporting it.
    const CMatrix defect_h = defect(found->witness);
    Eigen::ComplexEigenSolver<CMatrix> es((defect_h + defect_h.adjoint()) / 2.0, false);
    if (es.info() != Eigen::Success) throw NumericError("falsify: re-verification eigensolver failure");
    const double recheck = es.eigenvalues().real().minCoeff();
    if (std::abs(recheck - found->min_eigenvalue) > 1e-12 * residual_scale({std::abs(recheck)}))
      throw ConsistencyError("falsify: certificate failed re-verification");
    if (rep.is_cp && !star)
      throw ConsistencyError(
          "falsify: a CP-certified channel produced a Schwarz violation (min eigenvalue " +
          std::to_string(found->min_eigenvalue) + ")");
    if (rep.is_cp && star && ch.validation().is_ucp)
      throw ConsistencyError("falsify: a UCP channel violated the projected Schwarz inequality");
    if (star)
      rep.star_schwarz_violation = std::move(found);
    else
      rep.schwarz_violation = std::move(found);
    if (!rep.is_cp) rep.classification = "falsified-schwarz";
  }
  return rep;
}

}  // namespace

PositivityReport falsify_schwarz(const Channel& ch, int trials, std::uint64_t seed) {
  const CMatrix s = ch.heisenberg_superop();
  auto defect = [&](const CMatrix& x) {
    const CMatrix px = unvec(s * vec(x));
    return CMatrix(unvec(s * vec(CMatrix(x.adjoint() * x))) - px.adjoint() * px);
  };
  return falsify(ch, trials, seed, defect, /*star=*/false);
}

PositivityReport falsify_star_schwarz(const Channel& ch, const PeripheralData& pd, int trials,
                                      std::uint64_t seed) {
  const CMatrix s = ch.heisenberg_superop();
  auto defect = [&](const CMatrix& x) {
    const CMatrix px = unvec(s * vec(x));
    return CMatrix(unvec(s * vec(choi_effros_product(pd, x.adjoint(), x))) -
                   choi_effros_product(pd, px.adjoint(), px));
  };
  return falsify(ch, trials, seed, defect, /*star=*/true);
}

}  // namespace qdfa
