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

#include "qdfa/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <algorithm>
#include <cmath>

#include "qdfa/rng.hpp"

namespace qdfa {

CMatrix choi_effros_product(const PeripheralData& pd, const CMatrix& X, const CMatrix& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols() || X.rows() != X.cols())
    throw InvalidInputError("choi_effros_product: square matrices of equal shape expected");
  return project_peripheral(pd, X * Y);
}

namespace {

OperatorSubspace null_space_subspace(const CMatrix& constraints, Index d, const Tolerances& tol) {
  const Index n = d * d;
  if (constraints.rows() == 0) {
    std::vector<CMatrix> units;
    for (Index j = 0; j < d; ++j)
      for (Index i = 0; i < d; ++i) {
        CMatrix e = CMatrix::Zero(d, d);
        e(i, j) = 1.0;
        units.push_back(std::move(e));
      }
    return OperatorSubspace::from_spanning(d, units, tol);
  }
  Eigen::JacobiSVD<CMatrix> svd(constraints, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol.ortho * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  std::vector<CMatrix> basis;
  for (Index k = rank; k < n; ++k) basis.push_back(unvec(svd.matrixV().col(k)));
  return OperatorSubspace::from_spanning(d, basis, tol);
}

}  // namespace

OperatorSubspace multiplicative_domain(const Channel& ch) {
  if (!ch.has_kraus())
    throw InvalidInputError("multiplicative_domain: channel '" + ch.label() +
                            "' has no Kraus form");
  const Index d = ch.dim();
  const Index n = d * d;
  const CMatrix s = ch.heisenberg_superop();
  const std::vector<CMatrix> kraus = ch.heisenberg_kraus();
  const CMatrix id = CMatrix::Identity(d, d);
  CMatrix constraints(2 * n * static_cast<Index>(kraus.size()), n);
  Index row = 0;
  for (const auto& k : kraus) {
    // X K = K Phi(X)
    constraints.middleRows(row, n) =
        Eigen::kroneckerProduct(k.transpose(), id).eval() -
        Eigen::kroneckerProduct(id, k).eval() * s;
    row += n;
    // K^dag X = Phi(X) K^dag
    constraints.middleRows(row, n) =
        Eigen::kroneckerProduct(id, k.adjoint()).eval() -
        Eigen::kroneckerProduct(k.conjugate(), id).eval() * s;
    row += n;
  }
  return null_space_subspace(constraints, d, ch.tolerances());
}

OperatorSubspace multiplicative_domain_bimodule(const Channel& ch) {
  const Index d = ch.dim();
  const Index n = d * d;
  const CMatrix s = ch.heisenberg_superop();
  const CMatrix id = CMatrix::Identity(d, d);
  CMatrix constraints(2 * n * n, n);
  Index row = 0;
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) {
      CMatrix e = CMatrix::Zero(d, d);
      e(i, j) = 1.0;
      const CMatrix phi_e = unvec(s * vec(e));
      // Phi(E X) = Phi(E) Phi(X)
      constraints.middleRows(row, n) =
          s * Eigen::kroneckerProduct(id, e).eval() -
          Eigen::kroneckerProduct(id, phi_e).eval() * s;
      row += n;
      // Phi(X E) = Phi(X) Phi(E)
      constraints.middleRows(row, n) =
          s * Eigen::kroneckerProduct(e.transpose(), id).eval() -
          Eigen::kroneckerProduct(phi_e.transpose(), id).eval() * s;
      row += n;
    }
  return null_space_subspace(constraints, d, ch.tolerances());
}

OperatorSubspace dfa(const Channel& ch) {
  const Tolerances& tol = ch.tolerances();
  const Index d = ch.dim();
  const CMatrix s = ch.heisenberg_superop();

  OperatorSubspace v;
  if (ch.has_kraus()) {
    v = multiplicative_domain(ch);
    // The bimodule route must agree on CP channels.
    const OperatorSubspace vb = multiplicative_domain_bimodule(ch);
    if (!subspace_equal(v, vb, tol))
      throw ConsistencyError(
          "dfa: Kraus-linearized and bimodule multiplicative domains disagree (dims " +
          std::to_string(v.dim()) + " vs " + std::to_string(vb.dim()) + ")");
  } else {
    v = multiplicative_domain_bimodule(ch);
  }

  // Largest invariant subspace: V <- V cap Phi^{-1}(V). Dimensions strictly
  // decrease until the fixpoint, so this ends within d^2 steps.
  for (Index iter = 0; iter <= d * d; ++iter) {
    if (v.dim() == 0) break;
    const CMatrix& b = v.basis_columns();
    const CMatrix leak =
        (CMatrix::Identity(d * d, d * d) - v.projector_matrix()) * (s * b);
    Eigen::JacobiSVD<CMatrix> svd(leak, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = tol.ortho * std::max(1.0, sv.size() ? sv(0) : 0.0);
    Index rank = 0;
    while (rank < sv.size() && sv(rank) > cutoff) ++rank;
    if (rank == 0) break;  // already invariant
    std::vector<CMatrix> next;
    for (Index k = rank; k < v.dim(); ++k) next.push_back(unvec(b * svd.matrixV().col(k)));
    v = OperatorSubspace::from_spanning(d, next, tol);
  }
  return v;
}

double dfa_power_check(const Channel& ch, const OperatorSubspace& space) {
  const Index d = ch.dim();
  const CMatrix s = ch.heisenberg_superop();
  CMatrix sn = CMatrix::Identity(d * d, d * d);
  double worst = 0.0;
  for (Index n = 1; n <= d * d; ++n) {
    sn = (sn * s).eval();
    for (const auto& b : space.basis()) {
      const CMatrix pb = unvec(sn * vec(b));
      const double r1 = (unvec(sn * vec(CMatrix(b.adjoint() * b))) - pb.adjoint() * pb).norm();
      const double r2 = (unvec(sn * vec(CMatrix(b * b.adjoint()))) - pb * pb.adjoint()).norm();
      worst = std::max(worst, std::max(r1, r2));
    }
  }
  return worst;
}

OperatorSubspace kernel_ideal(const PeripheralData& pd) {
  const Channel& proj = pd.projector;
  const Tolerances& tol = proj.tolerances();
  const Index d = proj.dim();
  const CMatrix sigma_raw = unvec(pd.projector_superop.adjoint() * vec(identity(d)));
  const CMatrix pi = support_projection((sigma_raw + sigma_raw.adjoint()) / 2.0, tol);
  const CMatrix co = identity(d) - pi;
  std::vector<CMatrix> spanning;
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) {
      CMatrix e = CMatrix::Zero(d, d);
      e(i, j) = 1.0;
      spanning.push_back(co * e * co);
    }
  OperatorSubspace k = OperatorSubspace::from_spanning(d, spanning, tol);
  // Direct evaluation of the defining property on the returned basis.
  for (const auto& b : k.basis()) {
    const double r1 = project_peripheral(pd, b.adjoint() * b).norm();
    const double r2 = project_peripheral(pd, b * b.adjoint()).norm();
    if (std::max(r1, r2) > tol.residual)
      throw ConsistencyError("kernel_ideal: support characterization failed (residual " +
                             std::to_string(std::max(r1, r2)) + ")");
  }
  return k;
}

OperatorSubspace ce_dfa(const Channel& ch, const PeripheralData& pd,
                        const OperatorSubspace& kernel) {
  const Tolerances& tol = ch.tolerances();
  const OperatorSubspace cap = subspace_intersect(pd.attractor, kernel, tol);
  if (cap.dim() != 0)
    throw ConsistencyError("ce_dfa: attractor and kernel ideal intersect (dim " +
                           std::to_string(cap.dim()) + ")");
  OperatorSubspace sum = subspace_sum(pd.attractor, kernel, tol);
  if (sum.dim() != pd.attractor.dim() + kernel.dim())
    throw ConsistencyError("ce_dfa: direct-sum dimension mismatch (" + std::to_string(sum.dim()) +
                           " != " + std::to_string(pd.attractor.dim()) + " + " +
                           std::to_string(kernel.dim()) + ")");
  if (ch.validation().is_ucp) {
    const double pc = ce_dfa_power_check(ch, pd, sum);
    if (pc > tol.residual * 10)
      throw ConsistencyError("ce_dfa: multiplicativity cross-check failed (residual " +
                             std::to_string(pc) + ")");
  }
  return sum;
}

double ce_dfa_power_check(const Channel& ch, const PeripheralData& pd,
                          const OperatorSubspace& space) {
  const Index d = ch.dim();
  const CMatrix s = ch.heisenberg_superop();
  CMatrix sn = CMatrix::Identity(d * d, d * d);
  double worst = 0.0;
  for (Index n = 1; n <= d * d; ++n) {
    sn = (sn * s).eval();
    for (const auto& b : space.basis()) {
      const CMatrix pb = unvec(sn * vec(b));
      const double r1 = (unvec(sn * vec(choi_effros_product(pd, b.adjoint(), b))) -
                         choi_effros_product(pd, pb.adjoint(), pb))
                            .norm();
      const double r2 = (unvec(sn * vec(choi_effros_product(pd, b, b.adjoint()))) -
                         choi_effros_product(pd, pb, pb.adjoint()))
                            .norm();
      worst = std::max(worst, std::max(r1, r2));
    }
  }
  return worst;
}

FaithfulnessResult is_faithful(const Channel& ch, const PeripheralData& pd,
                               const OperatorSubspace& kernel) {
  const Tolerances& tol = ch.tolerances();
  const Index d = ch.dim();
  FaithfulnessResult res;
  const CMatrix sigma_raw = unvec(pd.projector_superop.adjoint() * vec(identity(d)));
  const double herm = (sigma_raw - sigma_raw.adjoint()).norm();
  if (herm > tol.residual * residual_scale({sigma_raw.norm()}))
    throw ConsistencyError("is_faithful: adjoint projector image of I is not Hermitian");
  const CMatrix sigma_prime = (sigma_raw + sigma_raw.adjoint()) / 2.0;
  res.sigma = sigma_prime / static_cast<double>(d);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sigma_prime);
  if (es.info() != Eigen::Success) throw NumericError("is_faithful: eigensolver failure");
  res.sigma_min_eigenvalue = es.eigenvalues().minCoeff() / static_cast<double>(d);
  res.faithful = es.eigenvalues().minCoeff() > tol.psd;
  res.support = support_projection(sigma_prime, tol);
  res.support_dim = static_cast<Index>(std::llround(res.support.trace().real()));

  if (std::abs(res.sigma.trace() - Complex(1.0)) > tol.residual)
    throw ConsistencyError("is_faithful: sigma does not have unit trace");

  const bool kernel_zero = kernel.dim() == 0;
  if (res.faithful != kernel_zero)
    throw ConsistencyError(
        "is_faithful: support criterion and kernel-ideal criterion disagree (faithful=" +
        std::to_string(res.faithful) + ", dim K=" + std::to_string(kernel.dim()) + ")");

  const CMatrix sdag = ch.heisenberg_superop().adjoint();
  res.sigma_stationarity_residual = (unvec(sdag * vec(res.sigma)) - res.sigma).norm();
  // sigma is provably stationary for the Schrodinger dynamics when the
  // channel is faithful, and when the peripheral spectrum is just {1}
  // (Cesaro-mean argument). Outside those cases it is only an asymptotic
  // state and the residual is reported, not enforced.
  bool peripheral_trivial = true;
  for (const auto& lam : pd.peripheral_eigenvalues)
    if (std::abs(lam - Complex(1.0)) > tol.peripheral) peripheral_trivial = false;
  res.stationarity_is_theorem = res.faithful || peripheral_trivial;
  if (ch.validation().is_ucp && res.stationarity_is_theorem &&
      res.sigma_stationarity_residual > tol.residual)
    throw ConsistencyError("is_faithful: sigma fails stationarity (residual " +
                           std::to_string(res.sigma_stationarity_residual) + ")");
  return res;
}

PeripheralAutomorphismResult is_peripherally_automorphic(const PeripheralData& pd,
                                                         const Tolerances& tol,
                                                         std::uint64_t seed) {
  PeripheralAutomorphismResult res;
  const auto& basis = pd.attractor.basis();
  const Index m = pd.attractor.dim();
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const CMatrix prod = basis[static_cast<size_t>(i)] * basis[static_cast<size_t>(j)];
      const double r = (prod - project_peripheral(pd, prod)).norm();
      if (r > res.max_residual) {
        res.max_residual = r;
        res.witness_i = i;
        res.witness_j = j;
      }
    }
  res.holds = res.max_residual <= tol.residual;

  // Direct comparison of the two products on random attractor pairs.
  Rng rng(seed);
  const Index d = pd.attractor.dim_h();
  for (int t = 0; t < 8 && m > 0; ++t) {
    CMatrix x = CMatrix::Zero(d, d), y = CMatrix::Zero(d, d);
    for (Index k = 0; k < m; ++k) {
      x += rng.cgauss() * basis[static_cast<size_t>(k)];
      y += rng.cgauss() * basis[static_cast<size_t>(k)];
    }
    const double scale = residual_scale({x.norm() * y.norm()});
    const double r = (x * y - choi_effros_product(pd, x, y)).norm() / scale;
    res.definition_residual = std::max(res.definition_residual, r);
  }
  if (res.holds && res.definition_residual > tol.residual * 100)
    throw ConsistencyError(
        "is_peripherally_automorphic: basis criterion and product comparison disagree");
  return res;
}

namespace {

void require_member(const OperatorSubspace& nstar, const CMatrix& X, const Tolerances& tol,
                    const char* who) {
  auto [ok, r] = nstar.contains(X, tol);
  if (!ok)
    throw InvalidInputError(std::string(who) + ": operand is not in the Choi-Effros "
                            "decoherence-free algebra (residual " + std::to_string(r) + ")");
}

}  // namespace

Complex gns_form(const PeripheralData& pd, const OperatorSubspace& nstar, const CMatrix& X,
                 const CMatrix& Y) {
  const Tolerances& tol = pd.projector.tolerances();
  require_member(nstar, X, tol, "gns_form");
  require_member(nstar, Y, tol, "gns_form");
  const Index d = pd.projector.dim();
  return project_peripheral(pd, X.adjoint() * Y).trace() / static_cast<double>(d);
}

double seminorm_omega(const PeripheralData& pd, const OperatorSubspace& nstar, const CMatrix& X) {
  const Tolerances& tol = pd.projector.tolerances();
  require_member(nstar, X, tol, "seminorm_omega");
  const CMatrix xx = choi_effros_product(pd, X.adjoint(), X);
  const double val = std::sqrt(std::max(0.0, spectral_radius(xx)));
  const double alt = operator_norm(project_peripheral(pd, X));
  if (std::abs(val - alt) > tol.residual * residual_scale({X.norm() * X.norm()}))
    throw ConsistencyError("seminorm_omega: spectral-radius and projected-norm routes disagree (" +
                           std::to_string(val) + " vs " + std::to_string(alt) + ")");
  return val;
}

double quotient_norm(const PeripheralData& pd, const OperatorSubspace& nstar, const CMatrix& X,
                     std::uint64_t seed) {
  const Tolerances& tol = pd.projector.tolerances();
  require_member(nstar, X, tol, "quotient_norm");
  const double val = operator_norm(project_peripheral(pd, X));
  // The closed form is inf{||X + K||}: every sampled coset member must stay
  // above it.
  const OperatorSubspace kernel = kernel_ideal(pd);
  Rng rng(seed);
  for (int t = 0; t < 16 && kernel.dim() > 0; ++t) {
    CMatrix k = CMatrix::Zero(X.rows(), X.cols());
    for (Index i = 0; i < kernel.dim(); ++i)
      k += rng.cgauss() * kernel.basis()[static_cast<size_t>(i)];
    const double sample = operator_norm(X + k);
    if (sample < val - tol.residual * residual_scale({X.norm(), k.norm()}))
      throw ConsistencyError("quotient_norm: sampled coset norm " + std::to_string(sample) +
                             " undercuts the closed form " + std::to_string(val));
  }
  return val;
}

// ---- presentation -----------------------------------------------------

CStarPresentation algebra_presentation(const OperatorSubspace& space, ProductKind kind,
                                       const PeripheralData& pd, const Tolerances& tol,
                                       std::uint64_t seed) {
  CStarPresentation pres;
  pres.space = space;
  pres.product_kind = kind;
  const Index m = space.dim();
  const Index d = space.dim_h();
  const auto& basis = space.basis();
  const CMatrix& cols = space.basis_columns();
  auto product = [&](const CMatrix& x, const CMatrix& y) {
    return kind == ProductKind::choi_effros ? choi_effros_product(pd, x, y) : CMatrix(x * y);
  };

  pres.structure_constants.assign(static_cast<size_t>(m), CMatrix::Zero(m, m));
  std::vector<std::vector<CMatrix>> prods(static_cast<size_t>(m),
                                          std::vector<CMatrix>(static_cast<size_t>(m)));
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      const CMatrix p = product(basis[static_cast<size_t>(i)], basis[static_cast<size_t>(j)]);
      prods[static_cast<size_t>(i)][static_cast<size_t>(j)] = p;
      const CVector coords = cols.adjoint() * vec(p);
      pres.structure_constants[static_cast<size_t>(i)].row(j) = coords.transpose();
      pres.residuals.closure =
          std::max(pres.residuals.closure, (p - unvec(cols * coords)).norm());
    }

  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      for (Index k = 0; k < m; ++k) {
        const CMatrix lhs = product(prods[static_cast<size_t>(i)][static_cast<size_t>(j)],
                                    basis[static_cast<size_t>(k)]);
        const CMatrix rhs = product(basis[static_cast<size_t>(i)],
                                    prods[static_cast<size_t>(j)][static_cast<size_t>(k)]);
        pres.residuals.associativity = std::max(pres.residuals.associativity, (lhs - rhs).norm());
      }

  for (Index i = 0; i < m; ++i) {
    const CMatrix adj = basis[static_cast<size_t>(i)].adjoint();
    pres.residuals.involution_closure =
        std::max(pres.residuals.involution_closure, (adj - space.project(adj)).norm());
  }

  // Two-sided unit detection: least-squares over unit coordinates.
  if (m > 0) {
    CMatrix lhs(2 * m * m, m);
    CVector rhs = CVector::Zero(2 * m * m);
    for (Index j = 0; j < m; ++j)
      for (Index k = 0; k < m; ++k) {
        for (Index i = 0; i < m; ++i) {
          lhs(j * m + k, i) = pres.structure_constants[static_cast<size_t>(i)](j, k);
          lhs(m * m + j * m + k, i) = pres.structure_constants[static_cast<size_t>(j)](i, k);
        }
        if (j == k) rhs(j * m + k) = rhs(m * m + j * m + k) = 1.0;
      }
    Eigen::JacobiSVD<CMatrix> svd(lhs, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const CVector u = svd.solve(rhs);
    pres.residuals.unit = (lhs * u - rhs).norm();
    if (pres.residuals.unit <= tol.residual * residual_scale({rhs.norm()}))
      pres.unit_coords = u;
  }

  // C*-identity sampled over random elements of the space.
  Rng rng(seed);
  for (int t = 0; t < 12 && m > 0; ++t) {
    CMatrix x = CMatrix::Zero(d, d);
    for (Index i = 0; i < m; ++i) x += rng.cgauss() * basis[static_cast<size_t>(i)];
    const double nx = operator_norm(x);
    const double lhs = operator_norm(product(x.adjoint(), x));
    pres.residuals.cstar_identity = std::max(
        pres.residuals.cstar_identity, std::abs(lhs - nx * nx) / residual_scale({nx * nx}));
  }
  return pres;
}

CStarPresentation attractor_algebra(const PeripheralData& pd, const Tolerances& tol,
                                    std::uint64_t seed) {
  CStarPresentation pres =
      algebra_presentation(pd.attractor, ProductKind::choi_effros, pd, tol, seed);
  const double scale = residual_scale({static_cast<double>(pd.attractor.dim_h())});
  if (pres.residuals.closure > tol.residual * scale)
    throw ConsistencyError("attractor_algebra: the product does not close on the attractor "
                           "(residual " + std::to_string(pres.residuals.closure) + ")");
  if (pres.residuals.involution_closure > tol.residual * scale)
    throw ConsistencyError("attractor_algebra: the attractor is not involution-closed");
  if (pres.residuals.associativity > tol.residual * scale)
    throw ConsistencyError("attractor_algebra: the product is not associative on the attractor");
  if (!pres.unit_coords)
    throw ConsistencyError("attractor_algebra: no unit found; the identity should be one");
  const CMatrix unit = unvec(pd.attractor.basis_columns() * *pres.unit_coords);
  if ((unit - identity(pd.attractor.dim_h())).norm() > tol.residual * scale * 10)
    throw ConsistencyError("attractor_algebra: unit is not the identity operator");
  if (pd.projector.validation().is_ucp && pres.residuals.cstar_identity > tol.residual * scale)
    throw ConsistencyError("attractor_algebra: C*-identity fails on the attractor (residual " +
                           std::to_string(pres.residuals.cstar_identity) + ")");
  return pres;
}

// ---- classification ----------------------------------------------------

std::string to_string(AsymptoticClass c) {
  switch (c) {
    case AsymptoticClass::faithful: return "faithful";
    case AsymptoticClass::peripherally_automorphic: return "peripherally_automorphic";
    default: return "generic";
  }
}

namespace {

bool same_tolerances(const Tolerances& a, const Tolerances& b) {
  return a.ortho == b.ortho && a.psd == b.psd && a.residual == b.residual &&
         a.peripheral == b.peripheral;
}

}  // namespace

AnalysisData classify(const Channel& ch, const AnalyzeOptions& opts) {
  Tolerances tol = opts.tol;
  tol.validate();
  // One tolerance source of truth: rebuild the channel when the options
  // disagree with the tolerances it was ingested with.
  Channel channel =
      same_tolerances(tol, ch.tolerances())
          ? ch
          : Channel::from_superop(ch.superop_matrix(), ch.picture(), ch.label(), tol,
                                  ch.permissive());
  AnalysisData data{.channel = channel,
                    .sd = {},
                    .pd = {},
                    .fix = {},
                    .dfa_space = {},
                    .kernel = {},
                    .nstar = {},
                    .attractor_alg = {},
                    .faith = {},
                    .pa = {},
                    .report = {}};
  data.sd = spectrum(channel);
  data.pd = peripheral_projection(channel, data.sd);
  data.fix = fixed_point_space(channel, data.sd);
  data.kernel = kernel_ideal(data.pd);
  data.nstar = ce_dfa(channel, data.pd, data.kernel);
  if (opts.compute_dfa) data.dfa_space = dfa(channel);
  data.attractor_alg = attractor_algebra(data.pd, tol, opts.seed);
  data.nstar_alg =
      algebra_presentation(data.nstar, ProductKind::choi_effros, data.pd, tol, opts.seed);
  data.faith = is_faithful(channel, data.pd, data.kernel);
  data.pa = is_peripherally_automorphic(data.pd, tol, opts.seed);

  AnalysisReport& rep = data.report;
  rep.dims.attr = data.pd.attractor.dim();
  rep.dims.fix = data.fix.dim();
  rep.dims.ce_dfa = data.nstar.dim();
  rep.dims.kernel_ideal = data.kernel.dim();
  if (data.dfa_space) rep.dims.dfa = data.dfa_space->dim();
  rep.faithful = data.faith.faithful;
  rep.peripherally_automorphic = data.pa.holds;
  rep.nstar_star_unit_exists = data.nstar_alg.unit_coords.has_value();
  rep.asymptotic_class = data.faith.faithful ? AsymptoticClass::faithful
                         : data.pa.holds     ? AsymptoticClass::peripherally_automorphic
                                             : AsymptoticClass::generic;
  rep.stationary_state = data.faith.sigma;
  rep.support_dim = data.faith.support_dim;

  auto& rr = rep.invariant_residuals;
  rr["projector_idempotency"] = data.pd.idempotency_residual;
  rr["projector_commutation"] = data.pd.commutation_residual;
  rr["semisimplicity"] = data.sd.semisimplicity_residual;
  // Keys prefixed margin_ or suffixed _unenforced are informational: large
  // values there are expected (they witness a decision, or fall outside the
  // theorem's hypotheses) and are excluded from worst-residual summaries.
  rr[data.faith.stationarity_is_theorem ? "sigma_stationarity"
                                        : "sigma_stationarity_unenforced"] =
      data.faith.sigma_stationarity_residual;
  rr["attractor_closure"] = data.attractor_alg.residuals.closure;
  rr["attractor_associativity"] = data.attractor_alg.residuals.associativity;
  rr["attractor_cstar_identity"] = data.attractor_alg.residuals.cstar_identity;
  rr["nstar_associativity"] = data.nstar_alg.residuals.associativity;
  rr["nstar_closure"] = data.nstar_alg.residuals.closure;
  // The C*-identity generically fails on (N*, projected product); recorded,
  // never enforced.
  rr["margin_nstar_cstar_identity"] = data.nstar_alg.residuals.cstar_identity;
  rr["margin_pa_decision"] = data.pa.max_residual;

  const bool enforce = channel.validation().is_ucp;
  const double bound = tol.residual * residual_scale({static_cast<double>(channel.dim())});

  // Unconditional inclusions: N inside N*, and N* invariant under the map.
  if (data.dfa_space) {
    rr["dfa_in_ce_dfa"] = containment_residual(*data.dfa_space, data.nstar);
    if (enforce && rr["dfa_in_ce_dfa"] > bound)
      throw ConsistencyError("classify: N is not contained in N* (residual " +
                             std::to_string(rr["dfa_in_ce_dfa"]) + ")");
    // Direct verification of the defining saturation conditions for every
    // power up to d^2, guarding the fixpoint construction.
    rr["dfa_power_check"] = dfa_power_check(channel, *data.dfa_space);
    if (enforce && channel.has_kraus() && rr["dfa_power_check"] > bound * 10)
      throw ConsistencyError("classify: N fails the power multiplicativity cross-check");
  }
  {
    double worst = 0.0;
    const CMatrix s = channel.heisenberg_superop();
    for (const auto& b : data.nstar.basis())
      worst = std::max(worst, (unvec(s * vec(b)) - data.nstar.project(unvec(s * vec(b)))).norm());
    rr["ce_dfa_invariance"] = worst;
    if (enforce && worst > bound)
      throw ConsistencyError("classify: N* is not invariant under the channel");
  }
  // Fixed points sit inside the attractor.
  rr["fix_in_attractor"] = containment_residual(data.fix, data.pd.attractor);
  if (enforce && rr["fix_in_attractor"] > bound)
    throw ConsistencyError("classify: fixed-point space leaks out of the attractor");

  if (enforce && rr["nstar_associativity"] > bound)
    throw ConsistencyError("classify: the projected product is not associative on N*");
  if (enforce && rep.nstar_star_unit_exists != (rep.dims.kernel_ideal == 0))
    throw ConsistencyError(
        "classify: a unit in (N*, projected product) must exist exactly when the kernel ideal "
        "is trivial");

  if (enforce) {
    if (rep.faithful && !rep.peripherally_automorphic)
      throw ConsistencyError("classify: faithful channel not peripherally automorphic");
    switch (rep.asymptotic_class) {
      case AsymptoticClass::faithful: {
        rr["attr_eq_dfa"] =
            data.dfa_space ? projector_distance(data.pd.attractor, *data.dfa_space) : 0.0;
        rr["attr_eq_ce_dfa"] = projector_distance(data.pd.attractor, data.nstar);
        if (rr["attr_eq_dfa"] > bound || rr["attr_eq_ce_dfa"] > bound)
          throw ConsistencyError("classify: faithful chain Attr = N = N* violated");
        break;
      }
      case AsymptoticClass::peripherally_automorphic: {
        if (data.dfa_space) {
          rr["attr_in_dfa"] = containment_residual(data.pd.attractor, *data.dfa_space);
          if (rr["attr_in_dfa"] > bound)
            throw ConsistencyError("classify: peripherally automorphic chain Attr in N violated");
        }
        break;
      }
      case AsymptoticClass::generic: {
        if (data.dfa_space) {
          rr["margin_attr_outside_dfa"] =
              containment_residual(data.pd.attractor, *data.dfa_space);
          if (rr["margin_attr_outside_dfa"] <= bound)
            throw ConsistencyError(
                "classify: non-peripherally-automorphic channel has Attr inside N");
        }
        if (rep.dims.attr >= rep.dims.ce_dfa)
          throw ConsistencyError("classify: Attr should be strictly inside N* here");
        break;
      }
    }
  }
  return data;
}

}  // namespace qdfa
