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

#include "qdfa/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

namespace qdfa {

namespace {

// Unitary similarity swapping the diagonal entries at positions k, k+1 of an
// upper-triangular T, applied in place to T and accumulated into Q.
// The rotation sends the (k+1)-st eigenvector of the 2x2 block to e_1.
void swap_adjacent(CMatrix& T, CMatrix& Q, Index k) {
  const Complex a = T(k, k), b = T(k, k + 1), c = T(k + 1, k + 1);
  const Complex v0 = b, v1 = c - a;
  const double r = std::sqrt(std::norm(v0) + std::norm(v1));
  if (r < 1e-300) return;  // equal diagonal, decoupled: nothing to move
  CMatrix g(2, 2);
  g << std::conj(v0) / r, std::conj(v1) / r, -v1 / r, v0 / r;
  T.middleRows(k, 2) = (g * T.middleRows(k, 2)).eval();
  T.middleCols(k, 2) = (T.middleCols(k, 2) * g.adjoint()).eval();
  Q.middleCols(k, 2) = (Q.middleCols(k, 2) * g.adjoint()).eval();
  T(k + 1, k) = 0.0;
}

bool is_peripheral(const Complex& lambda, double tol_peripheral) {
  return std::abs(lambda) >= 1.0 - tol_peripheral;
}

// Reorder the Schur form so peripheral eigenvalues lead, grouped into
// clusters of (numerically) equal values. Returns the cluster partition.
std::vector<Index> reorder_peripheral_first(CMatrix& T, CMatrix& Q, double tol_peripheral) {
  const Index n = T.rows();
  std::vector<Index> cluster_sizes;
  Index pos = 0;
  while (true) {
    Index first = -1;
    for (Index j = pos; j < n; ++j)
      if (is_peripheral(T(j, j), tol_peripheral)) {
        first = j;
        break;
      }
    if (first < 0) break;
    const Complex rep = T(first, first);
    Index placed = 0;
    for (Index j = pos; j < n; ++j) {
      if (!is_peripheral(T(j, j), tol_peripheral)) continue;
      if (std::abs(T(j, j) - rep) > tol_peripheral) continue;
      Index jj = j;
      while (jj > pos + placed) {
        swap_adjacent(T, Q, jj - 1);
        --jj;
      }
      ++placed;
    }
    cluster_sizes.push_back(placed);
    pos += placed;
  }
  return cluster_sizes;
}

double conjugation_pairing_residual(const CVector& eigenvalues) {
  const Index n = eigenvalues.size();
  std::vector<bool> used(static_cast<size_t>(n), false);
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    const Complex target = std::conj(eigenvalues(i));
    double best = std::numeric_limits<double>::infinity();
    Index best_j = -1;
    for (Index j = 0; j < n; ++j) {
      if (used[static_cast<size_t>(j)]) continue;
      const double dist = std::abs(eigenvalues(j) - target);
      if (dist < best) best = dist, best_j = j;
    }
    used[static_cast<size_t>(best_j)] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

// Solve T11 Y - Y T22 = -T12 column by column (both blocks triangular).
CMatrix solve_triangular_sylvester(const CMatrix& T11, const CMatrix& T22, const CMatrix& T12) {
  const Index m = T11.rows(), k = T22.rows();
  CMatrix Y(m, k);
  const CMatrix C = -T12;
  for (Index j = 0; j < k; ++j) {
    CVector rhs = C.col(j);
    for (Index p = 0; p < j; ++p) rhs += Y.col(p) * T22(p, j);
    const CMatrix lhs = T11 - T22(j, j) * CMatrix::Identity(m, m);
    Y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  return Y;
}

}  // namespace

SpectralDecomposition spectrum(const Channel& ch) {
  const Tolerances& tol = ch.tolerances();
  const CMatrix s = ch.heisenberg_superop();
  const Index n = s.rows();

  Eigen::ComplexSchur<CMatrix> schur(s, /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw NumericError("spectrum: Schur decomposition did not converge");

  SpectralDecomposition sd;
  sd.schur_t = schur.matrixT();
  sd.schur_q = schur.matrixU();
  sd.cluster_sizes = reorder_peripheral_first(sd.schur_t, sd.schur_q, tol.peripheral);
  sd.eigenvalues = sd.schur_t.diagonal();
  sd.peripheral_mask.resize(static_cast<size_t>(n));
  sd.peripheral_count = 0;
  for (Index i = 0; i < n; ++i) {
    const bool p = is_peripheral(sd.eigenvalues(i), tol.peripheral);
    sd.peripheral_mask[static_cast<size_t>(i)] = p;
    if (p) ++sd.peripheral_count;
  }

  const double recon = (sd.schur_q * sd.schur_t * sd.schur_q.adjoint() - s).norm();
  if (recon > tol.residual * residual_scale({s.norm()}))
    throw NumericError("spectrum: Schur reordering lost accuracy (residual " +
                       std::to_string(recon) + ")");
  const double unitarity = (sd.schur_q.adjoint() * sd.schur_q - CMatrix::Identity(n, n)).norm();
  if (unitarity > tol.ortho * residual_scale({static_cast<double>(n)}))
    throw NumericError("spectrum: Schur basis lost unitarity");

  const double max_mod = sd.eigenvalues.cwiseAbs().maxCoeff();
  if (max_mod > 1.0 + tol.peripheral)
    throw InvalidInputError("spectrum: eigenvalue of modulus " + std::to_string(max_mod) +
                            " > 1; the map is not a positive unital contraction within tolerance");
  double dist_to_one = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i)
    dist_to_one = std::min(dist_to_one, std::abs(sd.eigenvalues(i) - Complex(1.0)));
  if (dist_to_one > tol.peripheral)
    throw InvalidInputError("spectrum: eigenvalue 1 is missing (closest distance " +
                            std::to_string(dist_to_one) + ")");

  const double pairing = conjugation_pairing_residual(sd.eigenvalues);
  if (pairing > tol.residual * residual_scale({s.norm()}))
    throw InvalidInputError(
        "spectrum: eigenvalues are not closed under conjugation (residual " +
        std::to_string(pairing) + "); the map does not preserve Hermiticity");

  // Nilpotent defect of the peripheral part: the strictly-upper content of
  // each equal-eigenvalue diagonal block. Blocks are unchanged by the
  // cross-cluster block-diagonalization, so this is exactly the obstruction
  // to diagonalizability of the peripheral cluster.
  double ss = 0.0;
  Index at = 0;
  for (Index size : sd.cluster_sizes) {
    const CMatrix blk = sd.schur_t.block(at, at, size, size);
    double upper = 0.0;
    for (Index i = 0; i < size; ++i)
      for (Index j = i + 1; j < size; ++j) upper += std::norm(blk(i, j));
    ss = std::max(ss, std::sqrt(upper));
    at += size;
  }
  sd.semisimplicity_residual = ss;
  if (ss > tol.residual * residual_scale({s.norm()}))
    throw NumericError(
        "spectrum: peripheral eigenvalues are not semisimple (residual " + std::to_string(ss) +
        "); likely cause: the input is not a UCP (or Schwarz) map within tolerance");

  return sd;
}

namespace {

PeripheralData projector_from_schur(const Channel& ch, const CMatrix& T, const CMatrix& Q,
                                    Index m) {
  const Tolerances& tol = ch.tolerances();
  const Index n = T.rows();
  CMatrix p;
  double gap = std::numeric_limits<double>::infinity();
  if (m == n) {
    p = CMatrix::Identity(n, n);
  } else {
    const CMatrix T11 = T.topLeftCorner(m, m);
    const CMatrix T22 = T.bottomRightCorner(n - m, n - m);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n - m; ++j) gap = std::min(gap, std::abs(T11(i, i) - T22(j, j)));
    if (gap < tol.peripheral)
      throw NumericError(
          "peripheral_projection: peripheral/non-peripheral eigenvalue gap " +
          std::to_string(gap) + " is below the peripheral tolerance; Sylvester solve refused");
    const CMatrix Y = solve_triangular_sylvester(T11, T22, T.topRightCorner(m, n - m));
    CMatrix pi = CMatrix::Zero(n, n);
    pi.topLeftCorner(m, m) = CMatrix::Identity(m, m);
    pi.topRightCorner(m, n - m) = -Y;
    p = Q * pi * Q.adjoint();
  }

  PeripheralData pd;
  pd.sylvester_gap = m == n ? 1.0 : gap;
  pd.projector_superop = p;
  pd.idempotency_residual = (p * p - p).norm();
  const CMatrix s = ch.heisenberg_superop();
  pd.commutation_residual = (p * s - s * p).norm();
  const double scale = residual_scale({s.norm()});
  if (pd.idempotency_residual > tol.residual * scale)
    throw NumericError("peripheral_projection: projector is not idempotent (residual " +
                       std::to_string(pd.idempotency_residual) + ")");
  if (pd.commutation_residual > tol.residual * scale)
    throw NumericError("peripheral_projection: projector does not commute with the channel");

  pd.projector =
      Channel::from_superop(p, Picture::heisenberg, ch.label() + ".peripheral_projector", tol,
                            /*permissive=*/ch.permissive());
  if (!ch.permissive() && !pd.projector.validation().is_ucp)
    throw ConsistencyError("peripheral_projection: projector of a UCP channel is not UCP");

  // Attractor basis: orthonormalized projector images of the matrix units.
  const Index d = ch.dim();
  std::vector<CMatrix> images;
  images.reserve(static_cast<size_t>(d * d));
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) {
      CMatrix unit = CMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      images.push_back(unvec(p * vec(unit)));
    }
  pd.attractor = OperatorSubspace::from_spanning(d, images, tol);
  if (pd.attractor.dim() != m)
    throw ConsistencyError("peripheral_projection: attractor dimension " +
                           std::to_string(pd.attractor.dim()) +
                           " != peripheral multiplicity " + std::to_string(m));
  return pd;
}

}  // namespace

PeripheralData peripheral_projection(const Channel& ch, const SpectralDecomposition& sd) {
  PeripheralData pd = projector_from_schur(ch, sd.schur_t, sd.schur_q, sd.peripheral_count);
  pd.peripheral_eigenvalues.assign(sd.eigenvalues.data(),
                                   sd.eigenvalues.data() + sd.peripheral_count);
  return pd;
}

PeripheralData peripheral_projection(const Channel& ch) {
  return peripheral_projection(ch, spectrum(ch));
}

OperatorSubspace fixed_point_space(const Channel& ch, const SpectralDecomposition& sd) {
  const Tolerances& tol = ch.tolerances();
  // Reorder a copy with the eigenvalue-1 cluster leading, then project.
  CMatrix T = sd.schur_t, Q = sd.schur_q;
  const Index n = T.rows();
  Index m = 0;
  for (Index j = 0; j < n; ++j) {
    if (std::abs(T(j, j) - Complex(1.0)) > tol.peripheral) continue;
    Index jj = j;
    while (jj > m) {
      swap_adjacent(T, Q, jj - 1);
      --jj;
    }
    ++m;
  }
  if (m == 0) throw ConsistencyError("fixed_point_space: eigenvalue 1 not found");
  PeripheralData pd = projector_from_schur(ch, T, Q, m);
  return pd.attractor;
}

OperatorSubspace fixed_point_space(const Channel& ch) {
  return fixed_point_space(ch, spectrum(ch));
}

AsymptoticMap asymptotic_map(const Channel& ch, const PeripheralData& pd) {
  const Tolerances& tol = ch.tolerances();
  const Index m = pd.attractor.dim();
  const CMatrix& b = pd.attractor.basis_columns();
  const CMatrix s = ch.heisenberg_superop();
  AsymptoticMap am;
  am.matrix = b.adjoint() * s * b;
  // Off-range leakage would make this a compression rather than a
  // restriction; the attractor is invariant, so check it.
  const double leak = (s * b - b * am.matrix).norm();
  if (leak > tol.residual * residual_scale({s.norm()}))
    throw ConsistencyError("asymptotic_map: attractor is not invariant (leak " +
                           std::to_string(leak) + ")");
  Eigen::FullPivLU<CMatrix> lu(am.matrix);
  lu.setThreshold(tol.ortho);
  if (!lu.isInvertible())
    throw NumericError(
        "asymptotic_map: restriction is numerically singular; peripheral cluster selection is "
        "suspect");
  am.inverse = lu.inverse();
  if (m > 0) {
    Eigen::ComplexEigenSolver<CMatrix> es(am.matrix, false);
    const auto mods = es.eigenvalues().cwiseAbs();
    if ((mods.array() - 1.0).abs().maxCoeff() > tol.peripheral)
      throw ConsistencyError("asymptotic_map: non-unimodular eigenvalue in the restriction");
  }
  return am;
}

CMatrix project_peripheral(const PeripheralData& pd, const CMatrix& X) {
  return unvec(pd.projector_superop * vec(X));
}

}  // namespace qdfa
