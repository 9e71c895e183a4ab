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

#include "qdfa/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "qdfa/rng.hpp"

namespace qdfa {

Complex hs_inner(const CMatrix& A, const CMatrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw InvalidInputError("hs_inner: shape mismatch");
  if (A.rows() != A.cols()) throw InvalidInputError("hs_inner: square matrices expected");
  return (A.adjoint() * B).trace();
}

double operator_norm(const CMatrix& A) {
  if (A.size() == 0) return 0.0;
  if (A.isZero(0.0)) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues()(0);
}

double spectral_radius(const CMatrix& A) {
  if (A.rows() != A.cols()) throw InvalidInputError("spectral_radius: square matrix expected");
  if (A.size() == 0) return 0.0;
  Eigen::ComplexEigenSolver<CMatrix> es(A, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericError("spectral_radius: eigensolver did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

CVector vec(const CMatrix& A) {
  // Eigen matrices are column-major, so a flat view is column stacking.
  return Eigen::Map<const CVector>(A.data(), A.size());
}

CMatrix unvec(const CVector& v) {
  const auto n = v.size();
  const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (d * d != n) throw InvalidInputError("unvec: length is not a perfect square");
  return Eigen::Map<const CMatrix>(v.data(), d, d);
}

double residual_scale(std::initializer_list<double> norms) {
  double s = 1.0;
  for (double n : norms) s = std::max(s, n);
  return s;
}

CMatrix support_projection(const CMatrix& A, const Tolerances& tol) {
  if (A.rows() != A.cols()) throw InvalidInputError("support_projection: square matrix expected");
  const double herm = (A - A.adjoint()).norm();
  if (herm > tol.psd * residual_scale({A.norm()}))
    throw InvalidInputError("support_projection: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es((A + A.adjoint()) / 2.0);
  if (es.info() != Eigen::Success)
    throw NumericError("support_projection: eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  const double top = std::max(0.0, ev.maxCoeff());
  const double cutoff = tol.psd * std::max(1.0, top);
  if (ev.minCoeff() < -cutoff)
    throw InvalidInputError("support_projection: input is not PSD (min eigenvalue " +
                            std::to_string(ev.minCoeff()) + ")");
  CMatrix proj = CMatrix::Zero(A.rows(), A.cols());
  for (Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cutoff) proj += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return proj;
}

OperatorSubspace OperatorSubspace::from_spanning(Index dim_h, const std::vector<CMatrix>& mats,
                                                 const Tolerances& tol) {
  OperatorSubspace s;
  s.dim_h_ = dim_h;
  s.cols_ = CMatrix::Zero(dim_h * dim_h, 0);
  if (mats.empty()) return s;
  CMatrix stacked(dim_h * dim_h, static_cast<Index>(mats.size()));
  for (size_t k = 0; k < mats.size(); ++k) {
    const CMatrix& m = mats[k];
    if (m.rows() != dim_h || m.cols() != dim_h)
      throw InvalidInputError("OperatorSubspace: spanning matrices must be dim_h x dim_h");
    stacked.col(static_cast<Index>(k)) = vec(m);
  }
  Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? tol.ortho * std::max(1.0, sv(0)) : 0.0;
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  s.cols_ = svd.matrixU().leftCols(rank);
  s.basis_.reserve(rank);
  for (Index k = 0; k < rank; ++k) s.basis_.push_back(unvec(s.cols_.col(k)));
  return s;
}

OperatorSubspace OperatorSubspace::from_orthonormal(Index dim_h, std::vector<CMatrix> basis,
                                                    const Tolerances& tol) {
  OperatorSubspace s;
  s.dim_h_ = dim_h;
  s.basis_ = std::move(basis);
  s.cols_ = CMatrix::Zero(dim_h * dim_h, static_cast<Index>(s.basis_.size()));
  for (Index k = 0; k < s.dim(); ++k) s.cols_.col(k) = vec(s.basis_[static_cast<size_t>(k)]);
  if (s.gram_residual() > tol.ortho)
    throw InvalidInputError("OperatorSubspace: basis is not orthonormal");
  return s;
}

CMatrix OperatorSubspace::project(const CMatrix& X) const {
  if (X.rows() != dim_h_ || X.cols() != dim_h_)
    throw InvalidInputError("OperatorSubspace::project: shape mismatch");
  if (dim() == 0) return CMatrix::Zero(dim_h_, dim_h_);
  return unvec(cols_ * (cols_.adjoint() * vec(X)));
}

CMatrix OperatorSubspace::projector_matrix() const {
  if (dim() == 0) return CMatrix::Zero(dim_h_ * dim_h_, dim_h_ * dim_h_);
  return cols_ * cols_.adjoint();
}

std::pair<bool, double> OperatorSubspace::contains(const CMatrix& X, const Tolerances& tol) const {
  const double residual = (X - project(X)).norm() / std::max(1.0, X.norm());
  return {residual <= tol.residual, residual};
}

double OperatorSubspace::gram_residual() const {
  if (dim() == 0) return 0.0;
  return (cols_.adjoint() * cols_ - CMatrix::Identity(dim(), dim())).norm();
}

OperatorSubspace subspace_intersect(const OperatorSubspace& s1, const OperatorSubspace& s2,
                                    const Tolerances& tol) {
  if (s1.dim_h() != s2.dim_h())
    throw InvalidInputError("subspace_intersect: dimension mismatch");
  const Index n = s1.dim_h() * s1.dim_h();
  if (s1.dim() == 0 || s2.dim() == 0)
    return OperatorSubspace::from_spanning(s1.dim_h(), {}, tol);
  CMatrix stacked(2 * n, n);
  stacked.topRows(n) = s1.projector_matrix() - CMatrix::Identity(n, n);
  stacked.bottomRows(n) = s2.projector_matrix() - CMatrix::Identity(n, n);
  Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = tol.ortho * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  std::vector<CMatrix> basis;
  for (Index k = rank; k < n; ++k) basis.push_back(unvec(svd.matrixV().col(k)));
  return OperatorSubspace::from_spanning(s1.dim_h(), basis, tol);
}

OperatorSubspace subspace_sum(const OperatorSubspace& s1, const OperatorSubspace& s2,
                              const Tolerances& tol) {
  if (s1.dim_h() != s2.dim_h()) throw InvalidInputError("subspace_sum: dimension mismatch");
  std::vector<CMatrix> mats = s1.basis();
  mats.insert(mats.end(), s2.basis().begin(), s2.basis().end());
  return OperatorSubspace::from_spanning(s1.dim_h(), mats, tol);
}

double projector_distance(const OperatorSubspace& s1, const OperatorSubspace& s2) {
  return operator_norm(s1.projector_matrix() - s2.projector_matrix());
}

bool subspace_equal(const OperatorSubspace& s1, const OperatorSubspace& s2,
                    const Tolerances& tol) {
  if (s1.dim_h() != s2.dim_h()) return false;
  return projector_distance(s1, s2) <= tol.residual;
}

double containment_residual(const OperatorSubspace& s1, const OperatorSubspace& s2) {
  double worst = 0.0;
  for (const auto& b : s1.basis()) worst = std::max(worst, (b - s2.project(b)).norm());
  return worst;
}

// ---- Rng -------------------------------------------------------------

std::uint64_t Rng::mix(std::uint64_t a, std::uint64_t b) {
  // splitmix64 on the combined word
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double Rng::gauss() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * M_PI * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * M_PI * u2);
}

CMatrix Rng::gaussian_matrix(Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = cgauss();
  return m;
}

CMatrix Rng::hermitian_matrix(Index d) {
  CMatrix g = gaussian_matrix(d, d);
  return (g + g.adjoint()) / 2.0;
}

CMatrix Rng::psd_matrix(Index d) {
  CMatrix g = gaussian_matrix(d, d);
  return g.adjoint() * g;
}

CMatrix Rng::rank_one(Index d) {
  CVector u(d), v(d);
  for (Index i = 0; i < d; ++i) u(i) = cgauss(), v(i) = cgauss();
  return u * v.adjoint();
}

CVector Rng::unit_vector(Index d) {
  CVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = cgauss();
  return v / v.norm();
}

CMatrix Rng::isometry(Index rows, Index cols) {
  if (rows < cols) throw InvalidInputError("Rng::isometry: rows < cols");
  CMatrix g = gaussian_matrix(rows, cols);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  CMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Index j = 0; j < cols; ++j) {
    const Complex rd = r(j, j);
    const double a = std::abs(rd);
    if (a > 0) q.col(j) *= rd / a;
  }
  return q;
}

CMatrix Rng::haar_unitary(Index d) { return isometry(d, d); }

}  // namespace qdfa
