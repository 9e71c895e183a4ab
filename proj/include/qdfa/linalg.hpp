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

#ifndef QDFA_LINALG_HPP
#define QDFA_LINALG_HPP

#include <utility>
#include <vector>

#include "qdfa/types.hpp"

namespace qdfa {

/// tr(A^dag B); conjugate-linear in the first argument.
Complex hs_inner(const CMatrix& A, const CMatrix& B);

/// Frobenius norm, i.e. the norm of the Hilbert-Schmidt inner product.
inline double hs_norm(const CMatrix& A) { return A.norm(); }

/// Largest singular value.
double operator_norm(const CMatrix& A);

/// max |lambda| over eigenvalues; requires a square matrix.
double spectral_radius(const CMatrix& A);

/// Column-stacking vectorization: vec(AXB) = (B^T (x) A) vec(X).
CVector vec(const CMatrix& A);

/// Inverse of vec for square matrices; the length must be a perfect square.
CMatrix unvec(const CVector& v);

inline CMatrix identity(Index d) { return CMatrix::Identity(d, d); }

/// Scale factor for relative residual bounds: max(1, norms...).
double residual_scale(std::initializer_list<double> norms);

/// Orthogonal projector onto the range of a PSD matrix.
///
/// Eigenvalues above tol.psd * max(1, lambda_max) count as the support.
/// Throws InvalidInputError if A is not PSD within tol.psd.
CMatrix support_projection(const CMatrix& A, const Tolerances& tol);

/// A linear subspace of d x d matrices held as an HS-orthonormal basis.
class OperatorSubspace {
 public:
  OperatorSubspace() = default;

  /// HS-orthonormal basis of span(mats); rank decided by singular values
  /// against tol.ortho * max(1, sigma_max). An empty list gives dim 0.
  static OperatorSubspace from_spanning(Index dim_h, const std::vector<CMatrix>& mats,
                                        const Tolerances& tol);

  /// Wrap an already-orthonormal basis (checked against tol.ortho).
  static OperatorSubspace from_orthonormal(Index dim_h, std::vector<CMatrix> basis,
                                           const Tolerances& tol);

  Index dim_h() const { return dim_h_; }
  Index dim() const { return static_cast<Index>(basis_.size()); }
  const std::vector<CMatrix>& basis() const { return basis_; }

  /// Orthogonal projection of X onto the subspace.
  CMatrix project(const CMatrix& X) const;

  /// d^2 x d^2 matrix of the orthogonal projector in vec coordinates.
  CMatrix projector_matrix() const;

  /// Residual ||X - proj(X)||_HS / max(1, ||X||_HS) and the membership
  /// decision residual <= tol.residual.
  std::pair<bool, double> contains(const CMatrix& X, const Tolerances& tol) const;

  /// ||Gram - I|| of the stored basis (diagnostic).
  double gram_residual() const;

  /// Stacked vec's of the basis as columns (d^2 x dim).
  const CMatrix& basis_columns() const { return cols_; }

 private:
  Index dim_h_ = 0;
  std::vector<CMatrix> basis_;
  CMatrix cols_;  // d^2 x dim
};

/// Basis of S1 cap S2 from the stacked null space of (P1 - I) and (P2 - I).
OperatorSubspace subspace_intersect(const OperatorSubspace& s1, const OperatorSubspace& s2,
                                    const Tolerances& tol);

/// Span of the union of the two bases.
OperatorSubspace subspace_sum(const OperatorSubspace& s1, const OperatorSubspace& s2,
                              const Tolerances& tol);

/// Operator-norm distance between the two orthogonal projectors.
double projector_distance(const OperatorSubspace& s1, const OperatorSubspace& s2);

/// Basis-independent subspace equality: projector distance <= tol.residual.
bool subspace_equal(const OperatorSubspace& s1, const OperatorSubspace& s2,
                    const Tolerances& tol);

/// max over the basis of s1 of the containment residual in s2.
double containment_residual(const OperatorSubspace& s1, const OperatorSubspace& s2);

}  // namespace qdfa

#endif  // QDFA_LINALG_HPP
