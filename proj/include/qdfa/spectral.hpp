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

#ifndef QDFA_SPECTRAL_HPP
#define QDFA_SPECTRAL_HPP

#include <vector>

#include "qdfa/channel.hpp"
#include "qdfa/linalg.hpp"
#include "qdfa/types.hpp"

namespace qdfa {

/// Ordered Schur data of the Heisenberg superoperator. The peripheral
/// cluster (|lambda| >= 1 - tol.peripheral) leads, with equal eigenvalues
/// adjacent so that the leading diagonal blocks expose nilpotent defects.
struct SpectralDecomposition {
  CVector eigenvalues;              // Schur diagonal, peripheral first
  std::vector<bool> peripheral_mask;
  Index peripheral_count = 0;
  CMatrix schur_t;                  // upper triangular
  CMatrix schur_q;                  // unitary, superop = Q T Q^dag
  std::vector<Index> cluster_sizes; // peripheral cluster partition, in order
  double semisimplicity_residual = 0.0;
};

/// Schur form of the Heisenberg superoperator with validation:
/// reconstruction, eigenvalue-conjugation pairing, |lambda| <= 1 +
/// tol.peripheral, 1 in the spectrum, peripheral semisimplicity.
SpectralDecomposition spectrum(const Channel& ch);

/// The spectral projector onto the peripheral invariant subspace, as a
/// channel, plus the attractor subspace it ranges over.
struct PeripheralData {
  Channel projector;                  // Heisenberg channel, idempotent
  CMatrix projector_superop;          // cached d^2 x d^2 matrix
  OperatorSubspace attractor;         // range of the projector
  std::vector<Complex> peripheral_eigenvalues;
  double idempotency_residual = 0.0;
  double commutation_residual = 0.0;  // ||P S - S P||
  double sylvester_gap = 0.0;         // min cluster separation used in the solve
};

/// Block-diagonalize the ordered Schur form via a triangular Sylvester solve
/// and return the peripheral spectral projector. Fails with a gap report
/// when the peripheral/non-peripheral separation is below tol.peripheral.
PeripheralData peripheral_projection(const Channel& ch);
PeripheralData peripheral_projection(const Channel& ch, const SpectralDecomposition& sd);

/// Eigenspace of the eigenvalue-1 cluster (|lambda - 1| <= tol.peripheral);
/// a subspace of the attractor.
OperatorSubspace fixed_point_space(const Channel& ch);
OperatorSubspace fixed_point_space(const Channel& ch, const SpectralDecomposition& sd);

/// Restriction of the channel to the attractor basis and its inverse.
/// All eigenvalues of the restriction are unimodular; the inverse comes from
/// direct matrix inversion of the m x m restriction.
struct AsymptoticMap {
  CMatrix matrix;   // m x m, coordinates of Phi(b_j) in the attractor basis
  CMatrix inverse;
};

AsymptoticMap asymptotic_map(const Channel& ch, const PeripheralData& pd);

/// Apply the peripheral projector to a matrix.
CMatrix project_peripheral(const PeripheralData& pd, const CMatrix& X);

}  // namespace qdfa

#endif  // QDFA_SPECTRAL_HPP
