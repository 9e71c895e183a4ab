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

#ifndef QDFA_TYPES_HPP
#define QDFA_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace qdfa {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Numerical decision thresholds used throughout the library.
///
/// Rank decisions use an absolute-plus-relative cutoff
/// tol * max(1, largest singular value), which behaves for both tiny and
/// O(1) matrices.
struct Tolerances {
  double ortho = 1e-10;       ///< orthonormality / rank decisions
  double psd = 1e-9;          ///< positive-semidefiniteness slack
  double residual = 1e-8;     ///< generic consistency residuals
  double peripheral = 1e-7;   ///< |lambda| >= 1 - peripheral selects the peripheral cluster

  void validate() const {
    if (!(ortho > 0 && psd > 0 && residual > 0 && peripheral > 0))
      throw std::invalid_argument("Tolerances: all thresholds must be strictly positive");
  }
};

/// Error kinds mirror the CLI / C API status contract.
enum class ErrorKind {
  invalid_input,   // bad shapes, malformed JSON, non-UCP without permissive
  numeric_failure, // eigensolver breakdown, ill-conditioned Sylvester solve
  consistency,     // two independent routes to the same fact disagree
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidInputError : Error {
  explicit InvalidInputError(const std::string& msg) : Error(ErrorKind::invalid_input, msg) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& msg) : Error(ErrorKind::numeric_failure, msg) {}
};

struct ConsistencyError : Error {
  explicit ConsistencyError(const std::string& msg) : Error(ErrorKind::consistency, msg) {}
};

}  // namespace qdfa

#endif  // QDFA_TYPES_HPP
