// Copyright 2026 The pagecurve Authors
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

#ifndef PAGECURVE_CORE_HPP
#define PAGECURVE_CORE_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pagecurve {

using Complex = std::complex<double>;
using Qubit = std::size_t;
using QubitList = std::vector<Qubit>;

using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Raised when a caller violates an operation's precondition (bad index,
/// non-unitary matrix, out-of-range parameter, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a request would exceed a configured size cap.
class MemoryBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical routine cannot meet its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

/// Largest elementwise deviation of U^dagger U from the identity.
inline double unitarity_deviation(const Matrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  const Matrix g = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
  return unitarity_deviation(u) <= tol;
}

/// Max elementwise |a - e^{i phi} b| after aligning the phase on the largest
/// entry of b. Used to compare operators that are only defined up to phase.
inline double phase_distance(const Matrix& a, const Matrix& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  if (std::abs(b(r, c)) == 0.0) return a.cwiseAbs().maxCoeff();
  Complex ph = a(r, c) / b(r, c);
  ph /= std::abs(ph);
  return (a - ph * b).cwiseAbs().maxCoeff();
}

/// Kronecker product with `hi` acting on the more significant index bits.
inline Matrix kron(const Matrix& hi, const Matrix& lo) {
  Matrix out(hi.rows() * lo.rows(), hi.cols() * lo.cols());
  for (Eigen::Index i = 0; i < hi.rows(); ++i)
    for (Eigen::Index j = 0; j < hi.cols(); ++j)
      out.block(i * lo.rows(), j * lo.cols(), lo.rows(), lo.cols()) = hi(i, j) * lo;
  return out;
}

namespace pauli {
inline Matrix2 I() { return Matrix2::Identity(); }
inline Matrix2 X() { Matrix2 m; m << 0, 1, 1, 0; return m; }
inline Matrix2 Y() { Matrix2 m; m << 0, -kI, kI, 0; return m; }
inline Matrix2 Z() { Matrix2 m; m << 1, 0, 0, -1; return m; }
}  // namespace pauli

}  // namespace pagecurve

#endif  // PAGECURVE_CORE_HPP
