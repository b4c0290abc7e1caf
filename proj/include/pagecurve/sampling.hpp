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

#ifndef PAGECURVE_SAMPLING_HPP
#define PAGECURVE_SAMPLING_HPP

#include <cmath>
#include <vector>

#include "pagecurve/core.hpp"
#include "pagecurve/rng.hpp"
#include "pagecurve/statevec.hpp"

namespace pagecurve {

inline constexpr std::size_t kMaxGlobalHaarQubits = 12;

/// dim x dim matrix of iid complex normals, filled column by column.
inline Matrix ginibre(std::size_t dim, Engine& rng) {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix g(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) g(r, c) = complex_normal(rng);
  return g;
}

/// Haar-distributed element of U(dim): QR of a Ginibre matrix with the
/// phases of R's diagonal moved into Q, which makes the QR factorization
/// unique and the distribution exactly Haar.
inline Matrix haar_unitary(std::size_t dim, Engine& rng) {
  const Matrix g = ginibre(dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    q.col(k) *= mag > 0.0 ? d / mag : Complex(1.0);
  }
  return q;
}

inline Matrix2 sample_cue_1q(Engine& rng) { return haar_unitary(2, rng); }

/// Haar sample on U(4) rescaled by det^{-1/4} onto SU(4).
inline Matrix4 sample_haar_su4(Engine& rng) {
  Matrix4 u = haar_unitary(4, rng);
  const Complex det = u.determinant();
  u *= std::polar(1.0, -std::arg(det) / 4.0);
  return u;
}

inline Matrix sample_haar_global(std::size_t n_qubits, Engine& rng) {
  if (n_qubits > kMaxGlobalHaarQubits)
    throw MemoryBudgetError("global Haar unitaries are capped at " + std::to_string(kMaxGlobalHaarQubits) +
                            " qubits (a 2^" + std::to_string(n_qubits) + " square matrix was requested)");
  return haar_unitary(std::size_t{1} << n_qubits, rng);
}

/// Haar-random pure state. Equals the first column of sample_haar_global()
/// drawn from the same engine state (the normalized first Ginibre column),
/// without the cubic-cost factorization.
inline StateVector sample_haar_state(std::size_t n_qubits, Engine& rng, const SimLimits& limits = {}) {
  StateVector s(n_qubits, 0, limits);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    s[i] = complex_normal(rng);
    norm2 += std::norm(s[i]);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (std::size_t i = 0; i < s.dim(); ++i) s[i] *= inv;
  return s;
}

}  // namespace pagecurve

#endif  // PAGECURVE_SAMPLING_HPP
