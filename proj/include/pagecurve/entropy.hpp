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

// Subsystem entropies of pure states (all in nats) and the Haar-average
// closed forms they are compared against.

#ifndef PAGECURVE_ENTROPY_HPP
#define PAGECURVE_ENTROPY_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pagecurve/core.hpp"
#include "pagecurve/statevec.hpp"

namespace pagecurve {

inline constexpr std::size_t kDefaultGramCap = 14;

inline QubitList left_block(std::size_t size) {
  QubitList q(size);
  std::iota(q.begin(), q.end(), Qubit{0});
  return q;
}

inline QubitList complement(std::span<const Qubit> sub, std::size_t n_qubits) {
  QubitList out;
  for (Qubit q = 0; q < n_qubits; ++q)
    if (std::find(sub.begin(), sub.end(), q) == sub.end()) out.push_back(q);
  return out;
}

namespace detail {

inline bool is_left_block(std::span<const Qubit> sub) {
  for (std::size_t k = 0; k < sub.size(); ++k)
    if (sub[k] != k) return false;
  return true;
}

/// Amplitudes reshaped to a 2^L x 2^(N-L) matrix: row = subsystem bits,
/// column = complement bits.
inline Matrix bipartition(const StateVector& state, std::span<const Qubit> sub) {
  check_subsystem(sub, state.n_qubits());
  const auto rows = static_cast<Eigen::Index>(std::size_t{1} << sub.size());
  const auto cols = static_cast<Eigen::Index>(std::size_t{1} << (state.n_qubits() - sub.size()));
  if (is_left_block(sub)) return Eigen::Map<const Matrix>(state.amplitudes().data(), rows, cols);
  const QubitList rest = complement(sub, state.n_qubits());
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < state.dim(); ++i)
    m(static_cast<Eigen::Index>(gather_bits(i, sub)), static_cast<Eigen::Index>(gather_bits(i, rest))) = state[i];
  return m;
}

/// Gram matrix on the smaller side of the cut; it shares its nonzero
/// spectrum with the reduced density matrix of either side.
inline Matrix smaller_gram(const StateVector& state, std::span<const Qubit> sub, std::size_t cap) {
  const std::size_t l = sub.size(), rest = state.n_qubits() - l;
  require(std::min(l, rest) <= cap, "subsystem Gram matrix would need 2^" + std::to_string(std::min(l, rest)) +
                                        " rows; cap is 2^" + std::to_string(cap));
  const Matrix m = bipartition(state, sub);
  if (l <= rest) return m * m.adjoint();
  return m.adjoint() * m;
}

}  // namespace detail

/// Tr(rho_L^2) as the squared Frobenius norm of the smaller Gram matrix.
inline double reduced_purity(const StateVector& state, std::span<const Qubit> sub,
                             std::size_t gram_cap = kDefaultGramCap) {
  detail::check_subsystem(sub, state.n_qubits());
  if (sub.empty() || sub.size() == state.n_qubits()) return 1.0;
  return detail::smaller_gram(state, sub, gram_cap).squaredNorm();
}

/// Eigenvalues of rho_L (nonzero part), clamped at 0, descending.
inline std::vector<double> entanglement_spectrum(const StateVector& state, std::span<const Qubit> sub,
                                                 std::size_t gram_cap = kDefaultGramCap) {
  detail::check_subsystem(sub, state.n_qubits());
  if (sub.empty() || sub.size() == state.n_qubits()) return {1.0};
  const Matrix g = detail::smaller_gram(state, sub, gram_cap);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  std::vector<double> vals(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  for (double& v : vals) v = std::max(v, 0.0);
  std::sort(vals.rbegin(), vals.rend());
  return vals;
}

inline double renyi_entropy(const StateVector& state, std::span<const Qubit> sub, unsigned order = 2,
                            std::size_t gram_cap = kDefaultGramCap) {
  require(order >= 2, "Renyi order must be an integer >= 2");
  if (order == 2) return -std::log(reduced_purity(state, sub, gram_cap));
  double tr = 0.0;
  for (double v : entanglement_spectrum(state, sub, gram_cap)) tr += std::pow(v, static_cast<double>(order));
  return std::log(1.0 / tr) / static_cast<double>(order - 1);
}

inline double von_neumann_entropy(const StateVector& state, std::span<const Qubit> sub,
                                  std::size_t gram_cap = kDefaultGramCap) {
  double s = 0.0;
  for (double v : entanglement_spectrum(state, sub, gram_cap))
    if (v > 0.0) s -= v * std::log(v);
  return s;
}

/// <phi| rho_sub |phi> for a pure target phi on the subsystem.
inline double subsystem_fidelity(const StateVector& state, std::span<const Qubit> sub, const StateVector& target) {
  require(target.n_qubits() == sub.size(), "target state must live on the subsystem");
  const Matrix m = detail::bipartition(state, sub);
  const Eigen::Map<const Eigen::VectorXcd> phi(target.amplitudes().data(), static_cast<Eigen::Index>(target.dim()));
  return (m.transpose() * phi.conjugate()).squaredNorm();
}

namespace detail {

/// sum_{k=m+1}^{n} 1/k. Direct Neumaier summation up to 2^22 terms;
/// beyond that the tail above 2^20 uses the Euler-Maclaurin expansion of
/// the harmonic numbers, whose truncation error there is below 1e-38.
inline double harmonic_difference(double m, double n) {
  auto direct = [](double lo, double hi) {
    double sum = 0.0, comp = 0.0;
    for (double k = hi; k > lo; k -= 1.0) {  // smallest terms first
      const double term = 1.0 / k;
      const double t = sum + term;
      comp += std::abs(sum) >= term ? (sum - t) + term : (term - t) + sum;
      sum = t;
    }
    return sum + comp;
  };
  if (n - m <= 4194304.0) return direct(m, n);
  const double pivot = std::max(m, 1048576.0);
  auto tail = [](double x) { return -1.0 / (2 * x) + 1.0 / (12 * x * x) - 1.0 / (120 * x * x * x * x); };
  const double upper = std::log(n / pivot) - tail(n) + tail(pivot);
  return upper + (pivot > m ? direct(m, pivot) : 0.0);
}

}  // namespace detail

/// Average von Neumann entropy of an L-qubit subsystem of a Haar-random
/// (L+M)-qubit state. L and M are exchanged first if L > M.
inline double page_entropy(std::size_t l, std::size_t m) {
  if (l > m) std::swap(l, m);
  require(l + m <= 40, "page_entropy supports at most 40 qubits in total");
  if (l == 0) return 0.0;
  const double dim_small = std::ldexp(1.0, static_cast<int>(l));
  const double dim_large = std::ldexp(1.0, static_cast<int>(m));
  const double dim_total = std::ldexp(1.0, static_cast<int>(l + m));
  return detail::harmonic_difference(dim_large, dim_total) - (dim_small - 1.0) / (2.0 * dim_large);
}

/// Haar average of Tr(rho_L^2) is (2^L + 2^(N-L)) / (2^N + 1); this is
/// minus its logarithm.
inline double haar_avg_renyi2(std::size_t l, std::size_t n) {
  require(l <= n, "subsystem larger than the system");
  const double num = std::ldexp(1.0, static_cast<int>(l)) + std::ldexp(1.0, static_cast<int>(n - l));
  const double den = std::ldexp(1.0, static_cast<int>(n)) + 1.0;
  return -std::log(num / den);
}

/// Leading-order Page entropy L ln2 - 2^(2L-N-1), with L taken as the
/// smaller side of the cut.
inline double page_approx(std::size_t l, std::size_t n) {
  require(l >= 1 && l <= n, "page_approx needs 1 <= L <= N");
  const std::size_t small = std::min(l, n - l);
  return static_cast<double>(small) * std::log(2.0) -
         std::ldexp(1.0, static_cast<int>(2 * small) - static_cast<int>(n) - 1);
}

/// Horizon area over four (Planck units).
inline double bh_entropy(double area) {
  require(area >= 0.0, "area must be nonnegative");
  return area / 4.0;
}

}  // namespace pagecurve

#endif  // PAGECURVE_ENTROPY_HPP
