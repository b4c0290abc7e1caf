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

#ifndef PAGECURVE_STATEVEC_HPP
#define PAGECURVE_STATEVEC_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pagecurve/core.hpp"
#include "pagecurve/gate.hpp"
#include "pagecurve/rng.hpp"

namespace pagecurve {

/// Size caps. A 25-qubit register (2N+1 for N = 12) needs 512 MiB of
/// amplitudes; the default cap of 26 qubits allows 1 GiB.
struct SimLimits {
  std::size_t max_qubits = 26;
  std::size_t max_marginal_qubits = 16;
};

inline std::uint64_t state_bytes(std::size_t n_qubits) {
  return (std::uint64_t{1} << n_qubits) * sizeof(Complex);
}

namespace detail {

inline std::size_t insert_zero_bit(std::size_t k, std::size_t pos) {
  const std::size_t low = k & ((std::size_t{1} << pos) - 1);
  return ((k >> pos) << (pos + 1)) | low;
}

inline void check_subsystem(std::span<const Qubit> sub, std::size_t n_qubits) {
  for (std::size_t i = 0; i < sub.size(); ++i) {
    require(sub[i] < n_qubits, "subsystem index " + std::to_string(sub[i]) + " out of range for " +
                                   std::to_string(n_qubits) + " qubits");
    for (std::size_t j = 0; j < i; ++j)
      require(sub[i] != sub[j], "duplicate subsystem index " + std::to_string(sub[i]));
  }
}

/// Gathers the bits of `index` at positions `sub` into a little-endian word.
inline std::size_t gather_bits(std::size_t index, std::span<const Qubit> sub) {
  std::size_t j = 0;
  for (std::size_t k = 0; k < sub.size(); ++k) j |= ((index >> sub[k]) & 1U) << k;
  return j;
}

}  // namespace detail

/// Dense statevector. Basis index bit q holds the value of qubit q (qubit 0
/// is the least significant bit).
class StateVector {
 public:
  explicit StateVector(std::size_t n_qubits, std::uint64_t basis_index = 0,
                       const SimLimits& limits = {})
      : n_(n_qubits) {
    if (n_qubits > limits.max_qubits)
      throw MemoryBudgetError("a " + std::to_string(n_qubits) + "-qubit state needs " +
                              std::to_string(state_bytes(n_qubits)) + " bytes; the cap is " +
                              std::to_string(limits.max_qubits) + " qubits (" +
                              std::to_string(state_bytes(limits.max_qubits)) + " bytes)");
    require(basis_index < (std::uint64_t{1} << n_qubits),
            "basis index " + std::to_string(basis_index) + " out of range for " +
                std::to_string(n_qubits) + " qubits");
    amp_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amp_[basis_index] = 1.0;
  }

  /// Wraps existing amplitudes; the length must be a power of two.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes) {
    require(!amplitudes.empty() && std::has_single_bit(amplitudes.size()),
            "amplitude count must be a power of two");
    StateVector s;
    s.n_ = static_cast<std::size_t>(std::countr_zero(amplitudes.size()));
    s.amp_ = std::move(amplitudes);
    return s;
  }

  std::size_t n_qubits() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  std::span<const Complex> amplitudes() const { return amp_; }
  std::span<Complex> amplitudes() { return amp_; }
  const Complex& operator[](std::size_t i) const { return amp_[i]; }
  Complex& operator[](std::size_t i) { return amp_[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
  }

  void apply(const Gate& g) {
    validate_gate(g, n_);
    const auto& q = g.qubits;
    switch (g.kind) {
      case GateKind::X: apply_x(q[0]); break;
      case GateKind::CNOT: apply_cnot(q[0], q[1]); break;
      case GateKind::SWAP: apply_swap(q[0], q[1]); break;
      case GateKind::CSWAP: apply_cswap(q[0], q[1], q[2]); break;
      case GateKind::CZ: apply_cz(q[0], q[1]); break;
      case GateKind::RZ: apply_diagonal_1q(q[0], std::polar(1.0, -g.angle / 2), std::polar(1.0, g.angle / 2)); break;
      case GateKind::H:
      case GateKind::SX:
      case GateKind::SXdg:
      case GateKind::Unitary1: apply_1q(q[0], gate_matrix(g)); break;
      case GateKind::Unitary2: apply_2q(q[0], q[1], g.matrix); break;
      case GateKind::Unitary3: apply_matrix(q, g.matrix); break;
    }
  }

  void apply_1q(Qubit q, const Matrix2& m) {
    const std::size_t stride = std::size_t{1} << q;
    const Complex m00 = m(0, 0), m01 = m(0, 1), m10 = m(1, 0), m11 = m(1, 1);
    for (std::size_t base = 0; base < amp_.size(); base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) {
        const Complex a = amp_[i], b = amp_[i + stride];
        amp_[i] = m00 * a + m01 * b;
        amp_[i + stride] = m10 * a + m11 * b;
      }
    }
  }

  /// 4x4 unitary with q0 as the low bit of the local index.
  void apply_2q(Qubit q0, Qubit q1, const Matrix4& m) {
    const std::size_t lo = std::min(q0, q1), hi = std::max(q0, q1);
    const std::size_t b0 = std::size_t{1} << q0, b1 = std::size_t{1} << q1;
    const std::size_t quarter = amp_.size() >> 2;
    for (std::size_t k = 0; k < quarter; ++k) {
      const std::size_t i = detail::insert_zero_bit(detail::insert_zero_bit(k, lo), hi);
      const std::size_t idx[4] = {i, i | b0, i | b1, i | b0 | b1};
      const Complex v[4] = {amp_[idx[0]], amp_[idx[1]], amp_[idx[2]], amp_[idx[3]]};
      for (int r = 0; r < 4; ++r)
        amp_[idx[r]] = m(r, 0) * v[0] + m(r, 1) * v[1] + m(r, 2) * v[2] + m(r, 3) * v[3];
    }
  }

  /// General k-qubit matrix, little-endian over `qubits`.
  void apply_matrix(std::span<const Qubit> qubits, const Matrix& m) {
    const std::size_t k = qubits.size();
    const std::size_t local = std::size_t{1} << k;
    std::vector<Qubit> sorted(qubits.begin(), qubits.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> offset(local, 0);
    for (std::size_t l = 0; l < local; ++l)
      for (std::size_t t = 0; t < k; ++t)
        if ((l >> t) & 1U) offset[l] |= std::size_t{1} << qubits[t];
    std::vector<Complex> v(local);
    for (std::size_t c = 0; c < (amp_.size() >> k); ++c) {
      std::size_t base = c;
      for (Qubit s : sorted) base = detail::insert_zero_bit(base, s);
      for (std::size_t l = 0; l < local; ++l) v[l] = amp_[base | offset[l]];
      for (std::size_t r = 0; r < local; ++r) {
        Complex acc = 0.0;
        for (std::size_t l = 0; l < local; ++l) acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) * v[l];
        amp_[base | offset[r]] = acc;
      }
    }
  }

 private:
  StateVector() = default;

  void apply_x(Qubit q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if (!(i & bit)) std::swap(amp_[i], amp_[i | bit]);
  }
  void apply_cnot(Qubit c, Qubit t) {
    const std::size_t cb = std::size_t{1} << c, tb = std::size_t{1} << t;
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if ((i & cb) && !(i & tb)) std::swap(amp_[i], amp_[i | tb]);
  }
  void apply_swap(Qubit a, Qubit b) {
    const std::size_t ab = std::size_t{1} << a, bb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if ((i & ab) && !(i & bb)) std::swap(amp_[i], amp_[(i ^ ab) | bb]);
  }
  void apply_cswap(Qubit c, Qubit a, Qubit b) {
    const std::size_t cb = std::size_t{1} << c, ab = std::size_t{1} << a, bb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if ((i & cb) && (i & ab) && !(i & bb)) std::swap(amp_[i], amp_[(i ^ ab) | bb]);
  }
  void apply_cz(Qubit a, Qubit b) {
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if ((i & mask) == mask) amp_[i] = -amp_[i];
  }
  void apply_diagonal_1q(Qubit q, Complex d0, Complex d1) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i) amp_[i] *= (i & bit) ? d1 : d0;
  }

  std::size_t n_ = 0;
  std::vector<Complex> amp_;
};

inline StateVector init_state(std::size_t n_qubits, std::uint64_t basis_index = 0,
                              const SimLimits& limits = {}) {
  return StateVector(n_qubits, basis_index, limits);
}

inline void apply_gate(StateVector& state, const Gate& gate) { state.apply(gate); }

/// <a|b>
inline Complex inner_product(const StateVector& a, const StateVector& b) {
  require(a.dim() == b.dim(), "inner product of states with different sizes");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// Exact outcome distribution of measuring `subsystem` in the computational
/// basis. Entry j has bit k equal to the outcome of qubit subsystem[k].
inline std::vector<double> marginal_probs(const StateVector& state, std::span<const Qubit> subsystem,
                                          const SimLimits& limits = {}) {
  detail::check_subsystem(subsystem, state.n_qubits());
  require(subsystem.size() <= limits.max_marginal_qubits,
          "marginal over " + std::to_string(subsystem.size()) + " qubits exceeds the cap of " +
              std::to_string(limits.max_marginal_qubits));
  std::vector<double> p(std::size_t{1} << subsystem.size(), 0.0);
  const auto amps = state.amplitudes();
  const bool left_block = [&] {
    for (std::size_t k = 0; k < subsystem.size(); ++k)
      if (subsystem[k] != k) return false;
    return true;
  }();
  if (left_block) {
    const std::size_t mask = p.size() - 1;
    for (std::size_t i = 0; i < amps.size(); ++i) p[i & mask] += std::norm(amps[i]);
  } else {
    for (std::size_t i = 0; i < amps.size(); ++i)
      p[detail::gather_bits(i, subsystem)] += std::norm(amps[i]);
  }
  return p;
}

/// Formats outcome j over `width` bits, most significant (last measured
/// qubit) first, so the string reads as the binary numeral of j.
inline std::string to_bitstring(std::uint64_t j, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t k = 0; k < width; ++k)
    if ((j >> k) & 1U) s[width - 1 - k] = '1';
  return s;
}

inline std::uint64_t from_bitstring(std::string_view s) {
  require(s.size() <= 64, "bitstring longer than 64 bits");
  std::uint64_t j = 0;
  for (char ch : s) {
    require(ch == '0' || ch == '1', "bitstring characters must be 0 or 1");
    j = (j << 1) | static_cast<std::uint64_t>(ch == '1');
  }
  return j;
}

/// Measured-outcome histogram. Keys use to_bitstring() over
/// measured_qubits.size() bits.
struct ShotTable {
  QubitList measured_qubits;
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  std::size_t width() const { return measured_qubits.size(); }

  /// Counts indexed by outcome value, length 2^width.
  std::vector<std::uint64_t> dense_counts() const {
    require(width() <= 30, "dense histogram over more than 30 bits");
    std::vector<std::uint64_t> out(std::size_t{1} << width(), 0);
    for (const auto& [key, n] : counts) out[from_bitstring(key)] += n;
    return out;
  }

  std::vector<double> frequencies() const {
    require(total > 0, "empty shot table");
    auto c = dense_counts();
    std::vector<double> f(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) f[j] = static_cast<double>(c[j]) / static_cast<double>(total);
    return f;
  }

  void validate() const {
    std::uint64_t sum = 0;
    for (const auto& [key, n] : counts) {
      require(key.size() == width(), "shot key '" + key + "' has the wrong length");
      from_bitstring(key);
      sum += n;
    }
    require(sum == total, "shot counts do not sum to the recorded total");
  }
};

/// Multinomial draw over a probability vector by sequential conditional
/// binomials; cost is linear in the number of outcomes, not in `shots`.
inline ShotTable sample_from_probs(std::span<const double> probs, QubitList measured,
                                   std::uint64_t shots, Engine& rng) {
  require(shots >= 1, "shots must be at least 1");
  require(probs.size() == (std::size_t{1} << measured.size()), "probability vector length mismatch");
  ShotTable table{std::move(measured), {}, shots};
  // Suffix masses make each conditional probability exact in the input and
  // the last positive outcome absorbs all remaining shots, so rounding can
  // never place a shot on a zero-probability outcome.
  std::vector<double> suffix(probs.size() + 1, 0.0);
  std::size_t last = probs.size();
  for (std::size_t j = probs.size(); j-- > 0;) {
    suffix[j] = suffix[j + 1] + std::max(probs[j], 0.0);
    if (last == probs.size() && probs[j] > 0.0) last = j;
  }
  require(last < probs.size(), "probability vector has no positive entry");
  std::uint64_t remaining = shots;
  for (std::size_t j = 0; j <= last && remaining > 0; ++j) {
    const double p = std::max(probs[j], 0.0);
    std::uint64_t n = 0;
    if (j == last) {
      n = remaining;
    } else if (p > 0.0) {
      n = std::binomial_distribution<std::uint64_t>(remaining, std::clamp(p / suffix[j], 0.0, 1.0))(rng);
    }
    remaining -= n;
    if (n > 0) table.counts[to_bitstring(j, table.width())] = n;
  }
  return table;
}

inline ShotTable sample_shots(const StateVector& state, std::span<const Qubit> subsystem,
                              std::uint64_t shots, Engine& rng, const SimLimits& limits = {}) {
  require(shots >= 1, "shots must be at least 1");
  const auto p = marginal_probs(state, subsystem, limits);
  return sample_from_probs(p, QubitList(subsystem.begin(), subsystem.end()), shots, rng);
}

/// Reduced density matrix on `subsystem` (index convention as marginal_probs).
inline Matrix reduced_density_matrix(const StateVector& state, std::span<const Qubit> subsystem) {
  detail::check_subsystem(subsystem, state.n_qubits());
  require(subsystem.size() <= 12, "reduced density matrix limited to 12 qubits");
  QubitList rest;
  for (Qubit q = 0; q < state.n_qubits(); ++q)
    if (std::find(subsystem.begin(), subsystem.end(), q) == subsystem.end()) rest.push_back(q);
  const auto rows = static_cast<Eigen::Index>(std::size_t{1} << subsystem.size());
  const auto cols = static_cast<Eigen::Index>(std::size_t{1} << rest.size());
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < state.dim(); ++i)
    m(static_cast<Eigen::Index>(detail::gather_bits(i, subsystem)),
      static_cast<Eigen::Index>(detail::gather_bits(i, rest))) = state[i];
  return m * m.adjoint();
}

}  // namespace pagecurve

#endif  // PAGECURVE_STATEVEC_HPP
