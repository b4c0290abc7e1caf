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

// Purity estimation protocols.
//
// Swap test: two copies of the state plus an ancilla; H, controlled swaps
// over the subsystem, H. The ancilla reads 0 with probability
// P0 = (1 + Tr rho_L^2) / 2.
//
// Randomized measurements: rotate each subsystem qubit by an independent
// CUE unitary, measure, and correlate outcomes with weights (-2)^-D where
// D is the Hamming distance. The ensemble mean of
//   X = 2^L sum_{j,j'} (-2)^{-D(j,j')} P(j) P(j')
// is Tr rho_L^2.

#ifndef PAGECURVE_PROTOCOLS_HPP
#define PAGECURVE_PROTOCOLS_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pagecurve/builders.hpp"
#include "pagecurve/circuit.hpp"
#include "pagecurve/entropy.hpp"
#include "pagecurve/rng.hpp"
#include "pagecurve/sampling.hpp"
#include "pagecurve/stats.hpp"

namespace pagecurve {

enum class PurityMethod { exact, swap_mbi, rm_plugin, rm_unbiased };

inline std::string_view method_name(PurityMethod m) {
  switch (m) {
    case PurityMethod::exact: return "exact";
    case PurityMethod::swap_mbi: return "swap_mbi";
    case PurityMethod::rm_plugin: return "rm_plugin";
    case PurityMethod::rm_unbiased: return "rm_unbiased";
  }
  return "?";
}

/// Plugin multiplies empirical frequencies; unbiased drops the self-pairs
/// of individual shots, removing the O(1/shots) upward bias.
enum class Estimator { plugin, unbiased };

inline Estimator estimator_from_name(std::string_view s) {
  if (s == "plugin") return Estimator::plugin;
  if (s == "unbiased") return Estimator::unbiased;
  throw PreconditionError("unknown estimator '" + std::string(s) + "' (expected plugin or unbiased)");
}

inline std::string_view estimator_name(Estimator e) { return e == Estimator::plugin ? "plugin" : "unbiased"; }

struct PurityEstimate {
  double value = 0.0;
  double std_error = 0.0;
  PurityMethod method = PurityMethod::exact;
  nlohmann::json meta = nlohmann::json::object();
};

struct EntropyEstimate {
  double s2 = 0.0;
  double std_error = 0.0;
  bool valid = false;
};

/// S2 = -log(purity) with first-order error propagation. Nonpositive
/// estimates (possible with few shots) come back flagged invalid.
inline EntropyEstimate purity_to_entropy(const PurityEstimate& p) {
  if (!(p.value > 0.0)) return {};
  return {-std::log(p.value), p.std_error / p.value, true};
}

inline PurityEstimate exact_purity(const StateVector& state, std::span<const Qubit> sub) {
  return {reduced_purity(state, sub), 0.0, PurityMethod::exact, {{"shots", "exact"}}};
}

// ---------------------------------------------------------------------------
// Swap test

/// Suffix of the swap test on 2N+1 qubits: H on the ancilla (qubit 2N),
/// CSWAP(ancilla, s, N + s) for each s in `sub`, H on the ancilla.
inline Circuit swap_test_suffix(std::size_t n, std::span<const Qubit> sub) {
  const Qubit anc = 2 * n;
  Circuit c(2 * n + 1);
  c.add(gates::h(anc));
  for (Qubit s : sub) c.add(gates::cswap(anc, s, n + s));
  c.add(gates::h(anc));
  return c;
}

/// Two copies of `base` on qubits 0..N-1 and N..2N-1, then the swap test
/// on `sub`. The routed variant is laid out for a linear chain.
inline Circuit swap_mbi_circuit(const Circuit& base, std::span<const Qubit> sub, bool routed = false) {
  const std::size_t n = base.n_qubits();
  require(!sub.empty() && sub.size() <= n,
          "swap test subsystem size " + std::to_string(sub.size()) + " outside [1, " + std::to_string(n) + "]");
  detail::check_subsystem(sub, n);
  QubitList second(n);
  for (Qubit i = 0; i < n; ++i) second[i] = n + i;
  Circuit c(2 * n + 1);
  c.append(base);
  c.append(base, second);
  c.append(swap_test_suffix(n, sub));
  c.metadata() = base.metadata();
  c.metadata()["builder"] = "swap_mbi";
  c.metadata()["copy_qubits"] = n;
  c.metadata()["subsystem"] = QubitList(sub.begin(), sub.end());
  c.metadata()["ancilla"] = 2 * n;
  if (routed) return route_linear(c, sub.size());
  return c;
}

inline Circuit swap_mbi_circuit(const Circuit& base, std::size_t subsystem_size, bool routed = false) {
  require(subsystem_size >= 1 && subsystem_size <= base.n_qubits(),
          "swap test subsystem size " + std::to_string(subsystem_size) + " outside [1, " +
              std::to_string(base.n_qubits()) + "]");
  const QubitList sub = left_block(subsystem_size);
  return swap_mbi_circuit(base, sub, routed);
}

/// Probability that the ancilla of a swap-test circuit reads 0.
inline double swap_mbi_p0(const Circuit& protocol, const SimulateOptions& options = {}) {
  const Qubit anc = protocol.metadata().at("ancilla").get<Qubit>();
  const StateVector s = simulate(protocol, options);
  const QubitList m{anc};
  return marginal_probs(s, m)[0];
}

/// v = 2 P0 - 1 from an exact ancilla probability.
inline PurityEstimate estimate_purity_swap(double p0) {
  require(p0 >= -1e-12 && p0 <= 1.0 + 1e-12, "P0 must be a probability");
  return {2.0 * p0 - 1.0, 0.0, PurityMethod::swap_mbi, {{"shots", "exact"}}};
}

/// v = 2 P0 - 1 from ancilla shots, with binomial standard error.
inline PurityEstimate estimate_purity_swap(const ShotTable& table) {
  table.validate();
  require(table.total > 0, "empty shot table");
  require(table.width() == 1, "swap test shot table must measure only the ancilla");
  const auto it = table.counts.find("0");
  const double shots = static_cast<double>(table.total);
  const double p0 = it == table.counts.end() ? 0.0 : static_cast<double>(it->second) / shots;
  return {2.0 * p0 - 1.0, 2.0 * std::sqrt(p0 * (1.0 - p0) / shots), PurityMethod::swap_mbi,
          {{"shots", table.total}}};
}

/// Prepares the two copies once and evaluates the swap test for many
/// subsystems of the same base circuit.
class SwapTestBench {
 public:
  explicit SwapTestBench(const Circuit& base, const SimLimits& limits = {})
      : n_(base.n_qubits()), prepared_(2 * base.n_qubits() + 1, 0, limits) {
    QubitList second(n_);
    for (Qubit i = 0; i < n_; ++i) second[i] = n_ + i;
    Circuit copies(2 * n_ + 1);
    copies.append(base);
    copies.append(base, second);
    run_circuit(copies, prepared_, /*fuse=*/true);
  }

  /// Copies of a given state; the ancilla starts in |0>.
  explicit SwapTestBench(const StateVector& psi, const SimLimits& limits = {})
      : n_(psi.n_qubits()), prepared_(2 * psi.n_qubits() + 1, 0, limits) {
    const std::size_t d = psi.dim();
    for (std::size_t hi = 0; hi < d; ++hi)
      for (std::size_t lo = 0; lo < d; ++lo) prepared_[lo + d * hi] = psi[lo] * psi[hi];
  }

  std::size_t copy_qubits() const { return n_; }
  const StateVector& prepared() const { return prepared_; }

  /// Final state of the swap test on `sub`.
  StateVector run(std::span<const Qubit> sub) const {
    require(!sub.empty() && sub.size() <= n_, "swap test subsystem size out of range");
    StateVector s = prepared_;
    run_circuit(swap_test_suffix(n_, sub), s);
    return s;
  }

  double p0(std::span<const Qubit> sub) const {
    const QubitList m{2 * n_};
    return marginal_probs(run(sub), m)[0];
  }

  ShotTable shots(std::span<const Qubit> sub, std::uint64_t count, Engine& rng) const {
    const QubitList m{2 * n_};
    return sample_shots(run(sub), m, count, rng);
  }

 private:
  std::size_t n_;
  StateVector prepared_;
};

// ---------------------------------------------------------------------------
// Randomized measurements

inline std::size_t hamming(std::string_view a, std::string_view b) {
  require(a.size() == b.size(), "Hamming distance needs equal-length bitstrings");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

namespace detail {

/// Applies the kernel K = [[1, -1/2], [-1/2, 1]] on every bit. Since
/// (-2)^-D factorizes over bits, sum_j' (-2)^{-D(j,j')} v_j' = (K^{(x)L} v)_j,
/// which takes L 2^L operations instead of 4^L.
inline std::vector<double> hamming_kernel(std::vector<double> v, std::size_t l) {
  for (std::size_t k = 0; k < l; ++k) {
    const std::size_t bit = std::size_t{1} << k;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i & bit) continue;
      const double a = v[i], b = v[i | bit];
      v[i] = a - 0.5 * b;
      v[i | bit] = b - 0.5 * a;
    }
  }
  return v;
}

inline double kernel_form(const std::vector<double>& v, std::size_t l) {
  const auto kv = hamming_kernel(v, l);
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += v[j] * kv[j];
  return s;
}

}  // namespace detail

/// X from exact outcome probabilities over L bits (no shot correction).
inline double x_statistic(std::span<const double> probs, std::size_t l) {
  require(probs.size() == (std::size_t{1} << l), "probability vector must have length 2^L");
  return std::ldexp(detail::kernel_form(std::vector<double>(probs.begin(), probs.end()), l), static_cast<int>(l));
}

/// X from shot counts. The unbiased form replaces P(j)P(j') by
/// n_j n_j' / (M(M-1)) off the diagonal and n_j (n_j - 1) / (M(M-1)) on it.
inline double x_statistic(const ShotTable& table, Estimator estimator = Estimator::unbiased) {
  table.validate();
  const std::size_t l = table.width();
  if (estimator == Estimator::plugin) return x_statistic(table.frequencies(), l);
  require(table.total >= 2, "unbiased estimator needs at least 2 shots");
  const auto counts = table.dense_counts();
  std::vector<double> n(counts.begin(), counts.end());
  const double m = static_cast<double>(table.total);
  const double pairs = detail::kernel_form(n, l) - m;  // diagonal of K is 1
  return std::ldexp(pairs / (m * (m - 1.0)), static_cast<int>(l));
}

struct RmOptions {
  std::size_t n_u = 10;
  std::optional<std::uint64_t> shots;  // empty: exact probabilities
  Estimator estimator = Estimator::unbiased;
};

/// Randomized-measurement purity of `sub`. Unitary a draws from
/// key.child("rm-unitary", a) and its shots from key.child("rm-shots", a).
inline PurityEstimate rm_protocol(const StateVector& state, std::span<const Qubit> sub, const RmOptions& opt,
                                  const StreamKey& key) {
  require(opt.n_u >= 2, "randomized measurements need at least 2 unitaries");
  require(!sub.empty(), "randomized measurements need a nonempty subsystem");
  detail::check_subsystem(sub, state.n_qubits());
  RunningStats xs;
  for (std::size_t a = 0; a < opt.n_u; ++a) {
    Engine rng = key.child("rm-unitary", a).engine();
    StateVector rotated = state;
    for (Qubit q : sub) rotated.apply_1q(q, sample_cue_1q(rng));
    const auto probs = marginal_probs(rotated, sub);
    if (opt.shots) {
      Engine shot_rng = key.child("rm-shots", a).engine();
      const ShotTable t = sample_from_probs(probs, QubitList(sub.begin(), sub.end()), *opt.shots, shot_rng);
      xs.add(x_statistic(t, opt.estimator));
    } else {
      xs.add(x_statistic(probs, sub.size()));
    }
  }
  PurityEstimate out;
  out.value = xs.mean();
  out.std_error = xs.std_error();
  out.method = opt.estimator == Estimator::plugin ? PurityMethod::rm_plugin : PurityMethod::rm_unbiased;
  out.meta = {{"n_u", opt.n_u}, {"estimator", estimator_name(opt.estimator)}};
  if (opt.shots)
    out.meta["shots"] = *opt.shots;
  else
    out.meta["shots"] = "exact";
  return out;
}

inline PurityEstimate rm_protocol(const Circuit& base, std::span<const Qubit> sub, const RmOptions& opt,
                                  const StreamKey& key, const SimulateOptions& sim = {}) {
  return rm_protocol(simulate(base, sim), sub, opt, key);
}

// ---------------------------------------------------------------------------
// Aggregated curves

struct EntropyRow {
  std::size_t n_rad = 0;
  double mean_s2 = 0.0;
  double std_s2 = 0.0;  // across realizations (or propagated, for a single one)
  std::size_t n_realizations = 0;
  double mean_purity = 0.0;
  double std_err_purity = 0.0;
};

class EntropySeries {
 public:
  void add(EntropyRow row) {
    require(row.n_realizations >= 1, "entropy row needs at least one realization");
    require(rows_.empty() || row.n_rad > rows_.back().n_rad, "entropy rows must have increasing subsystem size");
    rows_.push_back(row);
  }
  const std::vector<EntropyRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<EntropyRow> rows_;
};

}  // namespace pagecurve

#endif  // PAGECURVE_PROTOCOLS_HPP
