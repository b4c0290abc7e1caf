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

// Stochastic Pauli noise by trajectories, classical readout flips, and the
// matching mitigations (confusion-matrix inversion, zero-noise
// extrapolation).

#ifndef PAGECURVE_NOISE_HPP
#define PAGECURVE_NOISE_HPP

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/QR>
#include <json.hpp>

#include "pagecurve/circuit.hpp"
#include "pagecurve/rng.hpp"
#include "pagecurve/stats.hpp"

namespace pagecurve {

struct ReadoutError {
  double e0 = 0.0;  // P(read 1 | true 0)
  double e1 = 0.0;  // P(read 0 | true 1)
};

/// Depolarizing-style gate noise plus readout flips. One-qubit gates use
/// p1, gates on two or more qubits use p2; both are multiplied by `scale`.
/// `readout` is indexed by qubit; a single entry applies to every qubit and
/// an empty list means perfect readout.
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  std::vector<ReadoutError> readout;
  double scale = 1.0;

  void validate() const {
    auto prob = [](double p, const char* what) {
      require(p >= 0.0 && p <= 1.0, std::string(what) + " must lie in [0, 1]");
    };
    prob(p1, "p1");
    prob(p2, "p2");
    require(scale >= 0.0 && std::isfinite(scale), "noise scale must be a nonnegative number");
    require(scale * p1 <= 1.0 && scale * p2 <= 1.0, "scaled error probabilities exceed 1");
    for (const auto& r : readout) {
      prob(r.e0, "readout e0");
      prob(r.e1, "readout e1");
    }
  }

  double gate_probability(std::size_t arity) const { return scale * (arity == 1 ? p1 : p2); }

  ReadoutError readout_for(Qubit q) const {
    if (readout.empty()) return {};
    if (readout.size() == 1) return readout[0];
    require(q < readout.size(), "no readout error entry for qubit " + std::to_string(q));
    return readout[q];
  }

  NoiseModel scaled(double lambda) const {
    NoiseModel m = *this;
    m.scale = lambda;
    m.validate();
    return m;
  }
};

inline void to_json(nlohmann::json& j, const ReadoutError& r) { j = {{"e0", r.e0}, {"e1", r.e1}}; }
inline void from_json(const nlohmann::json& j, ReadoutError& r) {
  r.e0 = j.value("e0", 0.0);
  r.e1 = j.value("e1", 0.0);
}

inline void to_json(nlohmann::json& j, const NoiseModel& m) {
  j = {{"p1", m.p1}, {"p2", m.p2}, {"readout", m.readout}, {"scale", m.scale}};
}

inline void from_json(const nlohmann::json& j, NoiseModel& m) {
  require(j.is_object(), "noise model must be a JSON object");
  for (const auto& [key, _] : j.items())
    require(key == "p1" || key == "p2" || key == "readout" || key == "scale", "unknown noise model field '" + key + "'");
  m.p1 = j.value("p1", 0.0);
  m.p2 = j.value("p2", 0.0);
  m.scale = j.value("scale", 1.0);
  m.readout = j.value("readout", std::vector<ReadoutError>{});
  m.validate();
}

/// One noisy run: after each gate, with probability scale * p, a uniformly
/// random non-identity Pauli string hits the gate's qubits. No random
/// numbers are drawn for noiseless gates, so a zero-noise model reproduces
/// simulate() bit for bit. Every noisy gate draws both its coin and its
/// Pauli string, so runs at different scales from the same stream share
/// error sites (common random numbers for extrapolation).
inline StateVector run_trajectory(const Circuit& circuit, const NoiseModel& noise, Engine& rng,
                                  const SimLimits& limits = {}) {
  noise.validate();
  StateVector state(circuit.n_qubits(), 0, limits);
  const std::array<Matrix2, 4> paulis{pauli::I(), pauli::X(), pauli::Y(), pauli::Z()};
  for (const Gate& g : circuit.gates()) {
    state.apply(g);
    const double p = noise.gate_probability(g.qubits.size());
    if (p <= 0.0) continue;
    const double coin = uniform01(rng);
    const std::uint64_t strings = (std::uint64_t{1} << (2 * g.qubits.size())) - 1;
    std::uint64_t code = 1 + uniform_index(rng, strings);
    if (coin >= p) continue;
    for (Qubit q : g.qubits) {
      const auto which = static_cast<std::size_t>(code & 3U);
      code >>= 2;
      if (which != 0) state.apply_1q(q, paulis[which]);
    }
  }
  return state;
}

struct TrajectoryAverage {
  std::vector<double> mean;
  std::vector<double> std_error;
  std::size_t trajectories = 0;
};

/// Averages observable(state) over independent trajectories; trajectory t
/// draws from key.child("trajectory", t).
inline TrajectoryAverage run_noisy(const Circuit& circuit, const NoiseModel& noise, std::size_t trajectories,
                                   const StreamKey& key,
                                   const std::function<std::vector<double>(const StateVector&)>& observable,
                                   const SimLimits& limits = {}) {
  require(trajectories >= 1, "need at least one trajectory");
  noise.validate();
  std::vector<RunningStats> acc;
  for (std::size_t t = 0; t < trajectories; ++t) {
    Engine rng = key.child("trajectory", t).engine();
    const auto values = observable(run_trajectory(circuit, noise, rng, limits));
    if (acc.empty()) acc.resize(values.size());
    require(values.size() == acc.size(), "observable changed length between trajectories");
    for (std::size_t k = 0; k < values.size(); ++k) acc[k].add(values[k]);
  }
  TrajectoryAverage out;
  out.trajectories = trajectories;
  for (const auto& a : acc) {
    out.mean.push_back(a.mean());
    out.std_error.push_back(a.std_error());
  }
  return out;
}

/// Flips each measured bit of every shot independently.
inline ShotTable apply_readout_error(const ShotTable& table, const NoiseModel& noise, Engine& rng) {
  table.validate();
  noise.validate();
  const std::size_t w = table.width();
  std::vector<ReadoutError> err(w);
  bool any = false;
  for (std::size_t k = 0; k < w; ++k) {
    err[k] = noise.readout_for(table.measured_qubits[k]);
    any = any || err[k].e0 > 0.0 || err[k].e1 > 0.0;
  }
  if (!any) return table;
  ShotTable out{table.measured_qubits, {}, table.total};
  std::map<std::uint64_t, std::uint64_t> dense;
  for (const auto& [key, n] : table.counts) {
    const std::uint64_t j = from_bitstring(key);
    for (std::uint64_t s = 0; s < n; ++s) {
      std::uint64_t obs = j;
      for (std::size_t k = 0; k < w; ++k) {
        const bool one = (j >> k) & 1U;
        const double flip = one ? err[k].e1 : err[k].e0;
        if (flip > 0.0 && uniform01(rng) < flip) obs ^= std::uint64_t{1} << k;
      }
      ++dense[obs];
    }
  }
  for (const auto& [j, n] : dense) out.counts[to_bitstring(j, w)] = n;
  return out;
}

namespace detail {

/// Applies a 2x2 matrix along bit k of a vector indexed by outcome.
inline void apply_along_bit(std::vector<double>& v, std::size_t k, const Eigen::Matrix2d& m) {
  const std::size_t bit = std::size_t{1} << k;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i & bit) continue;
    const double a = v[i], b = v[i | bit];
    v[i] = m(0, 0) * a + m(0, 1) * b;
    v[i | bit] = m(1, 0) * a + m(1, 1) * b;
  }
}

/// Column = true bit, row = observed bit.
inline Eigen::Matrix2d confusion(const ReadoutError& e) {
  Eigen::Matrix2d a;
  a << 1.0 - e.e0, e.e1, e.e0, 1.0 - e.e1;
  return a;
}

}  // namespace detail

/// Exact readout channel on an outcome distribution.
inline std::vector<double> apply_readout_channel(std::vector<double> probs, std::span<const Qubit> measured,
                                                 const NoiseModel& noise) {
  require(probs.size() == (std::size_t{1} << measured.size()), "probability vector length mismatch");
  for (std::size_t k = 0; k < measured.size(); ++k) {
    const ReadoutError e = noise.readout_for(measured[k]);
    if (e.e0 > 0.0 || e.e1 > 0.0) detail::apply_along_bit(probs, k, detail::confusion(e));
  }
  return probs;
}

/// Inverts the tensor-product confusion matrix on observed frequencies,
/// then clamps negative entries and renormalizes if any were clamped.
inline std::vector<double> mitigate_readout(std::vector<double> f, std::span<const Qubit> measured,
                                            const NoiseModel& noise) {
  require(measured.size() <= 12, "readout mitigation is limited to 12 measured qubits");
  require(f.size() == (std::size_t{1} << measured.size()), "frequency vector length mismatch");
  noise.validate();
  for (std::size_t k = 0; k < measured.size(); ++k) {
    const ReadoutError e = noise.readout_for(measured[k]);
    if (e.e0 == 0.0 && e.e1 == 0.0) continue;
    const double det = 1.0 - e.e0 - e.e1;
    if (std::abs(det) < 1e-12)
      throw NumericalError("readout confusion matrix of qubit " + std::to_string(measured[k]) +
                           " is singular (e0 + e1 = 1)");
    detail::apply_along_bit(f, k, detail::confusion(e).inverse());
  }
  bool clamped = false;
  for (double& x : f)
    if (x < 0.0) {
      x = 0.0;
      clamped = true;
    }
  if (clamped) {
    double s = 0.0;
    for (double x : f) s += x;
    require(s > 0.0, "mitigated distribution vanished after clamping");
    for (double& x : f) x /= s;
  }
  return f;
}

inline std::vector<double> mitigate_readout(const ShotTable& table, const NoiseModel& noise) {
  require(table.width() <= 12, "readout mitigation is limited to 12 measured qubits");
  return mitigate_readout(table.frequencies(), table.measured_qubits, noise);
}

/// Least-squares polynomial in the noise scale, evaluated at zero.
inline double zne_extrapolate(std::span<const std::pair<double, double>> points, int order = 1) {
  require(order == 1 || order == 2, "extrapolation order must be 1 or 2");
  std::set<double> distinct;
  for (const auto& [lambda, _] : points) distinct.insert(lambda);
  require(distinct.size() >= static_cast<std::size_t>(order) + 1,
          "extrapolation of order " + std::to_string(order) + " needs at least " + std::to_string(order + 1) +
              " distinct noise scales");
  const auto rows = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd v(rows, order + 1);
  Eigen::VectorXd y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& [lambda, value] = points[static_cast<std::size_t>(r)];
    double pow = 1.0;
    for (int c = 0; c <= order; ++c, pow *= lambda) v(r, c) = pow;
    y(r) = value;
  }
  const Eigen::VectorXd coef = v.colPivHouseholderQr().solve(y);
  return coef(0);
}

}  // namespace pagecurve

#endif  // PAGECURVE_NOISE_HPP
