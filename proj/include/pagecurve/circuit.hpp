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

#ifndef PAGECURVE_CIRCUIT_HPP
#define PAGECURVE_CIRCUIT_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pagecurve/core.hpp"
#include "pagecurve/gate.hpp"
#include "pagecurve/statevec.hpp"

namespace pagecurve {

/// Ordered gate list over a fixed register. Metadata is free-form JSON
/// (builder name, seed, layer count, routing layouts, ...).
class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits) : n_(n_qubits), metadata_(nlohmann::json::object()) {}

  std::size_t n_qubits() const { return n_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  nlohmann::json& metadata() { return metadata_; }
  const nlohmann::json& metadata() const { return metadata_; }

  Circuit& add(Gate g) {
    validate_gate(g, n_);
    gates_.push_back(std::move(g));
    return *this;
  }

  /// Appends `other`, sending its qubit k to mapping[k] (identity if empty).
  Circuit& append(const Circuit& other, std::span<const Qubit> mapping = {},
                  std::optional<int> layer = std::nullopt) {
    require(mapping.empty() || mapping.size() == other.n_qubits(), "qubit mapping size mismatch");
    for (Gate g : other.gates()) {
      if (!mapping.empty())
        for (auto& q : g.qubits) q = mapping[q];
      if (layer) g.layer = layer;
      add(std::move(g));
    }
    return *this;
  }

  Circuit inverse() const {
    Circuit out(n_);
    out.metadata_ = metadata_;
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(pagecurve::inverse(*it));
    return out;
  }

 private:
  std::size_t n_;
  std::vector<Gate> gates_;
  nlohmann::json metadata_;
};

/// Merges maximal runs of consecutive gates whose combined support is at
/// most two qubits into single raw gates. The result has the same unitary
/// up to floating-point reassociation and far fewer passes over the state.
inline Circuit fuse_gates(const Circuit& circuit) {
  Circuit out(circuit.n_qubits());
  out.metadata() = circuit.metadata();
  QubitList support;
  Matrix block;
  std::size_t run = 0;
  Gate pending;

  auto embed = [](const Gate& g, const QubitList& sup) {
    // Lift the gate matrix onto the 2^|sup| space, little-endian over sup.
    const Matrix m = gate_matrix(g);
    const std::size_t k = sup.size(), local = std::size_t{1} << k;
    std::vector<std::size_t> pos;
    for (Qubit q : g.qubits) pos.push_back(static_cast<std::size_t>(std::find(sup.begin(), sup.end(), q) - sup.begin()));
    std::size_t gmask = 0;
    for (auto p : pos) gmask |= std::size_t{1} << p;
    Matrix full = Matrix::Zero(static_cast<Eigen::Index>(local), static_cast<Eigen::Index>(local));
    for (std::size_t col = 0; col < local; ++col) {
      std::size_t gc = 0;
      for (std::size_t t = 0; t < pos.size(); ++t) gc |= ((col >> pos[t]) & 1U) << t;
      for (std::size_t gr = 0; gr < (std::size_t{1} << pos.size()); ++gr) {
        std::size_t row = col & ~gmask;
        for (std::size_t t = 0; t < pos.size(); ++t) row |= ((gr >> t) & 1U) << pos[t];
        full(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
            m(static_cast<Eigen::Index>(gr), static_cast<Eigen::Index>(gc));
      }
    }
    return full;
  };

  auto flush = [&] {
    if (run == 0) return;
    if (run == 1) {
      out.add(pending);
    } else {
      Gate g = gates::unitary(block, support);
      g.layer = pending.layer;
      out.add(std::move(g));
    }
    run = 0;
    support.clear();
  };

  for (const Gate& g : circuit.gates()) {
    QubitList merged = support;
    for (Qubit q : g.qubits)
      if (std::find(merged.begin(), merged.end(), q) == merged.end()) merged.push_back(q);
    if (run > 0 && merged.size() <= 2) {
      if (merged.size() > support.size()) {
        // Widen the accumulated block by tensoring identity on the new high qubit.
        block = kron(Matrix::Identity(2, 2), block);
        support = merged;
      }
      block = embed(g, support) * block;
      ++run;
      continue;
    }
    flush();
    if (g.qubits.size() <= 2) {
      support = g.qubits;
      block = gate_matrix(g);
      pending = g;
      run = 1;
    } else {
      out.add(g);
    }
  }
  flush();
  return out;
}

struct SimulateOptions {
  bool fuse = false;
  SimLimits limits{};
};

inline void run_circuit(const Circuit& circuit, StateVector& state, bool fuse = false) {
  require(state.n_qubits() == circuit.n_qubits(), "circuit and state sizes differ");
  if (fuse) {
    const Circuit fused = fuse_gates(circuit);
    for (const auto& g : fused.gates()) state.apply(g);
  } else {
    for (const auto& g : circuit.gates()) state.apply(g);
  }
}

/// Runs the circuit on |0...0>.
inline StateVector simulate(const Circuit& circuit, const SimulateOptions& options = {}) {
  StateVector state(circuit.n_qubits(), 0, options.limits);
  run_circuit(circuit, state, options.fuse);
  return state;
}

/// Full unitary by simulating each basis column; small registers only.
inline Matrix circuit_unitary(const Circuit& circuit) {
  require(circuit.n_qubits() <= 10, "circuit_unitary limited to 10 qubits");
  const std::size_t dim = std::size_t{1} << circuit.n_qubits();
  Matrix u(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c) {
    StateVector s(circuit.n_qubits(), c);
    run_circuit(circuit, s);
    for (std::size_t r = 0; r < dim; ++r) u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s[r];
  }
  return u;
}

}  // namespace pagecurve

#endif  // PAGECURVE_CIRCUIT_HPP
