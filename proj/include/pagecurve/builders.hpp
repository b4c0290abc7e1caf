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

#ifndef PAGECURVE_BUILDERS_HPP
#define PAGECURVE_BUILDERS_HPP

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pagecurve/circuit.hpp"
#include "pagecurve/rng.hpp"
#include "pagecurve/sampling.hpp"
#include "pagecurve/synth.hpp"

namespace pagecurve {

/// Number of two-qubit blocks in one brickwall layer with open boundaries.
constexpr std::size_t brickwall_blocks_per_layer(std::size_t n) { return n / 2 + (n - 1) / 2; }

/// Random brickwall circuit: every layer puts an independent Haar SU(4) on
/// each even bond (0,1),(2,3),... and then on each odd bond (1,2),(3,4),...
/// Each block draws from its own substream keyed by (layer, first qubit).
inline Circuit build_brickwall(std::size_t n, std::size_t layers, const StreamKey& key) {
  require(n >= 2, "brickwall needs at least 2 qubits");
  require(layers >= 1, "brickwall needs at least 1 layer");
  Circuit c(n);
  for (std::size_t layer = 0; layer < layers; ++layer) {
    for (std::size_t parity = 0; parity < 2; ++parity) {
      for (std::size_t q = parity; q + 1 < n; q += 2) {
        Engine rng = key.child("su4", layer, q).engine();
        const Circuit block = su4_circuit(sample_haar_su4(rng));
        const QubitList map{q, q + 1};
        c.append(block, map, static_cast<int>(layer));
      }
    }
  }
  c.metadata()["builder"] = "brickwall";
  c.metadata()["n_qubits"] = n;
  c.metadata()["layers"] = layers;
  c.metadata()["blocks"] = layers * brickwall_blocks_per_layer(n);
  c.metadata()["stream"] = key.value();
  return c;
}

/// X, X, H, CNOT: takes |00> on (a, b) to the singlet (|01> - |10>)/sqrt2.
inline Circuit bell_pair_circuit(Qubit a, Qubit b, std::size_t n_qubits = 0) {
  require(a != b, "Bell pair needs two distinct qubits");
  Circuit c(std::max<std::size_t>(n_qubits, std::max(a, b) + 1));
  c.add(gates::x(a));
  c.add(gates::x(b));
  c.add(gates::h(a));
  c.add(gates::cnot(a, b));
  c.metadata()["builder"] = "bell_pair";
  return c;
}

/// Projector onto the singlet of (q, b), identity on a. Index = q + 2a + 4b.
inline Matrix transport_projector() {
  Matrix p = Matrix::Zero(8, 8);
  auto idx = [](int q, int a, int b) { return q + 2 * a + 4 * b; };
  for (int a = 0; a < 2; ++a) {
    p(idx(0, a, 1), idx(0, a, 1)) += 0.5;
    p(idx(1, a, 0), idx(1, a, 0)) += 0.5;
    p(idx(1, a, 0), idx(0, a, 1)) -= 0.5;
    p(idx(0, a, 1), idx(1, a, 0)) -= 0.5;
  }
  return p;
}

/// exp(-i theta P) = I + (e^{-i theta} - 1) P on (q, a, b). At theta = pi
/// this is the swap of q and b.
inline Matrix transport_u_theta(double theta) {
  require(std::isfinite(theta), "transport angle must be finite");
  return Matrix::Identity(8, 8) + (std::polar(1.0, -theta) - 1.0) * transport_projector();
}

/// Maps the curvature ratio to a transport angle: pi at K = 0, 0 at the horizon.
inline double theta_of_curvature(double k, double k_horizon) {
  require(k_horizon > 0.0, "horizon curvature must be positive");
  return kPi * (1.0 - k / k_horizon);
}

enum class TransportVariant { full, compact };

/// Register layout of the full transport model: q_i = i, a_i = n + i,
/// b_i = 2n + i.
struct TransportLayout {
  std::size_t n;
  Qubit q(std::size_t i) const { return i; }
  Qubit a(std::size_t i) const { return n + i; }
  Qubit b(std::size_t i) const { return 2 * n + i; }
};

/// Compact: scrambling on n qubits only. Full: scrambling on q, singlets on
/// each (a_i, b_i), then SWAP(q_i, b_i) moves the black-hole state onto b.
inline Circuit build_transport_model(std::size_t n, std::size_t layers, const StreamKey& key,
                                     TransportVariant variant = TransportVariant::compact) {
  Circuit scramble = build_brickwall(n, layers, key);
  if (variant == TransportVariant::compact) {
    scramble.metadata()["builder"] = "transport_compact";
    return scramble;
  }
  const TransportLayout lay{n};
  Circuit c(3 * n);
  c.append(scramble);
  for (std::size_t i = 0; i < n; ++i) c.append(bell_pair_circuit(lay.a(i), lay.b(i), 3 * n));
  for (std::size_t i = 0; i < n; ++i) c.add(gates::swap(lay.q(i), lay.b(i)));
  c.metadata() = scramble.metadata();
  c.metadata()["builder"] = "transport_full";
  c.metadata()["n_black_hole"] = n;
  return c;
}

/// Undirected coupling graph. Defaults to the chain 0-1-...-(n-1).
class CouplingMap {
 public:
  CouplingMap() = default;
  explicit CouplingMap(std::set<std::pair<Qubit, Qubit>> edges) {
    for (auto [u, v] : edges) add(u, v);
  }

  static CouplingMap linear(std::size_t n) {
    CouplingMap m;
    for (Qubit i = 0; i + 1 < n; ++i) m.add(i, i + 1);
    return m;
  }

  void add(Qubit u, Qubit v) {
    require(u != v, "coupling edge must join distinct qubits");
    edges_.insert(std::minmax(u, v));
  }
  bool connected(Qubit u, Qubit v) const { return edges_.count(std::minmax(u, v)) > 0; }
  const std::set<std::pair<Qubit, Qubit>>& edges() const { return edges_; }

 private:
  std::set<std::pair<Qubit, Qubit>> edges_;
};

/// Rewrites a swap-test circuit on 2N+1 qubits (copies on 0..N-1 and
/// N..2N-1, ancilla 2N) onto a chain laid out as
///   q_{N-1} ... q_0, ancilla, q_N ... q_{2N-1}.
/// Before each controlled swap, SWAPs walk both targets next to the ancilla.
/// Left-block subsystems cost exactly L(L-1) routing swaps. Other gates
/// are relabelled and must already act on coupled qubits.
inline Circuit route_linear(const Circuit& protocol, std::size_t subsystem_size,
                            const CouplingMap& coupling = {}) {
  const std::size_t n = protocol.n_qubits();
  if (n < 3 || n % 2 == 0) throw PreconditionError("layout mismatch: expected 2N+1 qubits, got " + std::to_string(n));
  const std::size_t half = (n - 1) / 2;
  const Qubit ancilla = 2 * half;
  const CouplingMap chain = coupling.edges().empty() ? CouplingMap::linear(n) : coupling;
  for (Qubit i = 0; i + 1 < n; ++i)
    if (!chain.connected(i, i + 1))
      throw PreconditionError("layout mismatch: coupling map lacks chain edge " + std::to_string(i) + "-" +
                              std::to_string(i + 1));

  std::vector<Qubit> pos(n), occupant(n);
  for (Qubit j = 0; j < n; ++j) {
    if (j < half)
      pos[j] = half - 1 - j;
    else if (j == ancilla)
      pos[j] = half;
    else
      pos[j] = j + 1;
    occupant[pos[j]] = j;
  }
  const std::vector<Qubit> initial = pos;

  Circuit out(n);
  std::size_t routing_swaps = 0, cswaps = 0;
  auto move_next_to_ancilla = [&](Qubit logical) {
    while (true) {
      const Qubit p = pos[logical], pa = pos[ancilla];
      const Qubit dist = p > pa ? p - pa : pa - p;
      if (dist <= 1) return;
      const Qubit step = p > pa ? p - 1 : p + 1;
      out.add(gates::swap(p, step));
      const Qubit other = occupant[step];
      std::swap(occupant[p], occupant[step]);
      pos[logical] = step;
      pos[other] = p;
      ++routing_swaps;
    }
  };

  for (const Gate& g : protocol.gates()) {
    if (g.kind == GateKind::CSWAP) {
      const Qubit ctrl = g.qubits[0], x = g.qubits[1], y = g.qubits[2];
      if (ctrl != ancilla) throw PreconditionError("layout mismatch: controlled swap not controlled by the ancilla");
      if ((x < half) == (y < half))
        throw PreconditionError("layout mismatch: controlled swap targets lie in the same copy");
      move_next_to_ancilla(x);
      move_next_to_ancilla(y);
      out.add(gates::cswap(pos[ancilla], pos[x], pos[y]));
      ++cswaps;
      continue;
    }
    Gate mapped = g;
    for (auto& q : mapped.qubits) q = pos[q];
    if (mapped.qubits.size() == 2 && !chain.connected(mapped.qubits[0], mapped.qubits[1])) {
      // Copy-internal gates stay adjacent because each copy is mirrored
      // or shifted as a block; anything else is outside this layout.
      throw PreconditionError("layout mismatch: two-qubit gate on uncoupled qubits after relabelling");
    }
    if (mapped.qubits.size() > 2) throw PreconditionError("layout mismatch: unexpected three-qubit gate");
    out.add(std::move(mapped));
  }
  if (cswaps != subsystem_size)
    throw PreconditionError("layout mismatch: expected " + std::to_string(subsystem_size) +
                            " controlled swaps, found " + std::to_string(cswaps));

  out.metadata() = protocol.metadata();
  out.metadata()["routed"] = true;
  out.metadata()["initial_layout"] = initial;
  out.metadata()["final_layout"] = pos;
  out.metadata()["routing_swaps"] = routing_swaps;
  out.metadata()["ancilla"] = pos[ancilla];
  return out;
}

}  // namespace pagecurve

#endif  // PAGECURVE_BUILDERS_HPP
