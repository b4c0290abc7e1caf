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

#ifndef PAGECURVE_GATE_HPP
#define PAGECURVE_GATE_HPP

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "pagecurve/core.hpp"

namespace pagecurve {

enum class GateKind {
  H,
  X,
  SX,
  SXdg,
  RZ,
  CNOT,
  CZ,
  SWAP,
  CSWAP,
  Unitary1,
  Unitary2,
  Unitary3,
};

inline constexpr std::array<std::pair<GateKind, std::string_view>, 12> kGateNames{{
    {GateKind::H, "h"},
    {GateKind::X, "x"},
    {GateKind::SX, "sx"},
    {GateKind::SXdg, "sxdg"},
    {GateKind::RZ, "rz"},
    {GateKind::CNOT, "cx"},
    {GateKind::CZ, "cz"},
    {GateKind::SWAP, "swap"},
    {GateKind::CSWAP, "cswap"},
    {GateKind::Unitary1, "unitary1"},
    {GateKind::Unitary2, "unitary2"},
    {GateKind::Unitary3, "unitary3"},
}};

inline std::string_view gate_name(GateKind kind) {
  for (const auto& [k, name] : kGateNames)
    if (k == kind) return name;
  return "?";
}

inline GateKind gate_kind_from_name(std::string_view name) {
  for (const auto& [k, n] : kGateNames)
    if (n == name) return k;
  throw PreconditionError("unknown gate kind '" + std::string(name) + "'");
}

constexpr std::size_t arity(GateKind kind) {
  switch (kind) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::SX:
    case GateKind::SXdg:
    case GateKind::RZ:
    case GateKind::Unitary1:
      return 1;
    case GateKind::CNOT:
    case GateKind::CZ:
    case GateKind::SWAP:
    case GateKind::Unitary2:
      return 2;
    case GateKind::CSWAP:
    case GateKind::Unitary3:
      return 3;
  }
  return 0;
}

constexpr bool is_raw(GateKind kind) {
  return kind == GateKind::Unitary1 || kind == GateKind::Unitary2 || kind == GateKind::Unitary3;
}

/// One circuit instruction. `qubits` is ordered: for controlled gates the
/// controls come first (CNOT: control, target; CSWAP: control, a, b). Raw
/// matrices use the little-endian convention over `qubits`, i.e. qubits[0]
/// is the least significant bit of the matrix row/column index.
struct Gate {
  GateKind kind = GateKind::H;
  QubitList qubits;
  double angle = 0.0;  // RZ only
  Matrix matrix;       // raw kinds only
  std::optional<int> layer;
};

namespace gates {

inline Gate named(GateKind kind, QubitList qubits, double angle = 0.0) {
  Gate g;
  g.kind = kind;
  g.qubits = std::move(qubits);
  g.angle = angle;
  return g;
}

inline Gate h(Qubit q) { return named(GateKind::H, {q}); }
inline Gate x(Qubit q) { return named(GateKind::X, {q}); }
inline Gate sx(Qubit q) { return named(GateKind::SX, {q}); }
inline Gate sxdg(Qubit q) { return named(GateKind::SXdg, {q}); }
inline Gate rz(Qubit q, double theta) { return named(GateKind::RZ, {q}, theta); }
inline Gate cnot(Qubit control, Qubit target) { return named(GateKind::CNOT, {control, target}); }
inline Gate cz(Qubit a, Qubit b) { return named(GateKind::CZ, {a, b}); }
inline Gate swap(Qubit a, Qubit b) { return named(GateKind::SWAP, {a, b}); }
inline Gate cswap(Qubit control, Qubit a, Qubit b) { return named(GateKind::CSWAP, {control, a, b}); }

inline Gate unitary(Matrix m, QubitList qubits) {
  GateKind kind;
  switch (qubits.size()) {
    case 1: kind = GateKind::Unitary1; break;
    case 2: kind = GateKind::Unitary2; break;
    case 3: kind = GateKind::Unitary3; break;
    default: throw PreconditionError("raw unitaries act on 1 to 3 qubits");
  }
  Gate g = named(kind, std::move(qubits));
  g.matrix = std::move(m);
  return g;
}

}  // namespace gates

inline Matrix2 hadamard_matrix() {
  Matrix2 m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

inline Matrix2 sx_matrix() {
  Matrix2 m;
  m << Complex(0.5, 0.5), Complex(0.5, -0.5), Complex(0.5, -0.5), Complex(0.5, 0.5);
  return m;
}

inline Matrix2 rz_matrix(double theta) {
  Matrix2 m = Matrix2::Zero();
  m(0, 0) = std::polar(1.0, -theta / 2);
  m(1, 1) = std::polar(1.0, theta / 2);
  return m;
}

/// Matrix of a permutation gate, little-endian over the gate's qubits.
inline Matrix permutation_matrix(std::size_t n, auto&& map_index) {
  const std::size_t dim = std::size_t{1} << n;
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) m(map_index(s), s) = 1.0;
  return m;
}

inline Matrix gate_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::H: return hadamard_matrix();
    case GateKind::X: return pauli::X();
    case GateKind::SX: return sx_matrix();
    case GateKind::SXdg: return sx_matrix().adjoint();
    case GateKind::RZ: return rz_matrix(g.angle);
    case GateKind::CNOT:
      return permutation_matrix(2, [](std::size_t s) { return (s & 1) ? s ^ 2 : s; });
    case GateKind::CZ: {
      Matrix m = Matrix::Identity(4, 4);
      m(3, 3) = -1.0;
      return m;
    }
    case GateKind::SWAP:
      return permutation_matrix(2, [](std::size_t s) { return ((s & 1) << 1) | ((s >> 1) & 1); });
    case GateKind::CSWAP:
      return permutation_matrix(3, [](std::size_t s) {
        if (!(s & 1)) return s;
        const std::size_t a = (s >> 1) & 1, b = (s >> 2) & 1;
        return std::size_t{1} | (b << 1) | (a << 2);
      });
    case GateKind::Unitary1:
    case GateKind::Unitary2:
    case GateKind::Unitary3:
      return g.matrix;
  }
  return {};
}

/// Checks arity, index range, distinctness and (for raw kinds) unitarity.
inline void validate_gate(const Gate& g, std::size_t n_qubits) {
  require(g.qubits.size() == arity(g.kind),
          "gate '" + std::string(gate_name(g.kind)) + "' expects " + std::to_string(arity(g.kind)) +
              " qubits, got " + std::to_string(g.qubits.size()));
  for (std::size_t i = 0; i < g.qubits.size(); ++i) {
    require(g.qubits[i] < n_qubits, "gate target " + std::to_string(g.qubits[i]) +
                                        " out of range for " + std::to_string(n_qubits) + " qubits");
    for (std::size_t j = 0; j < i; ++j)
      require(g.qubits[i] != g.qubits[j], "duplicate gate target " + std::to_string(g.qubits[i]));
  }
  if (is_raw(g.kind)) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << g.qubits.size());
    require(g.matrix.rows() == dim && g.matrix.cols() == dim, "raw gate matrix has wrong shape");
    require(is_unitary(g.matrix, 1e-10), "raw gate matrix is not unitary within 1e-10");
  }
}

inline Gate inverse(const Gate& g) {
  Gate out = g;
  switch (g.kind) {
    case GateKind::SX: out.kind = GateKind::SXdg; break;
    case GateKind::SXdg: out.kind = GateKind::SX; break;
    case GateKind::RZ: out.angle = -g.angle; break;
    case GateKind::Unitary1:
    case GateKind::Unitary2:
    case GateKind::Unitary3: out.matrix = g.matrix.adjoint(); break;
    default: break;  // self-inverse
  }
  return out;
}

}  // namespace pagecurve

#endif  // PAGECURVE_GATE_HPP
