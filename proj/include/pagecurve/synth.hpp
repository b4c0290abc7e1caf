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

// Two-qubit synthesis. Any U in U(4) factors as
//
//   U = e^{i phase} (A1 (x) A0) exp(i(a XX + b YY + c ZZ)) (B1 (x) B0)
//
// with the Weyl point (a, b, c) in the chamber pi/4 >= a >= b >= |c| and
// c >= 0 whenever a = pi/4. The core is realized with three CNOTs at
// depth 7.

#ifndef PAGECURVE_SYNTH_HPP
#define PAGECURVE_SYNTH_HPP

#include <array>
#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>

#include "pagecurve/circuit.hpp"
#include "pagecurve/core.hpp"
#include "pagecurve/gate.hpp"

namespace pagecurve {

struct WeylPoint {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Magic basis: columns (|00>+|11>)/r2, i(|00>-|11>)/r2, i(|01>+|10>)/r2,
/// (|01>-|10>)/r2. XX, YY and ZZ are all diagonal in it, and it maps SO(4)
/// onto SU(2) (x) SU(2).
inline Matrix4 magic_basis() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix4 m = Matrix4::Zero();
  m(0, 0) = s;
  m(3, 0) = s;
  m(0, 1) = kI * s;
  m(3, 1) = -kI * s;
  m(1, 2) = kI * s;
  m(2, 2) = kI * s;
  m(1, 3) = s;
  m(2, 3) = -s;
  return m;
}

/// Eigenphases of a XX + b YY + c ZZ on the magic basis columns.
inline std::array<double, 4> magic_phases(const WeylPoint& w) {
  return {w.a - w.b + w.c, -w.a + w.b + w.c, w.a + w.b - w.c, -w.a - w.b - w.c};
}

/// exp(i(a XX + b YY + c ZZ)).
inline Matrix4 canonical_gate(const WeylPoint& w) {
  const Matrix4 mb = magic_basis();
  const auto ph = magic_phases(w);
  Matrix4 d = Matrix4::Zero();
  for (int k = 0; k < 4; ++k) d(k, k) = std::polar(1.0, ph[static_cast<std::size_t>(k)]);
  return mb * d * mb.adjoint();
}

struct KakDecomposition {
  std::array<Matrix2, 2> before;  // [k] acts on qubit k, applied first
  std::array<Matrix2, 2> after;
  WeylPoint weyl;
  double global_phase = 0.0;

  Matrix4 reconstruct() const {
    const Matrix4 left = kron(after[1], after[0]);
    const Matrix4 right = kron(before[1], before[0]);
    return std::polar(1.0, global_phase) * left * canonical_gate(weyl) * right;
  }
};

namespace detail {

/// Orthonormal real eigenbasis shared by two commuting real symmetric
/// matrices. The first combination fixes clusters; a rotated combination
/// splits each cluster. No random perturbation is involved.
inline Eigen::Matrix4d simultaneous_eigenbasis(const Eigen::Matrix4d& re, const Eigen::Matrix4d& im) {
  constexpr double kAngle = 0.4142135623730951;
  constexpr double kClusterTol = 1e-7;
  const Eigen::Matrix4d c1 = std::cos(kAngle) * re + std::sin(kAngle) * im;
  const Eigen::Matrix4d c2 = -std::sin(kAngle) * re + std::cos(kAngle) * im;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(c1);
  Eigen::Matrix4d basis = es.eigenvectors();
  const Eigen::Vector4d vals = es.eigenvalues();
  int start = 0;
  while (start < 4) {
    int end = start + 1;
    while (end < 4 && vals(end) - vals(end - 1) < kClusterTol) ++end;
    const int size = end - start;
    if (size > 1) {
      const Eigen::MatrixXd v = basis.middleCols(start, size);
      const Eigen::MatrixXd sub = v.transpose() * c2 * v;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> inner(0.5 * (sub + sub.transpose()));
      basis.middleCols(start, size) = v * inner.eigenvectors();
    }
    start = end;
  }
  return basis;
}

/// Splits K = kron(hi, lo) into (lo, hi). K must be a tensor product.
inline std::pair<Matrix2, Matrix2> split_local(const Matrix4& k) {
  int best_r = 0, best_c = 0;
  double best = -1.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      const double n = k.block<2, 2>(2 * r, 2 * c).squaredNorm();
      if (n > best) {
        best = n;
        best_r = r;
        best_c = c;
      }
    }
  const Matrix2 blk = k.block<2, 2>(2 * best_r, 2 * best_c);
  const Matrix2 lo = blk / std::sqrt(blk.determinant());
  Matrix2 hi;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) hi(r, c) = (lo.adjoint() * k.block<2, 2>(2 * r, 2 * c)).trace() / 2.0;
  return {lo, hi};
}

/// Tracks U = e^{i phase} left . A(w) . right while w is moved into the
/// Weyl chamber by local moves.
struct ChamberState {
  std::array<double, 3> w{};
  Matrix4 left = Matrix4::Identity();
  Matrix4 right = Matrix4::Identity();
  double phase = 0.0;

  static Matrix4 axis_operator(int axis) {
    switch (axis) {
      case 0: return kron(pauli::X(), pauli::X());
      case 1: return kron(pauli::Y(), pauli::Y());
      default: return kron(pauli::Z(), pauli::Z());
    }
  }

  // A(w) = A(w + k pi/2 e_axis) (-i P)^k
  void shift(int axis, long k) {
    if (k == 0) return;
    w[static_cast<std::size_t>(axis)] += static_cast<double>(k) * kPi / 2;
    if (k % 2 != 0) right = axis_operator(axis) * right;
    phase -= static_cast<double>(k) * kPi / 2;
  }

  // G A(w) G = A(w with two coordinates negated), G a Pauli on qubit 0.
  void flip(int i, int j) {
    const int other = 3 - i - j;
    const Matrix2 p = other == 0 ? pauli::X() : other == 1 ? pauli::Y() : pauli::Z();
    const Matrix4 g = kron(pauli::I(), p);
    left = left * g;
    right = g * right;
    w[static_cast<std::size_t>(i)] = -w[static_cast<std::size_t>(i)];
    w[static_cast<std::size_t>(j)] = -w[static_cast<std::size_t>(j)];
  }

  // S A(w) S^dagger = A(w with two coordinates exchanged).
  void exchange(int i, int j) {
    Matrix2 s1;
    if (i + j == 1) {  // XX <-> YY
      s1 << 1, 0, 0, kI;
    } else if (i + j == 3) {  // YY <-> ZZ
      s1 = (Matrix2::Identity() - kI * pauli::X()) / std::sqrt(2.0);
    } else {  // XX <-> ZZ
      s1 = hadamard_matrix();
    }
    const Matrix4 s = kron(s1, s1);
    left = left * s.adjoint();
    right = s * right;
    std::swap(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(j)]);
  }

  void canonicalize() {
    constexpr double kTol = 1e-12;
    for (int axis = 0; axis < 3; ++axis) {
      long k = std::lround(w[static_cast<std::size_t>(axis)] / (kPi / 2));
      shift(axis, -k);
      if (w[static_cast<std::size_t>(axis)] < -kPi / 4 + kTol) shift(axis, 1);
    }
    auto mag = [&](int i) { return std::abs(w[static_cast<std::size_t>(i)]); };
    if (mag(0) < mag(1)) exchange(0, 1);
    if (mag(1) < mag(2)) exchange(1, 2);
    if (mag(0) < mag(1)) exchange(0, 1);
    if (w[0] < 0 && w[1] < 0) {
      flip(0, 1);
    } else if (w[0] < 0) {
      flip(0, 2);
    } else if (w[1] < 0) {
      flip(1, 2);
    }
    if (std::abs(w[0] - kPi / 4) < 1e-9 && w[2] < 0) {
      shift(0, -1);
      flip(0, 2);
    }
  }
};

}  // namespace detail

/// Cartan (KAK) decomposition through the magic basis. Throws
/// PreconditionError for non-unitary input and NumericalError if the
/// reconstruction misses by more than 1e-9.
inline KakDecomposition kak_decompose(const Matrix4& u) {
  require(is_unitary(u, 1e-10), "kak_decompose: matrix is not unitary within 1e-10");
  const double phase0 = std::arg(u.determinant()) / 4.0;
  const Matrix4 us = u * std::polar(1.0, -phase0);
  const Matrix4 mb = magic_basis();
  const Matrix4 up = mb.adjoint() * us * mb;
  const Matrix4 m2 = up.transpose() * up;

  Eigen::Matrix4d p = detail::simultaneous_eigenbasis(m2.real(), m2.imag());
  if (p.determinant() < 0) p.col(0) = -p.col(0);
  const Matrix4 pc = p.cast<Complex>();
  const Matrix4 d = pc.transpose() * m2 * pc;

  std::array<double, 4> theta{};
  for (int k = 0; k < 4; ++k) theta[static_cast<std::size_t>(k)] = std::arg(d(k, k)) / 2.0;
  Matrix4 inv_sqrt = Matrix4::Zero();
  for (int k = 0; k < 4; ++k) inv_sqrt(k, k) = std::polar(1.0, -theta[static_cast<std::size_t>(k)]);
  Eigen::Matrix4d k1 = (up * pc * inv_sqrt).real();
  if (k1.determinant() < 0) {
    theta[0] += kPi;
    k1.col(0) = -k1.col(0);
  }

  detail::ChamberState st;
  st.w = {(theta[0] + theta[2]) / 2, (theta[1] + theta[2]) / 2, (theta[0] + theta[1]) / 2};
  st.left = mb * k1.cast<Complex>() * mb.adjoint();
  st.right = mb * pc.transpose() * mb.adjoint();
  st.phase = phase0;
  st.canonicalize();

  KakDecomposition out;
  const auto [a0, a1] = detail::split_local(st.left);
  const auto [b0, b1] = detail::split_local(st.right);
  out.after = {a0, a1};
  out.before = {b0, b1};
  out.weyl = {st.w[0], st.w[1], st.w[2]};
  out.global_phase = st.phase;

  const double err = (out.reconstruct() - u).cwiseAbs().maxCoeff();
  if (!(err <= 1e-9))
    throw NumericalError("kak_decompose: reconstruction error " + std::to_string(err) + " exceeds 1e-9");
  return out;
}

/// Three-CNOT, depth-7 circuit for exp(i(a XX + b YY + c ZZ)) on qubits
/// (0, 1) of a two-qubit register. metadata["global_phase"] = phi with
/// circuit = e^{i phi} exp(i(a XX + b YY + c ZZ)).
inline Circuit entangler_circuit(const WeylPoint& w) {
  Circuit c(2);
  c.add(gates::cnot(1, 0));
  c.add(gates::rz(0, -2.0 * w.c));
  c.add(gates::h(1));
  c.add(gates::rz(1, -2.0 * w.a + kPi / 2));
  c.add(gates::cnot(1, 0));
  c.add(gates::rz(0, 2.0 * w.b));
  c.add(gates::h(1));
  c.add(gates::cnot(1, 0));
  c.add(gates::sx(0));
  c.add(gates::sxdg(1));
  const Matrix m = circuit_unitary(c);
  const Complex tr = (canonical_gate(w).adjoint() * m).trace() / 4.0;
  c.metadata()["builder"] = "entangler";
  c.metadata()["global_phase"] = std::arg(tr);
  c.metadata()["weyl"] = {w.a, w.b, w.c};
  return c;
}

/// KAK + entangler with the local factors as raw single-qubit gates.
/// metadata["global_phase"] = phi with U = e^{i phi} * circuit.
inline Circuit su4_circuit(const Matrix4& u) {
  const KakDecomposition kak = kak_decompose(u);
  const Circuit core = entangler_circuit(kak.weyl);
  Circuit c(2);
  c.add(gates::unitary(kak.before[0], {0}));
  c.add(gates::unitary(kak.before[1], {1}));
  c.append(core);
  c.add(gates::unitary(kak.after[0], {0}));
  c.add(gates::unitary(kak.after[1], {1}));
  c.metadata()["builder"] = "su4";
  c.metadata()["weyl"] = {kak.weyl.a, kak.weyl.b, kak.weyl.c};
  c.metadata()["global_phase"] = kak.global_phase - core.metadata()["global_phase"].get<double>();
  return c;
}

struct GateCounts {
  std::size_t cnot_count = 0;  // CNOT and CZ
  std::size_t depth = 0;
  std::size_t gate_total = 0;
  std::size_t swap_count = 0;
  std::size_t cswap_count = 0;
};

/// Depth is the ASAP layering: each gate sits one level above the deepest
/// gate already touching one of its qubits.
inline GateCounts count_gates(const Circuit& circuit) {
  GateCounts gc;
  std::vector<std::size_t> level(circuit.n_qubits(), 0);
  for (const auto& g : circuit.gates()) {
    ++gc.gate_total;
    if (g.kind == GateKind::CNOT || g.kind == GateKind::CZ) ++gc.cnot_count;
    if (g.kind == GateKind::SWAP) ++gc.swap_count;
    if (g.kind == GateKind::CSWAP) ++gc.cswap_count;
    std::size_t top = 0;
    for (Qubit q : g.qubits) top = std::max(top, level[q]);
    for (Qubit q : g.qubits) level[q] = top + 1;
    gc.depth = std::max(gc.depth, top + 1);
  }
  return gc;
}

}  // namespace pagecurve

#endif  // PAGECURVE_SYNTH_HPP
