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

// End-to-end acceptance checks. Prints one PASS/FAIL line per check and
// exits nonzero if any fails. Pass check numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "pagecurve/experiment.hpp"

using namespace pagecurve;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed condition; the first few make it into the summary line.
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail << "failed: ";
    else detail << "; ";
    detail << what;
    pass = false;
  }
};

double std_error(const EntropyRow& row) {
  return row.n_realizations > 1 ? row.std_s2 / std::sqrt(static_cast<double>(row.n_realizations)) : row.std_s2;
}

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

// Haar sweeps are shared between the baseline, shape and build-up checks.
const SweepResult& haar_sweep(std::size_t n) {
  static std::map<std::size_t, SweepResult> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    ExperimentConfig cfg;
    cfg.circuit = BaseCircuit::haar;
    cfg.n = n;
    cfg.realizations = 100;
    cfg.seed = 1000 + n;
    cfg.validate();
    it = cache.emplace(n, run_sweep(cfg)).first;
  }
  return it->second;
}

// Global Haar states, exact purities, against the closed-form average.
Outcome haar_baseline() {
  Outcome out;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::size_t n : {8, 10, 12})
    for (const auto& row : haar_sweep(n).series.rows()) {
      const double expect = haar_avg_renyi2(row.n_rad, n);
      const double z = std::abs(row.mean_s2 - expect) / std_error(row);
      worst = std::max(worst, z);
      out.expect(z <= 3.0, "N=" + std::to_string(n) + " N_rad=" + std::to_string(row.n_rad) + " off by " +
                               fmt(z, 3) + " SE");
    }
  const double mid = haar_sweep(8).series.rows()[3].mean_s2;
  const double secs = seconds_since(t0);
  out.expect(secs < 60.0, "took " + fmt(secs, 3) + " s");
  if (out.pass)
    out.detail << "worst deviation " << fmt(worst, 3) << " SE; N=8 N_rad=4 mean " << fmt(mid) << " vs "
               << fmt(haar_avg_renyi2(4, 8)) << "; " << fmt(secs, 3) << " s";
  return out;
}

// Brickwall circuits approach the Haar level from below as layers grow.
Outcome brickwall_buildup() {
  Outcome out;
  const auto t0 = Clock::now();
  const std::size_t n = 8;
  auto sweep = [&](std::size_t layers) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.layers = layers;
    cfg.realizations = 100;
    cfg.seed = 2000 + layers;
    cfg.validate();
    return run_sweep(cfg);
  };
  std::vector<SweepResult> ladder;
  for (std::size_t layers : {2, 4, 6, 8}) ladder.push_back(sweep(layers));
  const SweepResult deep = sweep(40);
  const auto& haar = haar_sweep(n);

  double worst_gap = 0.0;
  for (std::size_t s = 0; s + 1 < n; ++s) {
    for (std::size_t k = 0; k + 1 < ladder.size(); ++k) {
      const auto& a = ladder[k].series.rows()[s];
      const auto& b = ladder[k + 1].series.rows()[s];
      out.expect(b.mean_s2 >= a.mean_s2 - 3.0 * std::hypot(std_error(a), std_error(b)),
                 "N_rad=" + std::to_string(s + 1) + " drops between layer counts " + std::to_string(2 * k + 2) +
                     " and " + std::to_string(2 * k + 4));
    }
    const double gap = std::abs(deep.series.rows()[s].mean_s2 - haar.series.rows()[s].mean_s2);
    worst_gap = std::max(worst_gap, gap);
    out.expect(gap <= 0.05, "40 layers N_rad=" + std::to_string(s + 1) + " is " + fmt(gap, 3) + " nats from Haar");
  }
  const double secs = seconds_since(t0);
  out.expect(secs < 300.0, "took " + fmt(secs, 3) + " s");
  if (out.pass)
    out.detail << "monotone over layers 2..8; 40-layer gap to Haar at most " << fmt(worst_gap, 3) << " nats; "
               << fmt(secs, 3) << " s";
  return out;
}

// The simulated Haar curves peak at half the system.
Outcome page_shape() {
  Outcome out;
  for (std::size_t n : {8, 10, 12}) {
    const auto& rows = haar_sweep(n).series.rows();
    std::size_t best = 0;
    for (std::size_t s = 1; s < rows.size(); ++s)
      if (rows[s].mean_s2 > rows[best].mean_s2) best = s;
    out.expect(rows[best].n_rad == n / 2, "N=" + std::to_string(n) + " peaks at " + std::to_string(rows[best].n_rad));
  }
  if (out.pass) out.detail << "argmax is N/2 for N = 8, 10, 12";
  return out;
}

// Mean entanglement entropy of random states against the exact sum.
Outcome page_formula() {
  Outcome out;
  Engine rng = StreamKey(4000).engine();
  RunningStats vn;
  for (int k = 0; k < 2000; ++k) vn.add(von_neumann_entropy(sample_haar_state(6, rng), left_block(3)));
  const double expect = page_entropy(3, 3);
  const double z = std::abs(vn.mean() - expect) / vn.std_error();
  out.expect(z <= 3.0, "mean " + fmt(vn.mean()) + " is " + fmt(z, 3) + " SE from " + fmt(expect));
  if (out.pass) out.detail << "mean " << fmt(vn.mean()) << " vs " << fmt(expect) << " (" << fmt(z, 3) << " SE)";
  return out;
}

// Exact CNOT counts and block structure after synthesis.
Outcome gate_accounting() {
  Outcome out;
  const std::map<std::pair<std::size_t, std::size_t>, std::size_t> expected{
      {{8, 4}, 84}, {{8, 6}, 126}, {{8, 8}, 168}, {{12, 4}, 132}, {{12, 6}, 198}, {{12, 8}, 264}};
  std::ostringstream seen;
  for (const auto& [shape, cnots] : expected) {
    const auto got = count_gates(build_brickwall(shape.first, shape.second, StreamKey(5000))).cnot_count;
    seen << got << ' ';
    out.expect(got == cnots, "N=" + std::to_string(shape.first) + " layers=" + std::to_string(shape.second) +
                                 " has " + std::to_string(got) + " CNOTs");
  }
  std::set<std::size_t> depths, cnots;
  const StreamKey key(5001);
  for (std::size_t i = 0; i < 1000; ++i) {
    Engine rng = key.child(i).engine();
    const Circuit block = su4_circuit(sample_haar_su4(rng));
    cnots.insert(count_gates(block).cnot_count);
    const auto w = block.metadata()["weyl"];
    depths.insert(count_gates(entangler_circuit({w[0].get<double>(), w[1].get<double>(), w[2].get<double>()})).depth);
  }
  out.expect(cnots == std::set<std::size_t>{3}, "blocks are not all 3-CNOT");
  out.expect(depths == std::set<std::size_t>{7}, "entangler depth is not always 7");
  if (out.pass) out.detail << "CNOT counts " << seen.str() << "; 1000 blocks at 3 CNOTs, entangler depth 7";
  return out;
}

// Swap test on two copies: exact agreement, shot statistics, routing cost
// and the largest register.
Outcome swap_exactness() {
  Outcome out;
  const std::size_t n = 8;
  double worst_exact = 0.0;
  std::size_t trials = 0, inside = 0;
  const StreamKey key(6000);
  for (std::size_t r = 0; r < 20; ++r) {
    const Circuit base = build_brickwall(n, 4, key.child("circuit", r));
    const StateVector psi = simulate(base);
    const SwapTestBench bench(base);
    for (std::size_t l = 1; l <= n; ++l) {
      const QubitList sub = left_block(l);
      const double exact = reduced_purity(psi, sub);
      const double v = estimate_purity_swap(bench.p0(sub)).value;
      worst_exact = std::max(worst_exact, std::abs(v - exact));
      Engine rng = key.child("shots", r * 100 + l).engine();
      const auto est = estimate_purity_swap(bench.shots(sub, 100000, rng));
      ++trials;
      inside += std::abs(est.value - exact) <= 4.0 * est.std_error;
    }
  }
  out.expect(worst_exact <= 1e-10, "exact swap deviates by " + fmt(worst_exact, 3));
  out.expect(100 * inside >= 99 * trials,
             "only " + std::to_string(inside) + "/" + std::to_string(trials) + " shot trials inside 4 SE");

  const Circuit base = build_brickwall(n, 4, key.child("routing"));
  for (std::size_t l = 1; l <= n; ++l) {
    const GateCounts gc = count_gates(swap_mbi_circuit(base, l, true));
    out.expect(gc.swap_count == l * (l - 1) && gc.cswap_count == l,
               "routing at L=" + std::to_string(l) + " used " + std::to_string(gc.swap_count) + " swaps and " +
                   std::to_string(gc.cswap_count) + " cswaps");
  }

  // Twelve system qubits make 25 with the ancilla.
  const auto t0 = Clock::now();
  const Circuit big = build_brickwall(12, 8, key.child("worst-case"));
  const SwapTestBench wide(big);
  const StateVector psi12 = simulate(big);
  double worst_big = 0.0;
  for (std::size_t l = 1; l < 12; ++l) {
    const QubitList sub = left_block(l);
    worst_big = std::max(worst_big, std::abs(estimate_purity_swap(wide.p0(sub)).value - reduced_purity(psi12, sub)));
  }
  const double secs = seconds_since(t0);
  out.expect(worst_big <= 1e-10, "25-qubit run deviates by " + fmt(worst_big, 3));
  out.expect(secs < 600.0, "25-qubit realization took " + fmt(secs, 3) + " s");

  if (out.pass)
    out.detail << "exact max deviation " << fmt(worst_exact, 3) << "; " << inside << "/" << trials
               << " shot trials inside 4 SE; routing L(L-1) swaps and L cswaps; 25 qubits over all L in "
               << fmt(secs, 3) << " s";
  return out;
}

// Randomized measurements against the statevector on the same circuits.
Outcome randomized_measurements() {
  Outcome out;
  std::ostringstream summary;
  for (auto [n, n_u] : {std::pair<std::size_t, std::size_t>{8, 10}, {12, 20}}) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.layers = 4;
    cfg.realizations = 100;
    cfg.seed = 7000 + n;
    cfg.validate();
    const auto truth = run_sweep(cfg);
    cfg.mode = Mode::rm;
    cfg.n_u = n_u;
    cfg.validate();
    const auto exact_probs = run_sweep(cfg);
    cfg.shots = 100000;
    cfg.validate();
    const auto with_shots = run_sweep(cfg);

    double worst_exact = 0.0, worst_shots = 0.0;
    for (std::size_t s = 0; s + 1 < n; ++s) {
      const auto& t = truth.series.rows()[s];
      const auto& e = exact_probs.series.rows()[s];
      const auto& w = with_shots.series.rows()[s];
      const double ze = std::abs(e.mean_s2 - t.mean_s2) / std_error(e);
      const double zw = std::abs(w.mean_s2 - t.mean_s2) / std::hypot(std_error(w), std_error(t));
      worst_exact = std::max(worst_exact, ze);
      worst_shots = std::max(worst_shots, zw);
      const std::string where = "N=" + std::to_string(n) + " N_rad=" + std::to_string(s + 1);
      out.expect(ze <= 3.0, where + " exact-probability mean off by " + fmt(ze, 3) + " SE");
      out.expect(zw <= 3.0 && w.n_realizations == cfg.realizations,
                 where + " shot mean off by " + fmt(zw, 3) + " combined SE");
    }
    if (!summary.str().empty()) summary << "; ";
    summary << "N=" << n << " (N_U=" << n_u << ") worst " << fmt(worst_exact, 3) << " SE exact, "
            << fmt(worst_shots, 3) << " SE with shots";
  }
  if (out.pass) out.detail << summary.str();
  return out;
}

// Full transport model at four qubits per register.
Outcome transport() {
  Outcome out;
  const auto rep = transport_demo(4, 4, 8000);
  const double fid = rep["radiation_fidelity"].get<double>();
  const double dev = rep["u_pi_swap_deviation"].get<double>();
  out.expect(std::abs(fid - 1.0) <= 1e-10, "radiation fidelity " + fmt(fid, 15));
  out.expect(dev <= 1e-12, "U(pi) deviates by " + fmt(dev, 3));
  if (out.pass) out.detail << "radiation fidelity 1 - " << fmt(1.0 - fid, 3) << "; U(pi) deviation " << fmt(dev, 3);
  return out;
}

// Round trips through the two-qubit decomposition and known Weyl points.
Outcome kak_synthesis() {
  Outcome out;
  const SynthReport rep = synth_check(1000, 1e-9, 9000);
  out.expect(rep.max_deviation < 1e-9, "round trip deviation " + fmt(rep.max_deviation, 3));
  const double q = kPi / 4;
  const std::vector<std::pair<std::string, std::pair<Matrix4, WeylPoint>>> known{
      {"identity", {Matrix4::Identity(), {0, 0, 0}}},
      {"cnot", {gate_matrix(gates::cnot(0, 1)), {q, 0, 0}}},
      {"swap", {gate_matrix(gates::swap(0, 1)), {q, q, q}}}};
  for (const auto& [name, pair] : known) {
    const WeylPoint w = kak_decompose(pair.first).weyl;
    const double d = std::max({std::abs(w.a - pair.second.a), std::abs(w.b - pair.second.b),
                               std::abs(w.c - pair.second.c)});
    out.expect(d < 1e-9, name + " lands at (" + fmt(w.a) + ", " + fmt(w.b) + ", " + fmt(w.c) + ")");
  }
  if (out.pass)
    out.detail << "1000 round trips, max deviation " << fmt(rep.max_deviation, 3)
               << "; identity, CNOT, SWAP at their canonical points";
  return out;
}

// Noise model limits and the two mitigation tools.
Outcome noise_and_mitigation() {
  Outcome out;
  const Circuit c = build_brickwall(8, 4, StreamKey(10000));
  const StateVector clean = simulate(c);
  Engine rng = StreamKey(10001).engine();
  const StateVector traj = run_trajectory(c, NoiseModel{}, rng);
  bool identical = true;
  for (std::size_t i = 0; i < clean.dim(); ++i) identical = identical && traj[i] == clean[i];
  out.expect(identical, "zero-noise trajectory differs from the noiseless state");

  // Readout: sample a known distribution, flip bits, invert the confusion.
  NoiseModel noise;
  noise.readout = {{0.03, 0.06}, {0.05, 0.02}};
  const std::vector<double> truth{0.4, 0.1, 0.2, 0.3};
  const QubitList m{0, 1};
  const std::uint64_t shots = 100000;
  Engine shot_rng = StreamKey(10002).engine();
  const ShotTable noisy = apply_readout_error(sample_from_probs(truth, m, shots, shot_rng), noise, shot_rng);
  const auto fixed = mitigate_readout(noisy, noise);
  // Covariance of the mitigated vector: A^-1 (diag(q) - q q^T) A^-T / shots.
  Matrix a(4, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    std::vector<double> e(4, 0.0);
    e[j] = 1.0;
    const auto col = apply_readout_channel(e, m, noise);
    for (std::size_t i = 0; i < 4; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  const auto q = apply_readout_channel(truth, m, noise);
  Matrix cov = Matrix::Zero(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (i == j ? q[i] : 0.0) - q[i] * q[j];
  const Matrix ainv = a.inverse();
  const Matrix g = ainv * cov * ainv.adjoint() / static_cast<double>(shots);
  double worst_z = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    const double sigma = std::sqrt(g(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)).real());
    const double z = std::abs(fixed[j] - truth[j]) / sigma;
    worst_z = std::max(worst_z, z);
    out.expect(z <= 3.0, "mitigated outcome " + std::to_string(j) + " is " + fmt(z, 3) + " sigma off");
  }

  // Linear extrapolation on exact synthetic lines.
  Engine line_rng = StreamKey(10003).engine();
  double worst_zne = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double intercept = uniform01(line_rng), slope = uniform01(line_rng) - 0.5;
    std::vector<std::pair<double, double>> pts;
    for (double x : {1.0, 1.5, 2.0, 3.0}) pts.emplace_back(x, intercept + slope * x);
    worst_zne = std::max(worst_zne, std::abs(zne_extrapolate(pts, 1) - intercept));
  }
  out.expect(worst_zne <= 1e-12, "linear extrapolation misses by " + fmt(worst_zne, 3));

  if (out.pass)
    out.detail << "zero noise bit-identical; mitigation within " << fmt(worst_z, 3) << " sigma; ZNE intercept error "
               << fmt(worst_zne, 3);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks{
      {"Haar baseline", haar_baseline},
      {"brickwall build-up", brickwall_buildup},
      {"Page-curve shape", page_shape},
      {"Page formula", page_formula},
      {"gate accounting", gate_accounting},
      {"swap-test exactness", swap_exactness},
      {"randomized measurements", randomized_measurements},
      {"transport model", transport},
      {"KAK synthesis", kak_synthesis},
      {"noise and mitigation", noise_and_mitigation}};

  std::set<std::size_t> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::stoul(argv[i]));

  int failures = 0;
  for (std::size_t k = 0; k < checks.size(); ++k) {
    if (!wanted.empty() && wanted.count(k + 1) == 0) continue;
    const auto& [name, run] = checks[k];
    Outcome res;
    try {
      res = run();
    } catch (const std::exception& e) {
      res.pass = false;
      res.detail << "threw: " << e.what();
    }
    failures += !res.pass;
    std::cout << "AC" << (k + 1) << ' ' << (res.pass ? "PASS" : "FAIL") << " [" << name << "]: " << res.detail.str()
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
