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

// Experiment driver behind the command-line tool: configuration, seeded
// sweeps over realizations and subsystems, and CSV / JSON emission.

#ifndef PAGECURVE_EXPERIMENT_HPP
#define PAGECURVE_EXPERIMENT_HPP

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pagecurve/builders.hpp"
#include "pagecurve/entropy.hpp"
#include "pagecurve/noise.hpp"
#include "pagecurve/protocols.hpp"
#include "pagecurve/sampling.hpp"
#include "pagecurve/stats.hpp"
#include "pagecurve/synth.hpp"

namespace pagecurve {

enum class Mode { exact, swap_mbi, rm, analytic, transport, synth_check };

inline Mode mode_from_name(std::string_view s) {
  if (s == "exact") return Mode::exact;
  if (s == "swap-mbi") return Mode::swap_mbi;
  if (s == "rm") return Mode::rm;
  if (s == "analytic") return Mode::analytic;
  if (s == "transport") return Mode::transport;
  if (s == "synth-check") return Mode::synth_check;
  throw PreconditionError("unknown mode '" + std::string(s) +
                          "' (expected exact, swap-mbi, rm, analytic, transport or synth-check)");
}

inline std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::exact: return "exact";
    case Mode::swap_mbi: return "swap-mbi";
    case Mode::rm: return "rm";
    case Mode::analytic: return "analytic";
    case Mode::transport: return "transport";
    case Mode::synth_check: return "synth-check";
  }
  return "?";
}

/// Which state each realization prepares: a brickwall circuit, a global
/// Haar-random state, or singlets on neighbouring pairs (fixture).
enum class BaseCircuit { brickwall, haar, bell };

inline BaseCircuit base_from_name(std::string_view s) {
  if (s == "brickwall") return BaseCircuit::brickwall;
  if (s == "haar") return BaseCircuit::haar;
  if (s == "bell") return BaseCircuit::bell;
  throw PreconditionError("unknown circuit '" + std::string(s) + "' (expected brickwall, haar or bell)");
}

inline std::string_view base_name(BaseCircuit b) {
  switch (b) {
    case BaseCircuit::brickwall: return "brickwall";
    case BaseCircuit::haar: return "haar";
    case BaseCircuit::bell: return "bell";
  }
  return "?";
}

struct ExperimentConfig {
  Mode mode = Mode::exact;
  BaseCircuit circuit = BaseCircuit::brickwall;
  std::size_t n = 8;
  std::size_t layers = 4;
  std::size_t realizations = 100;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> shots;  // empty: exact probabilities
  std::optional<std::size_t> n_u;      // empty: 10 below 12 qubits, 20 from 12 on
  Estimator estimator = Estimator::unbiased;
  std::vector<QubitList> subsystems;  // empty: left blocks of size 1..n-1
  std::optional<NoiseModel> noise;
  std::size_t trajectories = 100;
  std::vector<double> zne_scales;
  bool routed = false;
  std::string output;  // empty: standard output
  std::size_t threads = 1;
  bool bits = false;   // display only; files stay in nats
  std::size_t samples = 1000;  // synth-check
  double tolerance = 1e-9;     // synth-check
  SimLimits limits{};

  std::size_t effective_n_u() const { return n_u.value_or(n >= 12 ? 20 : 10); }

  std::vector<QubitList> effective_subsystems() const {
    if (!subsystems.empty()) return subsystems;
    std::vector<QubitList> out;
    for (std::size_t l = 1; l < n; ++l) out.push_back(left_block(l));
    return out;
  }

  /// Throws PreconditionError / MemoryBudgetError naming the offending field.
  void validate() const {
    require(realizations >= 1, "realizations must be at least 1");
    require(threads >= 1, "threads must be at least 1");
    require(n >= 1, "n must be at least 1");
    if (mode == Mode::synth_check) {
      require(samples >= 1, "samples must be at least 1");
      return;
    }
    if (mode == Mode::analytic) {
      require(n >= 2 && n <= 40, "analytic mode needs 2 <= n <= 40");
      return;
    }
    if (circuit == BaseCircuit::brickwall || mode == Mode::transport) {
      require(n >= 2, "brickwall circuits need n >= 2");
      require(layers >= 1, "layers must be at least 1");
    }
    if (circuit == BaseCircuit::bell) require(n % 2 == 0, "the bell fixture needs an even n");
    if (mode == Mode::transport) {
      if (3 * n > limits.max_qubits)
        throw MemoryBudgetError("transport mode uses 3n = " + std::to_string(3 * n) + " qubits (" +
                                std::to_string(state_bytes(3 * n)) + " bytes), above the cap of " +
                                std::to_string(limits.max_qubits));
      return;
    }
    if (n > limits.max_qubits)
      throw MemoryBudgetError("a " + std::to_string(n) + "-qubit state needs " + std::to_string(state_bytes(n)) +
                              " bytes, above the cap of " + std::to_string(limits.max_qubits) + " qubits");
    if (mode == Mode::swap_mbi && 2 * n + 1 > limits.max_qubits)
      throw MemoryBudgetError("swap-mbi mode doubles the register: 2n+1 = " + std::to_string(2 * n + 1) +
                              " qubits need " + std::to_string(state_bytes(2 * n + 1)) +
                              " bytes, above the cap of " + std::to_string(limits.max_qubits) + " qubits");
    if (shots) require(*shots >= 1, "shots must be at least 1");
    if (mode == Mode::rm) {
      require(effective_n_u() >= 2, "n_u must be at least 2");
      if (shots && estimator == Estimator::unbiased) require(*shots >= 2, "the unbiased estimator needs >= 2 shots");
    }
    if (noise) {
      require(mode == Mode::swap_mbi, "noise models are supported in swap-mbi mode only");
      noise->validate();
      require(trajectories >= 1, "trajectories must be at least 1");
      for (double s : zne_scales) require(s >= 0.0, "zne_scales must be nonnegative");
    }
    if (!zne_scales.empty()) {
      require(noise.has_value(), "zne_scales need a noise model");
      std::set<double> distinct(zne_scales.begin(), zne_scales.end());
      require(distinct.size() >= 2, "zne_scales need at least two distinct values");
    }
    std::size_t prev = 0;
    for (const auto& sub : effective_subsystems()) {
      require(!sub.empty(), "subsystems must be nonempty");
      detail::check_subsystem(sub, n);
      require(sub.size() > prev, "subsystems must have strictly increasing sizes");
      prev = sub.size();
      if (mode == Mode::rm)
        require(sub.size() <= limits.max_marginal_qubits, "rm subsystem exceeds the marginal cap");
      if (mode == Mode::exact)
        require(std::min(sub.size(), n - sub.size()) <= kDefaultGramCap, "exact subsystem exceeds the Gram cap");
    }
  }
};

/// Parses "0,1,2;3,4" (semicolon-separated index lists) or "left-blocks".
inline std::vector<QubitList> parse_subsystems(const std::string& text) {
  if (text.empty() || text == "left-blocks") return {};
  std::vector<QubitList> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    QubitList sub;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      require(!item.empty() && item.find_first_not_of("0123456789 ") == std::string::npos,
              "subsystem entry '" + item + "' is not a qubit index");
      sub.push_back(std::stoull(item));
    }
    out.push_back(std::move(sub));
  }
  return out;
}

/// Fills `cfg` from a JSON object whose keys mirror the config fields.
inline void apply_config_json(const nlohmann::json& j, ExperimentConfig& cfg) {
  require(j.is_object(), "config must be a JSON object");
  static const std::set<std::string> known{"mode",        "circuit",  "n",          "layers",      "realizations",
                                           "seed",        "shots",    "n_u",        "estimator",   "subsystems",
                                           "noise",       "output",   "threads",    "units",       "trajectories",
                                           "zne_scales",  "routed",   "samples",    "tolerance"};
  for (const auto& [key, _] : j.items())
    require(known.count(key) > 0, "config: unknown field '" + key + "'");
  auto field = [&](const char* name, auto setter) {
    if (!j.contains(name)) return;
    try {
      setter(j.at(name));
    } catch (const nlohmann::json::exception& e) {
      throw PreconditionError(std::string("config field '") + name + "': " + e.what());
    } catch (const PreconditionError& e) {
      throw PreconditionError(std::string("config field '") + name + "': " + e.what());
    }
  };
  field("mode", [&](const auto& v) { cfg.mode = mode_from_name(v.template get<std::string>()); });
  field("circuit", [&](const auto& v) { cfg.circuit = base_from_name(v.template get<std::string>()); });
  field("n", [&](const auto& v) { cfg.n = v.template get<std::size_t>(); });
  field("layers", [&](const auto& v) { cfg.layers = v.template get<std::size_t>(); });
  field("realizations", [&](const auto& v) { cfg.realizations = v.template get<std::size_t>(); });
  field("seed", [&](const auto& v) { cfg.seed = v.template get<std::uint64_t>(); });
  field("shots", [&](const auto& v) {
    if (v.is_string()) {
      require(v.template get<std::string>() == "exact", "shots must be a positive integer or \"exact\"");
      cfg.shots.reset();
    } else {
      cfg.shots = v.template get<std::uint64_t>();
    }
  });
  field("n_u", [&](const auto& v) { cfg.n_u = v.template get<std::size_t>(); });
  field("estimator", [&](const auto& v) { cfg.estimator = estimator_from_name(v.template get<std::string>()); });
  field("subsystems", [&](const auto& v) {
    if (v.is_string())
      cfg.subsystems = parse_subsystems(v.template get<std::string>());
    else
      cfg.subsystems = v.template get<std::vector<QubitList>>();
  });
  field("noise", [&](const auto& v) { cfg.noise = v.template get<NoiseModel>(); });
  field("output", [&](const auto& v) { cfg.output = v.template get<std::string>(); });
  field("threads", [&](const auto& v) { cfg.threads = v.template get<std::size_t>(); });
  field("units", [&](const auto& v) {
    const auto u = v.template get<std::string>();
    require(u == "nats" || u == "bits", "units must be nats or bits");
    cfg.bits = u == "bits";
  });
  field("trajectories", [&](const auto& v) { cfg.trajectories = v.template get<std::size_t>(); });
  field("zne_scales", [&](const auto& v) { cfg.zne_scales = v.template get<std::vector<double>>(); });
  field("routed", [&](const auto& v) { cfg.routed = v.template get<bool>(); });
  field("samples", [&](const auto& v) { cfg.samples = v.template get<std::size_t>(); });
  field("tolerance", [&](const auto& v) { cfg.tolerance = v.template get<double>(); });
}

/// Reads a JSON document; parse errors carry line and column.
inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Sweeps

/// Singlets on (0,1), (2,3), ...
inline Circuit bell_fixture(std::size_t n) {
  Circuit c(n);
  for (Qubit i = 0; i + 1 < n; i += 2) c.append(bell_pair_circuit(i, i + 1, n));
  c.metadata()["builder"] = "bell_fixture";
  return c;
}

/// Per-realization purity estimates, one per subsystem.
struct RealizationResult {
  std::vector<double> purity;
  std::vector<double> std_error;  // within-realization error of the estimate
};

namespace detail {

inline double swap_v_noisy(const Circuit& base, std::span<const Qubit> sub, const NoiseModel& noise,
                           std::size_t trajectories, const StreamKey& key, std::optional<std::uint64_t> shots,
                           double& se_out) {
  const Circuit protocol = swap_mbi_circuit(base, sub);
  const Qubit anc = protocol.metadata()["ancilla"].get<Qubit>();
  const QubitList m{anc};
  auto avg = run_noisy(protocol, noise, trajectories, key.child("noise"),
                       [&](const StateVector& s) { return marginal_probs(s, m); });
  const auto observed = apply_readout_channel(avg.mean, m, noise);
  // Readout errors are undone by inverting the ancilla's confusion matrix;
  // gate noise is left for extrapolation. The inverse stretches errors by
  // 1 / (1 - e0 - e1).
  const ReadoutError ro = noise.readout_for(anc);
  const double stretch = 1.0 / (1.0 - ro.e0 - ro.e1);
  if (!shots) {
    se_out = 2.0 * avg.std_error[0];
    return 2.0 * mitigate_readout(observed, m, noise)[0] - 1.0;
  }
  Engine rng = key.child("noisy-shots").engine();
  const ShotTable table = sample_from_probs(observed, m, *shots, rng);
  const auto est = estimate_purity_swap(table);
  se_out = std::sqrt(std::pow(stretch * est.std_error, 2) + 4.0 * avg.std_error[0] * avg.std_error[0]);
  return 2.0 * mitigate_readout(table, noise)[0] - 1.0;
}

}  // namespace detail

/// Realization r uses StreamKey(seed).child("realization", r); the base
/// circuit draws from its "circuit" child, so every mode sees the same
/// circuits for the same seed.
inline RealizationResult run_realization(const ExperimentConfig& cfg, std::size_t r) {
  const StreamKey key = StreamKey(cfg.seed).child("realization", r);
  const auto subs = cfg.effective_subsystems();
  RealizationResult out;

  std::optional<Circuit> base;
  std::optional<StateVector> state;
  switch (cfg.circuit) {
    case BaseCircuit::brickwall: base = build_brickwall(cfg.n, cfg.layers, key.child("circuit")); break;
    case BaseCircuit::bell: base = bell_fixture(cfg.n); break;
    case BaseCircuit::haar: {
      Engine rng = key.child("circuit").engine();
      state = sample_haar_state(cfg.n, rng, cfg.limits);
      break;
    }
  }
  if (!state && cfg.mode != Mode::swap_mbi) state = simulate(*base, {true, cfg.limits});

  std::optional<SwapTestBench> bench;
  if (cfg.mode == Mode::swap_mbi && !cfg.noise && !cfg.routed)
    bench.emplace(base ? SwapTestBench(*base, cfg.limits) : SwapTestBench(*state, cfg.limits));

  for (std::size_t s = 0; s < subs.size(); ++s) {
    const QubitList& sub = subs[s];
    double value = 0.0, se = 0.0;
    switch (cfg.mode) {
      case Mode::exact: value = reduced_purity(*state, sub); break;
      case Mode::rm: {
        const auto est = rm_protocol(*state, sub, {cfg.effective_n_u(), cfg.shots, cfg.estimator}, key.child("rm", s));
        value = est.value;
        se = est.std_error;
        break;
      }
      case Mode::swap_mbi: {
        if (cfg.noise) {
          require(base.has_value(), "noisy swap-mbi needs a gate-level base circuit (brickwall or bell)");
          if (cfg.zne_scales.empty()) {
            value = detail::swap_v_noisy(*base, sub, *cfg.noise, cfg.trajectories, key.child("swap", s), cfg.shots, se);
          } else {
            // Every scale reuses one stream so the trajectories share error
            // sites, which keeps the fitted slope from drowning in noise.
            std::vector<std::pair<double, double>> points;
            for (std::size_t k = 0; k < cfg.zne_scales.size(); ++k) {
              double se_k = 0.0;
              const double v = detail::swap_v_noisy(*base, sub, cfg.noise->scaled(cfg.zne_scales[k]), cfg.trajectories,
                                                    key.child("swap", s), cfg.shots, se_k);
              points.emplace_back(cfg.zne_scales[k], v);
            }
            value = zne_extrapolate(points, 1);
          }
        } else if (cfg.routed) {
          // Full chain-routed protocol circuit, simulated gate by gate.
          require(base.has_value(), "routed swap-mbi needs a gate-level base circuit (brickwall or bell)");
          const double p0 = swap_mbi_p0(swap_mbi_circuit(*base, sub, true), {true, cfg.limits});
          if (cfg.shots) {
            Engine rng = key.child("swap-shots", s).engine();
            const std::vector<double> probs{p0, 1.0 - p0};
            const auto est = estimate_purity_swap(sample_from_probs(probs, {0}, *cfg.shots, rng));
            value = est.value;
            se = est.std_error;
          } else {
            value = estimate_purity_swap(p0).value;
          }
        } else if (cfg.shots) {
          Engine rng = key.child("swap-shots", s).engine();
          const auto est = estimate_purity_swap(bench->shots(sub, *cfg.shots, rng));
          value = est.value;
          se = est.std_error;
        } else {
          value = estimate_purity_swap(bench->p0(sub)).value;
        }
        break;
      }
      default: throw PreconditionError("mode '" + std::string(mode_name(cfg.mode)) + "' is not a sweep mode");
    }
    out.purity.push_back(value);
    out.std_error.push_back(se);
  }
  return out;
}

struct SweepResult {
  EntropySeries series;
  std::vector<RealizationResult> realizations;
  std::size_t invalid = 0;  // nonpositive purity estimates skipped in S2
};

/// Runs all realizations on up to cfg.threads workers and aggregates by
/// realization index, so output does not depend on the thread count.
inline SweepResult run_sweep(const ExperimentConfig& cfg,
                             const std::function<void(std::size_t done, std::size_t total)>& progress = {}) {
  cfg.validate();
  require(cfg.mode == Mode::exact || cfg.mode == Mode::swap_mbi || cfg.mode == Mode::rm,
          "run_sweep handles exact, swap-mbi and rm modes");
  SweepResult res;
  res.realizations.resize(cfg.realizations);
  std::atomic<std::size_t> next{0}, done{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t r = next.fetch_add(1);
      if (r >= cfg.realizations) return;
      try {
        res.realizations[r] = run_realization(cfg, r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cfg.realizations;
        return;
      }
      const std::size_t d = ++done;
      if (progress) {
        std::lock_guard lock(failure_mutex);
        progress(d, cfg.realizations);
      }
    }
  };
  const std::size_t workers = std::min(cfg.threads, cfg.realizations);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  const auto subs = cfg.effective_subsystems();
  for (std::size_t s = 0; s < subs.size(); ++s) {
    RunningStats s2, purity;
    double single_se = 0.0;
    for (const auto& rr : res.realizations) {
      purity.add(rr.purity[s]);
      const EntropyEstimate e = purity_to_entropy({rr.purity[s], rr.std_error[s]});
      if (e.valid) {
        s2.add(e.s2);
        single_se = e.std_error;
      } else {
        ++res.invalid;
      }
    }
    EntropyRow row;
    row.n_rad = subs[s].size();
    row.n_realizations = s2.count();
    row.mean_s2 = s2.count() > 0 ? s2.mean() : std::nan("");
    row.mean_purity = purity.mean();
    if (cfg.realizations == 1) {
      row.std_s2 = single_se;
      row.std_err_purity = res.realizations[0].std_error[s];
    } else {
      row.std_s2 = s2.stddev();
      row.std_err_purity = purity.std_error();
    }
    if (row.n_realizations == 0) row.n_realizations = 1;  // row kept for the record; mean is NaN
    res.series.add(row);
  }
  return res;
}

inline constexpr const char* kSweepCsvHeader =
    "mode,n,layers,n_rad,realizations,mean_S2_nats,std_S2_nats,mean_purity,std_err_purity,seed";

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg, const SweepResult& res) {
  os << kSweepCsvHeader << '\n';
  const std::size_t layers = cfg.circuit == BaseCircuit::brickwall ? cfg.layers : 0;
  for (const auto& row : res.series.rows()) {
    os << mode_name(cfg.mode) << ',' << cfg.n << ',' << layers << ',' << row.n_rad << ',' << row.n_realizations << ','
       << format_double(row.mean_s2) << ',' << format_double(row.std_s2) << ',' << format_double(row.mean_purity)
       << ',' << format_double(row.std_err_purity) << ',' << cfg.seed << '\n';
  }
}

inline constexpr const char* kAnalyticCsvHeader = "n,n_rad,page_entropy_nats,haar_renyi2_nats,page_approx_nats";

inline void write_analytic_csv(std::ostream& os, std::size_t n) {
  require(n >= 2 && n <= 40, "analytic tables need 2 <= n <= 40");
  os << kAnalyticCsvHeader << '\n';
  for (std::size_t l = 1; l < n; ++l)
    os << n << ',' << l << ',' << format_double(page_entropy(l, n - l)) << ','
       << format_double(haar_avg_renyi2(l, n)) << ',' << format_double(page_approx(l, n)) << '\n';
}

// ---------------------------------------------------------------------------
// Transport demonstration

/// Runs the full transport model and reports how faithfully the black-hole
/// state ends up in the radiation register.
inline nlohmann::json transport_demo(std::size_t n, std::size_t layers, std::uint64_t seed,
                                     const SimLimits& limits = {}) {
  const StreamKey key = StreamKey(seed).child("transport");
  const Circuit scramble = build_brickwall(n, layers, key);
  const StateVector before = simulate(scramble, {true, limits});
  const Circuit full = build_transport_model(n, layers, key, TransportVariant::full);
  const StateVector after = simulate(full, {true, limits});
  const TransportLayout lay{n};

  nlohmann::json j;
  j["n"] = n;
  j["layers"] = layers;
  j["seed"] = seed;
  j["qubits"] = 3 * n;

  QubitList radiation;
  for (std::size_t i = 0; i < n; ++i) radiation.push_back(lay.b(i));
  j["radiation_fidelity"] = subsystem_fidelity(after, radiation, before);

  StateVector singlet = StateVector::from_amplitudes({0.0, -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0});
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const QubitList qa{lay.q(i), lay.a(i)};
    pairs.push_back(subsystem_fidelity(after, qa, singlet));
  }
  j["partner_singlet_fidelity"] = pairs;

  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t l = 1; l < n; ++l) {
    const QubitList rad(radiation.begin(), radiation.begin() + static_cast<std::ptrdiff_t>(l));
    rows.push_back({{"n_rad", l},
                    {"radiation_S2_nats", renyi_entropy(after, rad)},
                    {"black_hole_S2_nats", renyi_entropy(before, left_block(l))}});
  }
  j["renyi2"] = rows;

  Matrix expected = Matrix::Zero(8, 8);
  for (std::size_t s = 0; s < 8; ++s) {
    const std::size_t q = s & 1, a = (s >> 1) & 1, b = (s >> 2) & 1;
    expected(static_cast<Eigen::Index>(b | (a << 1) | (q << 2)), static_cast<Eigen::Index>(s)) = 1.0;
  }
  j["u_pi_swap_deviation"] = (transport_u_theta(kPi) - expected).cwiseAbs().maxCoeff();
  return j;
}

// ---------------------------------------------------------------------------
// Synthesis check

struct SynthReport {
  std::size_t samples = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::map<std::size_t, std::size_t> cnot_histogram;
  std::map<std::size_t, std::size_t> entangler_depth_histogram;
  std::map<std::size_t, std::size_t> block_depth_histogram;
  bool pass = false;

  nlohmann::json to_json() const {
    auto hist = [](const std::map<std::size_t, std::size_t>& h) {
      nlohmann::json j = nlohmann::json::object();
      for (auto [k, v] : h) j[std::to_string(k)] = v;
      return j;
    };
    return {{"samples", samples},
            {"max_deviation", max_deviation},
            {"tolerance", tolerance},
            {"cnot_histogram", hist(cnot_histogram)},
            {"entangler_depth_histogram", hist(entangler_depth_histogram)},
            {"block_depth_histogram", hist(block_depth_histogram)},
            {"pass", pass}};
  }
};

/// Haar SU(4) samples through su4_circuit; deviation is the max entry of
/// |U - e^{i phase} C| with the recorded phase.
inline SynthReport synth_check(std::size_t samples, double tol, std::uint64_t seed = 1) {
  require(samples >= 1, "synth-check needs at least one sample");
  SynthReport rep;
  rep.samples = samples;
  rep.tolerance = tol;
  const StreamKey key = StreamKey(seed).child("synth-check");
  for (std::size_t i = 0; i < samples; ++i) {
    Engine rng = key.child(i).engine();
    const Matrix4 u = sample_haar_su4(rng);
    const Circuit c = su4_circuit(u);
    const Matrix m = std::polar(1.0, c.metadata()["global_phase"].get<double>()) * circuit_unitary(c);
    rep.max_deviation = std::max(rep.max_deviation, (m - u).cwiseAbs().maxCoeff());
    const auto w = c.metadata()["weyl"];
    const Circuit core = entangler_circuit({w[0].get<double>(), w[1].get<double>(), w[2].get<double>()});
    ++rep.cnot_histogram[count_gates(c).cnot_count];
    ++rep.entangler_depth_histogram[count_gates(core).depth];
    ++rep.block_depth_histogram[count_gates(c).depth];
  }
  const bool counts_ok = rep.cnot_histogram.size() == 1 && rep.cnot_histogram.count(3) == 1 &&
                         rep.entangler_depth_histogram.size() == 1 && rep.entangler_depth_histogram.count(7) == 1;
  rep.pass = counts_ok && rep.max_deviation <= tol;
  return rep;
}

}  // namespace pagecurve

#endif  // PAGECURVE_EXPERIMENT_HPP
