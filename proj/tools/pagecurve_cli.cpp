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

// Command-line driver. Data goes to --out (or standard output); progress
// and summaries go to standard error.
//
// Exit codes: 0 success, 1 check failed or runtime error, 2 bad
// configuration or memory budget refusal.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pagecurve/experiment.hpp"

namespace {

using pagecurve::ExperimentConfig;
using pagecurve::Mode;

/// Flag values; each is applied on top of the config file only if given.
struct Flags {
  std::string config;
  std::optional<std::string> mode, circuit, shots, estimator, subsystem, noise_config, out, units;
  std::optional<std::size_t> n, layers, realizations, n_u, threads, trajectories, samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::vector<double> zne_scales;
  bool routed = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON experiment config; flags override its fields");
  app->add_option("--n", f.n, "number of black-hole qubits");
  app->add_option("--layers", f.layers, "brickwall layers");
  app->add_option("--realizations", f.realizations, "random circuit realizations");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--threads", f.threads, "worker threads over realizations");
  app->add_option("--out", f.out, "output file (default: standard output)");
  app->add_option("--units", f.units, "entropy units in the stderr summary: nats or bits");
}

void add_sweep_options(CLI::App* app, Flags& f) {
  add_common(app, f);
  app->add_option("--circuit", f.circuit, "base state: brickwall, haar or bell");
  app->add_option("--shots", f.shots, "shots per measurement setting, or 'exact'");
  app->add_option("--nu", f.n_u, "randomized-measurement unitaries per realization");
  app->add_option("--estimator", f.estimator, "plugin or unbiased");
  app->add_option("--subsystem", f.subsystem, "'left-blocks' or index lists such as '0,1;0,1,2'");
  app->add_option("--noise-config", f.noise_config, "JSON file holding a noise model");
  app->add_option("--trajectories", f.trajectories, "noise trajectories per estimate");
  app->add_option("--zne-scales", f.zne_scales, "noise scales for zero-noise extrapolation");
  app->add_flag("--routed", f.routed, "simulate the linear-chain routed swap test");
}

ExperimentConfig build_config(const Flags& f, std::optional<Mode> fixed_mode) {
  ExperimentConfig cfg;
  if (!f.config.empty()) pagecurve::apply_config_json(pagecurve::read_json_file(f.config), cfg);
  if (f.mode) cfg.mode = pagecurve::mode_from_name(*f.mode);
  if (fixed_mode) cfg.mode = *fixed_mode;
  if (f.circuit) cfg.circuit = pagecurve::base_from_name(*f.circuit);
  if (f.n) cfg.n = *f.n;
  if (f.layers) cfg.layers = *f.layers;
  if (f.realizations) cfg.realizations = *f.realizations;
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  if (f.out) cfg.output = *f.out;
  if (f.units) {
    pagecurve::require(*f.units == "nats" || *f.units == "bits", "--units must be nats or bits");
    cfg.bits = *f.units == "bits";
  }
  if (f.shots) {
    if (*f.shots == "exact") {
      cfg.shots.reset();
    } else {
      pagecurve::require(f.shots->find_first_not_of("0123456789") == std::string::npos && !f.shots->empty(),
                         "--shots must be a positive integer or 'exact'");
      cfg.shots = std::stoull(*f.shots);
    }
  }
  if (f.n_u) cfg.n_u = *f.n_u;
  if (f.estimator) cfg.estimator = pagecurve::estimator_from_name(*f.estimator);
  if (f.subsystem) cfg.subsystems = pagecurve::parse_subsystems(*f.subsystem);
  if (f.noise_config) cfg.noise = pagecurve::read_json_file(*f.noise_config).get<pagecurve::NoiseModel>();
  if (f.trajectories) cfg.trajectories = *f.trajectories;
  if (!f.zne_scales.empty()) cfg.zne_scales = f.zne_scales;
  if (f.routed) cfg.routed = true;
  if (f.samples) cfg.samples = *f.samples;
  if (f.tolerance) cfg.tolerance = *f.tolerance;
  cfg.validate();
  return cfg;
}

/// Writes through `emit` to the configured file or to standard output.
template <class Emit>
void write_output(const ExperimentConfig& cfg, Emit&& emit) {
  if (cfg.output.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream os(cfg.output);
  pagecurve::require(static_cast<bool>(os), "cannot open output file '" + cfg.output + "'");
  emit(os);
  std::cerr << "[pagecurve] wrote " << cfg.output << '\n';
}

int run_sweep_command(const ExperimentConfig& cfg) {
  std::cerr << "[pagecurve] " << pagecurve::mode_name(cfg.mode) << " sweep: n=" << cfg.n
            << " circuit=" << pagecurve::base_name(cfg.circuit) << " layers=" << cfg.layers
            << " realizations=" << cfg.realizations << " seed=" << cfg.seed << '\n';
  const std::size_t step = std::max<std::size_t>(1, cfg.realizations / 10);
  const auto res = pagecurve::run_sweep(cfg, [&](std::size_t done, std::size_t total) {
    if (done % step == 0 || done == total) std::cerr << "[pagecurve] realization " << done << '/' << total << '\n';
  });
  write_output(cfg, [&](std::ostream& os) { pagecurve::write_sweep_csv(os, cfg, res); });
  const double scale = cfg.bits ? 1.0 / std::log(2.0) : 1.0;
  const char* unit = cfg.bits ? "bits" : "nats";
  for (const auto& row : res.series.rows())
    std::cerr << "[pagecurve]   n_rad=" << row.n_rad << "  S2=" << row.mean_s2 * scale << " +/- "
              << row.std_s2 * scale << ' ' << unit << '\n';
  if (res.invalid > 0)
    std::cerr << "[pagecurve] warning: " << res.invalid << " nonpositive purity estimates left out of S2\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statevector simulation of black-hole Page curves"};
  app.require_subcommand(1);
  Flags f;

  auto* sweep = app.add_subcommand("sweep", "entropy sweep over realizations and subsystem sizes");
  add_sweep_options(sweep, f);
  sweep->add_option("--mode", f.mode, "exact, swap-mbi or rm");
  auto* rm = app.add_subcommand("rm", "randomized-measurement sweep");
  add_sweep_options(rm, f);
  auto* swap = app.add_subcommand("swap-mbi", "swap-test sweep");
  add_sweep_options(swap, f);
  auto* analytic = app.add_subcommand("analytic", "closed-form Page and Haar curves");
  add_common(analytic, f);
  auto* transport = app.add_subcommand("transport-demo", "full transport model with fidelity report");
  add_common(transport, f);
  auto* synth = app.add_subcommand("synth-check", "round-trip Haar SU(4) samples through the synthesizer");
  add_common(synth, f);
  synth->add_option("--samples", f.samples, "number of SU(4) samples");
  synth->add_option("--tol", f.tolerance, "maximum allowed deviation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) {
      if (!f.mode && f.config.empty()) f.mode = "exact";
      return run_sweep_command(build_config(f, std::nullopt));
    }
    if (rm->parsed()) return run_sweep_command(build_config(f, Mode::rm));
    if (swap->parsed()) return run_sweep_command(build_config(f, Mode::swap_mbi));
    if (analytic->parsed()) {
      const auto cfg = build_config(f, Mode::analytic);
      write_output(cfg, [&](std::ostream& os) { pagecurve::write_analytic_csv(os, cfg.n); });
      return 0;
    }
    if (transport->parsed()) {
      if (!f.n) f.n = 4;
      const auto cfg = build_config(f, Mode::transport);
      const auto report = pagecurve::transport_demo(cfg.n, cfg.layers, cfg.seed, cfg.limits);
      write_output(cfg, [&](std::ostream& os) { os << report.dump(2) << '\n'; });
      const bool ok = std::abs(report["radiation_fidelity"].get<double>() - 1.0) < 1e-10;
      std::cerr << "[pagecurve] radiation fidelity " << report["radiation_fidelity"].get<double>()
                << (ok ? " (ok)" : " (FAILED)") << '\n';
      return ok ? 0 : 1;
    }
    if (synth->parsed()) {
      const auto cfg = build_config(f, Mode::synth_check);
      const auto rep = pagecurve::synth_check(cfg.samples, cfg.tolerance, cfg.seed);
      write_output(cfg, [&](std::ostream& os) { os << rep.to_json().dump(2) << '\n'; });
      std::cerr << "[pagecurve] synth-check " << (rep.pass ? "passed" : "FAILED") << ": max deviation "
                << rep.max_deviation << " (tolerance " << rep.tolerance << ")\n";
      return rep.pass ? 0 : 1;
    }
  } catch (const pagecurve::PreconditionError& e) {
    std::cerr << "[pagecurve] configuration error: " << e.what() << '\n';
    return 2;
  } catch (const pagecurve::MemoryBudgetError& e) {
    std::cerr << "[pagecurve] memory budget: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "[pagecurve] error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
