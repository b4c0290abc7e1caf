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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "pagecurve/experiment.hpp"

using namespace pagecurve;
using Catch::Matchers::WithinAbs;

namespace {

std::string sweep_csv(const ExperimentConfig& cfg) {
  std::ostringstream os;
  write_sweep_csv(os, cfg, run_sweep(cfg));
  return os.str();
}

std::vector<std::vector<std::string>> split_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

bool is_number(const std::string& s) {
  char* end = nullptr;
  std::strtod(s.c_str(), &end);
  return !s.empty() && end == s.c_str() + s.size();
}

}  // namespace

TEST_CASE("sweep CSV matches the golden file", "[experiment][csv]") {
  ExperimentConfig cfg;
  cfg.circuit = BaseCircuit::bell;
  cfg.n = 4;
  cfg.realizations = 3;
  cfg.seed = 7;
  const std::string produced = sweep_csv(cfg);

  std::ifstream in(PAGECURVE_GOLDEN_DIR "/bell_n4_exact.csv");
  REQUIRE(in);
  std::stringstream golden;
  golden << in.rdbuf();

  const auto got = split_csv(produced), want = split_csv(golden.str());
  REQUIRE(got.size() == want.size());
  CHECK(produced.substr(0, produced.find('\n')) == kSweepCsvHeader);
  CHECK(std::string(kSweepCsvHeader) ==
        "mode,n,layers,n_rad,realizations,mean_S2_nats,std_S2_nats,mean_purity,std_err_purity,seed");
  for (std::size_t r = 0; r < got.size(); ++r) {
    REQUIRE(got[r].size() == want[r].size());
    for (std::size_t c = 0; c < got[r].size(); ++c) {
      if (r > 0 && is_number(want[r][c]) && c >= 5 && c <= 8)
        CHECK_THAT(std::stod(got[r][c]), WithinAbs(std::stod(want[r][c]), 1e-12));
      else
        CHECK(got[r][c] == want[r][c]);
    }
  }
}

TEST_CASE("sweeps are reproducible across reruns and thread counts", "[experiment]") {
  ExperimentConfig cfg;
  cfg.n = 6;
  cfg.layers = 3;
  cfg.realizations = 7;
  cfg.seed = 42;
  for (Mode m : {Mode::exact, Mode::swap_mbi, Mode::rm}) {
    cfg.mode = m;
    cfg.threads = 1;
    const std::string one = sweep_csv(cfg);
    CHECK(sweep_csv(cfg) == one);
    cfg.threads = 3;
    CHECK(sweep_csv(cfg) == one);
  }
  cfg.mode = Mode::exact;
  cfg.threads = 1;
  const std::string base = sweep_csv(cfg);
  cfg.seed = 43;
  CHECK(sweep_csv(cfg) != base);
}

TEST_CASE("modes agree on the same circuits", "[experiment]") {
  ExperimentConfig cfg;
  cfg.n = 6;
  cfg.layers = 4;
  cfg.realizations = 5;
  cfg.seed = 3;
  const auto exact = run_sweep(cfg);
  cfg.mode = Mode::swap_mbi;
  const auto swap = run_sweep(cfg);
  cfg.routed = true;
  const auto routed = run_sweep(cfg);
  for (std::size_t r = 0; r < cfg.realizations; ++r)
    for (std::size_t s = 0; s < 5; ++s) {
      CHECK_THAT(swap.realizations[r].purity[s], WithinAbs(exact.realizations[r].purity[s], 1e-10));
      CHECK_THAT(routed.realizations[r].purity[s], WithinAbs(exact.realizations[r].purity[s], 1e-10));
    }
}

TEST_CASE("single-realization rows carry the propagated error", "[experiment]") {
  ExperimentConfig cfg;
  cfg.mode = Mode::swap_mbi;
  cfg.circuit = BaseCircuit::bell;
  cfg.n = 2;
  cfg.realizations = 1;
  cfg.shots = 100000;
  const auto res = run_sweep(cfg);
  const auto& row = res.series.rows().at(0);
  const auto& rr = res.realizations.at(0);
  CHECK(row.n_realizations == 1);
  CHECK_THAT(row.std_s2, WithinAbs(rr.std_error[0] / rr.purity[0], 1e-15));
  CHECK(std::abs(row.mean_s2 - std::log(2.0)) <= 4.0 * row.std_s2);
}

TEST_CASE("configuration parsing and validation", "[experiment][config]") {
  ExperimentConfig cfg;
  apply_config_json(nlohmann::json::parse(R"({
      "mode": "rm", "circuit": "haar", "n": 6, "layers": 2, "realizations": 5, "seed": 9,
      "shots": 5000, "n_u": 12, "estimator": "plugin", "subsystems": "0;0,1,2", "threads": 2,
      "units": "bits", "output": "x.csv"})"),
                    cfg);
  CHECK(cfg.mode == Mode::rm);
  CHECK(cfg.circuit == BaseCircuit::haar);
  CHECK(cfg.n == 6);
  CHECK(cfg.shots == 5000);
  CHECK(cfg.effective_n_u() == 12);
  CHECK(cfg.estimator == Estimator::plugin);
  CHECK(cfg.subsystems == std::vector<QubitList>{{0}, {0, 1, 2}});
  CHECK(cfg.bits);
  CHECK_NOTHROW(cfg.validate());

  ExperimentConfig defaults;
  CHECK(defaults.effective_n_u() == 10);
  defaults.n = 12;
  CHECK(defaults.effective_n_u() == 20);
  CHECK(defaults.effective_subsystems().size() == 11);
  CHECK(defaults.effective_subsystems().back() == left_block(11));

  ExperimentConfig exact_shots;
  apply_config_json(nlohmann::json::parse(R"({"shots": "exact", "subsystems": [[0], [1, 2]]})"), exact_shots);
  CHECK_FALSE(exact_shots.shots.has_value());
  CHECK(exact_shots.subsystems.size() == 2);

  ExperimentConfig bad;
  CHECK_THROWS_AS(apply_config_json(nlohmann::json::parse(R"({"n_qubits": 4})"), bad), PreconditionError);
  CHECK_THROWS_AS(apply_config_json(nlohmann::json::parse(R"({"mode": "teleport"})"), bad), PreconditionError);
  CHECK_THROWS_AS(apply_config_json(nlohmann::json::parse(R"({"n": "eight"})"), bad), PreconditionError);
  CHECK_THROWS_AS(apply_config_json(nlohmann::json::parse(R"({"shots": "many"})"), bad), PreconditionError);
  CHECK_THROWS_AS(parse_subsystems("0,a"), PreconditionError);
  CHECK(parse_subsystems("left-blocks").empty());

  SECTION("memory and mode limits") {
    ExperimentConfig big;
    big.mode = Mode::swap_mbi;
    big.n = 13;
    CHECK_THROWS_AS(big.validate(), MemoryBudgetError);
    try {
      big.validate();
    } catch (const MemoryBudgetError& e) {
      CHECK(std::string(e.what()).find("swap-mbi") != std::string::npos);
    }
    big.n = 12;
    CHECK_NOTHROW(big.validate());

    ExperimentConfig noisy;
    noisy.noise = NoiseModel{};
    CHECK_THROWS_AS(noisy.validate(), PreconditionError);
    noisy.mode = Mode::swap_mbi;
    CHECK_NOTHROW(noisy.validate());
    noisy.zne_scales = {1.0, 1.0};
    CHECK_THROWS_AS(noisy.validate(), PreconditionError);

    ExperimentConfig unordered;
    unordered.subsystems = {{0, 1}, {2}};
    CHECK_THROWS_AS(unordered.validate(), PreconditionError);
    ExperimentConfig odd_bell;
    odd_bell.circuit = BaseCircuit::bell;
    odd_bell.n = 5;
    CHECK_THROWS_AS(odd_bell.validate(), PreconditionError);
  }
}

TEST_CASE("names round-trip", "[experiment]") {
  for (Mode m : {Mode::exact, Mode::swap_mbi, Mode::rm, Mode::analytic, Mode::transport, Mode::synth_check})
    CHECK(mode_from_name(mode_name(m)) == m);
  for (BaseCircuit b : {BaseCircuit::brickwall, BaseCircuit::haar, BaseCircuit::bell})
    CHECK(base_from_name(base_name(b)) == b);
  CHECK(estimator_from_name("plugin") == Estimator::plugin);
  CHECK_THROWS_AS(estimator_from_name("magic"), PreconditionError);
}

TEST_CASE("analytic table", "[experiment][analytic]") {
  std::ostringstream os;
  write_analytic_csv(os, 8);
  const auto rows = split_csv(os.str());
  REQUIRE(rows.size() == 8);
  CHECK(os.str().rfind(std::string(kAnalyticCsvHeader) + "\n", 0) == 0);
  CHECK_THAT(std::stod(rows[4][2]), WithinAbs(page_entropy(4, 4), 1e-10));
  CHECK_THAT(std::stod(rows[4][3]), WithinAbs(std::log(257.0 / 32.0), 1e-10));
  CHECK_THROWS_AS(write_analytic_csv(os, 1), PreconditionError);
}

TEST_CASE("transport demonstration report", "[experiment][transport]") {
  const auto rep = transport_demo(3, 2, 5);
  CHECK_THAT(rep["radiation_fidelity"].get<double>(), WithinAbs(1.0, 1e-10));
  for (const auto& f : rep["partner_singlet_fidelity"]) CHECK_THAT(f.get<double>(), WithinAbs(1.0, 1e-10));
  for (const auto& row : rep["renyi2"])
    CHECK_THAT(row["radiation_S2_nats"].get<double>(), WithinAbs(row["black_hole_S2_nats"].get<double>(), 1e-10));
  CHECK(rep["u_pi_swap_deviation"].get<double>() < 1e-12);
}

TEST_CASE("synthesis self-check", "[experiment][synth]") {
  const auto ok = synth_check(100, 1e-9);
  CHECK(ok.pass);
  CHECK(ok.cnot_histogram == std::map<std::size_t, std::size_t>{{3, 100}});
  CHECK(ok.entangler_depth_histogram == std::map<std::size_t, std::size_t>{{7, 100}});
  CHECK(ok.to_json()["cnot_histogram"]["3"] == 100);

  const auto impossible = synth_check(1, 1e-20);
  CHECK_FALSE(impossible.pass);
  CHECK(impossible.max_deviation > 1e-20);
}

TEST_CASE("noisy swap sweeps undo readout errors", "[experiment][noise]") {
  ExperimentConfig cfg;
  cfg.mode = Mode::swap_mbi;
  cfg.circuit = BaseCircuit::bell;
  cfg.n = 2;
  cfg.realizations = 1;
  cfg.trajectories = 10;
  NoiseModel noise;
  noise.readout = {{0.02, 0.03}};
  cfg.noise = noise;
  cfg.validate();
  // Without gate noise every trajectory is the clean state.
  CHECK_THAT(run_sweep(cfg).realizations[0].purity[0], WithinAbs(0.5, 1e-12));

  cfg.shots = 100000;
  const auto res = run_sweep(cfg);
  const double se = res.realizations[0].std_error[0];
  CHECK(se > 0.0);
  CHECK(std::abs(res.realizations[0].purity[0] - 0.5) <= 4.0 * se);
}
