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

// Circuit documents:
//   {"n_qubits": n,
//    "gates": [{"kind": "rz", "targets": [0], "params": [theta], "layer": 3},
//              {"kind": "unitary1", "targets": [2], "matrix": [[re, im], ...]}],
//    "metadata": {...}}
// Raw matrices are row-major. nlohmann::json prints doubles with enough
// digits to round-trip exactly.

#ifndef PAGECURVE_CIRCUIT_JSON_HPP
#define PAGECURVE_CIRCUIT_JSON_HPP

#include <string>

#include <json.hpp>

#include "pagecurve/circuit.hpp"

namespace pagecurve {

inline nlohmann::json gate_to_json(const Gate& g) {
  nlohmann::json j;
  j["kind"] = std::string(gate_name(g.kind));
  j["targets"] = g.qubits;
  if (g.kind == GateKind::RZ) j["params"] = {g.angle};
  if (is_raw(g.kind)) {
    nlohmann::json m = nlohmann::json::array();
    for (Eigen::Index r = 0; r < g.matrix.rows(); ++r)
      for (Eigen::Index c = 0; c < g.matrix.cols(); ++c) m.push_back({g.matrix(r, c).real(), g.matrix(r, c).imag()});
    j["matrix"] = std::move(m);
  }
  if (g.layer) j["layer"] = *g.layer;
  return j;
}

inline Gate gate_from_json(const nlohmann::json& j) {
  try {
    Gate g = gates::named(gate_kind_from_name(j.at("kind").get<std::string>()), j.at("targets").get<QubitList>());
    if (g.kind == GateKind::RZ) {
      const auto& params = j.at("params");
      require(params.is_array() && params.size() == 1, "rz gate needs exactly one parameter");
      g.angle = params[0].get<double>();
    }
    if (is_raw(g.kind)) {
      const auto& m = j.at("matrix");
      const std::size_t dim = std::size_t{1} << g.qubits.size();
      require(m.is_array() && m.size() == dim * dim, "raw gate matrix has wrong number of entries");
      g.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      for (std::size_t k = 0; k < dim * dim; ++k) {
        require(m[k].is_array() && m[k].size() == 2, "matrix entries must be [re, im] pairs");
        g.matrix(static_cast<Eigen::Index>(k / dim), static_cast<Eigen::Index>(k % dim)) =
            Complex(m[k][0].get<double>(), m[k][1].get<double>());
      }
    }
    if (j.contains("layer")) g.layer = j["layer"].get<int>();
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed gate entry: ") + e.what());
  }
}

inline nlohmann::json to_json(const Circuit& c) {
  nlohmann::json j;
  j["n_qubits"] = c.n_qubits();
  j["gates"] = nlohmann::json::array();
  for (const auto& g : c.gates()) j["gates"].push_back(gate_to_json(g));
  j["metadata"] = c.metadata();
  return j;
}

inline Circuit circuit_from_json(const nlohmann::json& j) {
  try {
    Circuit c(j.at("n_qubits").get<std::size_t>());
    for (const auto& g : j.at("gates")) c.add(gate_from_json(g));
    if (j.contains("metadata")) c.metadata() = j["metadata"];
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed circuit document: ") + e.what());
  }
}

}  // namespace pagecurve

#endif  // PAGECURVE_CIRCUIT_JSON_HPP
