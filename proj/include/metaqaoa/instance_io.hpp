// Copyright 2026 The metaqaoa Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * JSON instance files:
 *   {"kind", "num_spins", "couplings": [[i, j, J], ...], "offset", "seed",
 *    "p_edge"?}
 * Doubles are written in shortest round-trip form, so save/load is
 * bit-exact.
 */
#pragma once

#include "error.hpp"
#include "problems.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace metaqaoa::problems {

[[nodiscard]] inline nlohmann::json to_json(const IsingInstance &inst) {
    nlohmann::json j;
    j["kind"] = to_string(inst.kind);
    j["num_spins"] = inst.num_spins;
    auto couplings = nlohmann::json::array();
    for (const auto &c : inst.couplings) {
        couplings.push_back({c.i, c.j, c.weight});
    }
    j["couplings"] = std::move(couplings);
    j["offset"] = inst.offset;
    j["seed"] = inst.seed;
    if (inst.p_edge) {
        j["p_edge"] = *inst.p_edge;
    }
    return j;
}

[[nodiscard]] inline IsingInstance instance_from_json(const nlohmann::json &j) {
    try {
        IsingInstance inst;
        inst.kind = parse_problem_kind(j.at("kind").get<std::string>());
        inst.num_spins = j.at("num_spins").get<std::size_t>();
        for (const auto &c : j.at("couplings")) {
            METAQAOA_REQUIRE(c.is_array() && c.size() == 3, ConfigError,
                             "coupling entries must be [i, j, J]");
            inst.couplings.push_back({c[0].get<std::size_t>(),
                                      c[1].get<std::size_t>(),
                                      c[2].get<double>()});
        }
        inst.offset = j.at("offset").get<double>();
        inst.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("p_edge")) {
            inst.p_edge = j.at("p_edge").get<double>();
        }
        inst.validate();
        return inst;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed instance JSON: ") + e.what());
    }
}

[[nodiscard]] inline std::string serialize_instance(const IsingInstance &inst) {
    return to_json(inst).dump() + "\n";
}

inline void save_instance(const IsingInstance &inst,
                          const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    METAQAOA_REQUIRE(out.good(), IoError, "cannot write " + path.string());
    out << serialize_instance(inst);
    METAQAOA_REQUIRE(out.good(), IoError, "write failed: " + path.string());
}

[[nodiscard]] inline IsingInstance
load_instance(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    METAQAOA_REQUIRE(in.good(), IoError, "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return instance_from_json(nlohmann::json::parse(buf.str()));
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

} // namespace metaqaoa::problems
