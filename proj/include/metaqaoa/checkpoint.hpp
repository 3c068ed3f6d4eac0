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
 * Optimizer checkpoints as JSON.
 *
 *   {"version", "kind": "qlstm" | "lstm", "p", "update_rule", "alpha",
 *    "vqc_layers", "vqc_params": six [layer][qubit][axis] arrays   (qlstm)
 *    "lstm": {"hidden_size", "W", "b", "Wy", "by"}                 (lstm)
 *    "seed", "meta_iter", "optimizer"?: {"kind", "step", "m", "v", ...}}
 *
 * Doubles use shortest round-trip formatting, so save/load is bit-exact.
 */
#pragma once

#include "baselines.hpp"
#include "error.hpp"
#include "recurrent.hpp"
#include "vqc.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>

namespace metaqaoa::checkpoint {

using nlohmann::json;
using recurrent::LstmWeights;
using recurrent::QlstmWeights;
using recurrent::Vec;

inline constexpr int format_version = 1;

template <typename W> struct Checkpoint {
    W weights;
    std::uint64_t seed{0};
    std::size_t meta_iter{0};
    std::optional<baselines::OptimizerState> optimizer;
};

template <typename W> [[nodiscard]] constexpr const char *kind_name() {
    if constexpr (std::is_same_v<W, QlstmWeights>) {
        return "qlstm";
    } else {
        static_assert(std::is_same_v<W, LstmWeights>);
        return "lstm";
    }
}

namespace detail {

[[nodiscard]] inline json nest_vqc(const vqc::VqcConfig &cfg,
                                   const vqc::VqcParams &params) {
    auto layers = json::array();
    for (std::size_t l = 0; l < cfg.num_layers; ++l) {
        auto qubits = json::array();
        for (std::size_t q = 0; q < cfg.num_qubits; ++q) {
            qubits.push_back({params.at(cfg, l, q, 0), params.at(cfg, l, q, 1),
                              params.at(cfg, l, q, 2)});
        }
        layers.push_back(std::move(qubits));
    }
    return layers;
}

[[nodiscard]] inline vqc::VqcParams flatten_vqc(const vqc::VqcConfig &cfg,
                                                const json &j) {
    METAQAOA_REQUIRE(j.is_array() && j.size() == cfg.num_layers, ConfigError,
                     "vqc_params: wrong number of layers");
    vqc::VqcParams out;
    out.angles.reserve(cfg.num_params());
    for (const auto &layer : j) {
        METAQAOA_REQUIRE(layer.is_array() && layer.size() == cfg.num_qubits,
                         ConfigError, "vqc_params: wrong number of qubits");
        for (const auto &q : layer) {
            METAQAOA_REQUIRE(q.is_array() && q.size() == 3, ConfigError,
                             "vqc_params: each qubit needs [rx, ry, rz]");
            for (const auto &a : q) {
                out.angles.push_back(a.get<double>());
            }
        }
    }
    return out;
}

/// Row-major rows x cols matrix as nested arrays.
[[nodiscard]] inline json nest_matrix(const Vec &flat, std::size_t rows,
                                      std::size_t cols) {
    auto out = json::array();
    for (std::size_t r = 0; r < rows; ++r) {
        out.push_back(Vec(flat.begin() + static_cast<std::ptrdiff_t>(r * cols),
                          flat.begin() +
                              static_cast<std::ptrdiff_t>((r + 1) * cols)));
    }
    return out;
}

[[nodiscard]] inline Vec flatten_matrix(const json &j, std::size_t rows,
                                        std::size_t cols, const char *name) {
    METAQAOA_REQUIRE(j.is_array() && j.size() == rows, ConfigError,
                     std::string("lstm.") + name + ": wrong number of rows");
    Vec out;
    out.reserve(rows * cols);
    for (const auto &row : j) {
        METAQAOA_REQUIRE(row.is_array() && row.size() == cols, ConfigError,
                         std::string("lstm.") + name + ": wrong row length");
        for (const auto &x : row) {
            out.push_back(x.get<double>());
        }
    }
    return out;
}

[[nodiscard]] inline Vec vector_of(const json &j, std::size_t size,
                                   const char *name) {
    auto v = j.get<Vec>();
    METAQAOA_REQUIRE(v.size() == size, ConfigError,
                     std::string(name) + ": expected length " +
                         std::to_string(size));
    return v;
}

[[nodiscard]] inline json optimizer_to_json(const baselines::OptimizerState &s) {
    return {{"kind", baselines::to_string(s.kind)},
            {"learning_rate", s.hyper.learning_rate},
            {"beta1", s.hyper.beta1},
            {"beta2", s.hyper.beta2},
            {"rho", s.hyper.rho},
            {"epsilon", s.hyper.epsilon},
            {"step", s.step_count},
            {"m", s.m},
            {"v", s.v}};
}

[[nodiscard]] inline baselines::OptimizerState
optimizer_from_json(const json &j, std::size_t dim) {
    const auto kind =
        baselines::parse_optimizer_kind(j.at("kind").get<std::string>());
    METAQAOA_REQUIRE(kind.has_value(), ConfigError,
                     "optimizer.kind: unknown optimizer");
    baselines::OptimizerState s;
    s.kind = *kind;
    s.hyper.learning_rate = j.at("learning_rate").get<double>();
    s.hyper.beta1 = j.at("beta1").get<double>();
    s.hyper.beta2 = j.at("beta2").get<double>();
    s.hyper.rho = j.at("rho").get<double>();
    s.hyper.epsilon = j.at("epsilon").get<double>();
    s.step_count = j.at("step").get<std::size_t>();
    s.m = vector_of(j.at("m"), dim, "optimizer.m");
    s.v = vector_of(j.at("v"), dim, "optimizer.v");
    return s;
}

} // namespace detail

template <typename W> [[nodiscard]] json to_json(const Checkpoint<W> &ck) {
    const W &w = ck.weights;
    json j;
    j["version"] = format_version;
    j["kind"] = kind_name<W>();
    j["p"] = w.p;
    j["update_rule"] = recurrent::to_string(w.update);
    j["alpha"] = w.alpha;
    if constexpr (std::is_same_v<W, QlstmWeights>) {
        j["vqc_layers"] = w.wide.num_layers;
        auto blocks = json::array();
        for (std::size_t k = 0; k < 6; ++k) {
            blocks.push_back(detail::nest_vqc(w.config(k), w.params[k]));
        }
        j["vqc_params"] = std::move(blocks);
    } else {
        const std::size_t H = w.hidden_size();
        j["lstm"] = {{"hidden_size", H},
                     {"W", detail::nest_matrix(w.W, 4 * H, w.row_width())},
                     {"b", w.b},
                     {"Wy", detail::nest_matrix(w.Wy, 2 * w.p, H)},
                     {"by", w.by}};
    }
    j["seed"] = ck.seed;
    j["meta_iter"] = ck.meta_iter;
    if (ck.optimizer) {
        j["optimizer"] = detail::optimizer_to_json(*ck.optimizer);
    }
    return j;
}

/// "qlstm" or "lstm" as stored in the file.
[[nodiscard]] inline std::string kind_of(const json &j) {
    try {
        return j.at("kind").get<std::string>();
    } catch (const json::exception &e) {
        throw ConfigError(std::string("checkpoint without kind: ") + e.what());
    }
}

template <typename W>
[[nodiscard]] Checkpoint<W> from_json(const json &j) {
    try {
        METAQAOA_REQUIRE(j.at("version").get<int>() == format_version,
                         ConfigError, "unsupported checkpoint version");
        METAQAOA_REQUIRE(kind_of(j) == kind_name<W>(), ConfigError,
                         "checkpoint holds a '" + kind_of(j) +
                             "' optimizer, expected '" + kind_name<W>() + "'");
        const auto p = j.at("p").get<std::size_t>();
        METAQAOA_REQUIRE(p >= 1, ConfigError, "checkpoint p must be >= 1");
        Checkpoint<W> ck;
        if constexpr (std::is_same_v<W, QlstmWeights>) {
            ck.weights = QlstmWeights::zeros(p, j.at("vqc_layers").get<std::size_t>());
            const auto &blocks = j.at("vqc_params");
            METAQAOA_REQUIRE(blocks.is_array() && blocks.size() == 6,
                             ConfigError, "vqc_params must hold six circuits");
            for (std::size_t k = 0; k < 6; ++k) {
                ck.weights.params[k] =
                    detail::flatten_vqc(ck.weights.config(k), blocks[k]);
            }
        } else {
            ck.weights = LstmWeights::zeros(p);
            auto &w = ck.weights;
            const auto &l = j.at("lstm");
            const std::size_t H = w.hidden_size();
            METAQAOA_REQUIRE(l.at("hidden_size").get<std::size_t>() == H,
                             ConfigError, "lstm.hidden_size must equal 2p");
            w.W = detail::flatten_matrix(l.at("W"), 4 * H, w.row_width(), "W");
            w.b = detail::vector_of(l.at("b"), 4 * H, "lstm.b");
            w.Wy = detail::flatten_matrix(l.at("Wy"), 2 * p, H, "Wy");
            w.by = detail::vector_of(l.at("by"), 2 * p, "lstm.by");
        }
        ck.weights.alpha = detail::vector_of(j.at("alpha"), 2 * p, "alpha");
        const auto rule =
            recurrent::parse_update_rule(j.at("update_rule").get<std::string>());
        METAQAOA_REQUIRE(rule.has_value(), ConfigError,
                         "update_rule must be 'absolute' or 'residual'");
        ck.weights.update = *rule;
        ck.weights.validate();
        ck.seed = j.at("seed").get<std::uint64_t>();
        ck.meta_iter = j.at("meta_iter").get<std::size_t>();
        if (j.contains("optimizer")) {
            ck.optimizer = detail::optimizer_from_json(
                j.at("optimizer"), ck.weights.num_parameters());
        }
        return ck;
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed checkpoint: ") + e.what());
    }
}

template <typename W>
[[nodiscard]] std::string serialize(const Checkpoint<W> &ck) {
    return to_json(ck).dump(1) + "\n";
}

template <typename W>
void save(const Checkpoint<W> &ck, const std::filesystem::path &path) {
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        METAQAOA_REQUIRE(out.good(), IoError, "cannot write " + tmp.string());
        out << serialize(ck);
        METAQAOA_REQUIRE(out.good(), IoError, "write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    METAQAOA_REQUIRE(!ec, IoError,
                     "cannot move checkpoint into place: " + path.string());
}

[[nodiscard]] inline json read_json(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    METAQAOA_REQUIRE(in.good(), ConfigError,
                     "checkpoint not found: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::exception &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

template <typename W>
[[nodiscard]] Checkpoint<W> load(const std::filesystem::path &path) {
    return from_json<W>(read_json(path));
}

} // namespace metaqaoa::checkpoint
