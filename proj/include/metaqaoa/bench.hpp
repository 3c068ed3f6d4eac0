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
 * Benchmark harness behind the command-line tool: instance generation,
 * meta-training, optimizer sweeps and plot-data emission.
 *
 * Every output is a pure function of the configuration and master seed.
 * Doubles in CSV files are printed with 17 significant digits.
 */
#pragma once

#include "baselines.hpp"
#include "checkpoint.hpp"
#include "error.hpp"
#include "instance_io.hpp"
#include "meta.hpp"
#include "problems.hpp"
#include "qaoa.hpp"
#include "random.hpp"
#include "recurrent.hpp"
#include "stats.hpp"
#include "trajectory.hpp"

#include <fmt/core.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

namespace metaqaoa::bench {

namespace fs = std::filesystem;
using nlohmann::json;
using problems::IsingInstance;
using recurrent::Vec;

inline constexpr int schema_version = 1;

// --------------------------------------------------------------------------
// Logging
// --------------------------------------------------------------------------

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

/// Read once from METAQAOA_LOG: quiet, info (default) or debug.
[[nodiscard]] inline LogLevel log_level() {
    static const LogLevel level = [] {
        const char *env = std::getenv("METAQAOA_LOG");
        const std::string v = env != nullptr ? env : "info";
        if (v == "quiet" || v == "0") {
            return LogLevel::Quiet;
        }
        if (v == "debug" || v == "2") {
            return LogLevel::Debug;
        }
        return LogLevel::Info;
    }();
    return level;
}

template <typename... Args>
void log(LogLevel level, fmt::format_string<Args...> f, Args &&...args) {
    if (level <= log_level()) {
        fmt::print(stderr, "[metaqaoa] {}\n",
                   fmt::format(f, std::forward<Args>(args)...));
    }
}

// --------------------------------------------------------------------------
// Configuration
// --------------------------------------------------------------------------

/// Edge probability as written by the user ("3/7" or "0.5").
struct PEdge {
    double value{3.0 / 7.0};
    std::string label{"3/7"};

    /// Label usable in file names: "3/7" -> "3-7", "0.5" -> "0p5".
    [[nodiscard]] std::string file_label() const {
        std::string out = label;
        std::replace(out.begin(), out.end(), '/', '-');
        std::replace(out.begin(), out.end(), '.', 'p');
        return out;
    }

    friend bool operator==(const PEdge &a, const PEdge &b) {
        return a.label == b.label;
    }
};

namespace detail {

[[nodiscard]] inline double parse_double(std::string_view s,
                                         std::string_view what) {
    std::string buf(s);
    char *end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    METAQAOA_REQUIRE(!buf.empty() && end == buf.c_str() + buf.size(),
                     ConfigError,
                     fmt::format("{}: '{}' is not a number", what, s));
    return v;
}

[[nodiscard]] inline std::size_t parse_size(std::string_view s,
                                            std::string_view what) {
    std::size_t v = 0;
    const auto *first = s.data();
    const auto *last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    METAQAOA_REQUIRE(ec == std::errc{} && ptr == last && !s.empty(),
                     ConfigError,
                     fmt::format("{}: '{}' is not a non-negative integer", what, s));
    return v;
}

[[nodiscard]] inline std::vector<std::string> split(std::string_view s,
                                                    char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto pos = s.find(sep, start);
        const auto end = pos == std::string_view::npos ? s.size() : pos;
        std::string item(s.substr(start, end - start));
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) {
            out.push_back(item);
        }
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

[[nodiscard]] inline std::string lower(std::string s) {
    for (auto &c : s) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

} // namespace detail

/// Parses "a/b" or a decimal; must lie in (0, 1].
[[nodiscard]] inline PEdge parse_p_edge(std::string_view text) {
    PEdge pe;
    pe.label = std::string(text);
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        const double num = detail::parse_double(text.substr(0, slash), "p_edge");
        const double den = detail::parse_double(text.substr(slash + 1), "p_edge");
        METAQAOA_REQUIRE(den != 0.0, ConfigError,
                         "p_edge: zero denominator in '" + pe.label + "'");
        pe.value = num / den;
    } else {
        pe.value = detail::parse_double(text, "p_edge");
    }
    METAQAOA_REQUIRE(pe.value > 0.0 && pe.value <= 1.0, ConfigError,
                     "p_edge '" + pe.label +
                         "' must lie in (0, 1]; p_edge = 0 gives edgeless graphs");
    return pe;
}

/// "8,10,12", "8-16" or a mix such as "8-10,14".
[[nodiscard]] inline std::vector<std::size_t> parse_sizes(std::string_view text) {
    std::vector<std::size_t> out;
    for (const auto &item : detail::split(text, ',')) {
        const auto dash = item.find('-');
        if (dash == std::string::npos) {
            out.push_back(detail::parse_size(item, "sizes"));
            continue;
        }
        const auto lo = detail::parse_size(item.substr(0, dash), "sizes");
        const auto hi = detail::parse_size(item.substr(dash + 1), "sizes");
        METAQAOA_REQUIRE(lo <= hi, ConfigError,
                         "sizes: empty range '" + item + "'");
        for (std::size_t n = lo; n <= hi; ++n) {
            out.push_back(n);
        }
    }
    return out;
}

inline const std::vector<std::string> &known_optimizers() {
    static const std::vector<std::string> names{
        "qlstm", "lstm", "rmsprop", "sgd", "adam", "adagrad", "neldermead"};
    return names;
}

[[nodiscard]] inline bool is_learned(std::string_view name) {
    return name == "qlstm" || name == "lstm";
}

[[nodiscard]] inline std::string normalize_optimizer(std::string_view name) {
    auto n = detail::lower(std::string(name));
    n.erase(std::remove(n.begin(), n.end(), '-'), n.end());
    n.erase(std::remove(n.begin(), n.end(), '_'), n.end());
    const auto &known = known_optimizers();
    METAQAOA_REQUIRE(std::find(known.begin(), known.end(), n) != known.end(),
                     ConfigError,
                     "unknown optimizer '" + std::string(name) +
                         "' (expected qlstm, lstm, rmsprop, sgd, adam, "
                         "adagrad or neldermead)");
    return n;
}

[[nodiscard]] inline baselines::OptimizerKind
classical_kind(std::string_view name) {
    const auto k = baselines::parse_optimizer_kind(name);
    METAQAOA_REQUIRE(k.has_value(), ConfigError,
                     "not a classical optimizer: " + std::string(name));
    return *k;
}

struct TrainSettings {
    std::string optimizer{"qlstm"};
    std::size_t meta_iterations{200};
    std::size_t horizon{5};
    std::size_t batch_size{4};
    double meta_lr{0.01};
    std::size_t train_nodes{7};
    /// 0 draws fresh instances every meta-iteration.
    std::size_t train_pool{0};
    std::size_t vqc_layers{2};
    double alpha0{recurrent::default_alpha};
    recurrent::UpdateRule update{recurrent::UpdateRule::Absolute};
    /// Weight initialization seed; derived from master_seed when absent.
    std::optional<std::uint64_t> init_seed;
    PEdge p_edge{};
    std::size_t checkpoint_every{50};
    /// Continue from an existing checkpoint instead of starting over.
    bool resume{false};
};

struct BenchConfig {
    problems::ProblemKind family{problems::ProblemKind::MaxCut};
    std::vector<PEdge> p_edges{parse_p_edge("2/7"), parse_p_edge("3/7"),
                               parse_p_edge("4/7"), parse_p_edge("5/7"),
                               parse_p_edge("6/7")};
    problems::SkDistribution sk_dist{problems::SkDistribution::PlusMinusOne};
    std::vector<std::size_t> sizes{8, 9, 10, 11, 12, 13, 14, 15, 16};
    std::size_t instances_per_cell{20};
    std::size_t p{1};
    std::size_t eval_T{50};
    std::size_t report_iter{3};
    std::vector<std::string> optimizers{"qlstm", "lstm", "rmsprop",
                                        "sgd",   "adam", "adagrad"};
    std::uint64_t master_seed{0};
    std::vector<fs::path> checkpoints;
    fs::path out{"out"};
    std::size_t workers{1};
    qaoa::GradientMethod gradient{qaoa::GradientMethod::Adjoint};
    std::map<std::string, baselines::Hyperparams> hyper{
        {"sgd", baselines::Hyperparams::defaults(baselines::OptimizerKind::SGD)},
        {"adam", baselines::Hyperparams::defaults(baselines::OptimizerKind::Adam)},
        {"rmsprop",
         baselines::Hyperparams::defaults(baselines::OptimizerKind::RMSProp)},
        {"adagrad",
         baselines::Hyperparams::defaults(baselines::OptimizerKind::Adagrad)},
    };
    TrainSettings train;

    [[nodiscard]] std::string family_name() const {
        return detail::lower(problems::to_string(family));
    }

    void validate() const {
        METAQAOA_REQUIRE(!sizes.empty(), ConfigError, "sizes must not be empty");
        METAQAOA_REQUIRE(!optimizers.empty(), ConfigError,
                         "optimizer list must not be empty");
        METAQAOA_REQUIRE(family != problems::ProblemKind::MaxCut ||
                             !p_edges.empty(),
                         ConfigError, "p_edge list must not be empty");
        for (const auto n : sizes) {
            METAQAOA_REQUIRE(n >= 2, ConfigError,
                             "problem sizes must be >= 2");
            METAQAOA_REQUIRE(n <= sim::max_qubits, ConfigError,
                             fmt::format("size {} exceeds simulator capacity {}",
                                         n, sim::max_qubits));
        }
        for (const auto &pe : p_edges) {
            METAQAOA_REQUIRE(pe.value > 0.0 && pe.value <= 1.0, ConfigError,
                             "p_edge '" + pe.label + "' must lie in (0, 1]");
        }
        METAQAOA_REQUIRE(instances_per_cell >= 1, ConfigError,
                         "instances_per_cell must be >= 1");
        METAQAOA_REQUIRE(p >= 1, ConfigError, "QAOA depth p must be >= 1");
        METAQAOA_REQUIRE(eval_T >= 1, ConfigError, "eval_T must be >= 1");
        METAQAOA_REQUIRE(report_iter <= eval_T, ConfigError,
                         "report_iter must not exceed eval_T");
        METAQAOA_REQUIRE(workers >= 1, ConfigError, "workers must be >= 1");
        std::set<std::string> seen;
        for (const auto &o : optimizers) {
            METAQAOA_REQUIRE(normalize_optimizer(o) == o, ConfigError,
                             "optimizer names must be normalized: " + o);
            METAQAOA_REQUIRE(seen.insert(o).second, ConfigError,
                             "duplicate optimizer: " + o);
        }
        METAQAOA_REQUIRE(is_learned(train.optimizer), ConfigError,
                         "train.optimizer must be qlstm or lstm");
        METAQAOA_REQUIRE(train.checkpoint_every >= 1, ConfigError,
                         "train.checkpoint_every must be >= 1");
        meta_config().validate();
    }

    [[nodiscard]] problems::InstanceFamily family_for(const PEdge &pe) const {
        return {family, pe.value, sk_dist};
    }

    [[nodiscard]] meta::MetaConfig meta_config() const {
        meta::MetaConfig m;
        m.p = p;
        m.horizon = train.horizon;
        m.meta_iterations = train.meta_iterations;
        m.batch_size = train.batch_size;
        m.meta_lr = train.meta_lr;
        m.train_nodes = train.train_nodes;
        m.seed = master_seed;
        m.family = family_for(train.p_edge);
        m.train_pool = train.train_pool;
        m.vqc_layers = train.vqc_layers;
        m.alpha0 = train.alpha0;
        return m;
    }

    [[nodiscard]] std::uint64_t init_seed(std::string_view kind) const {
        return train.init_seed.value_or(
            derive_seed({master_seed, hash_label("init"), hash_label(kind)}));
    }
};

namespace detail {

[[nodiscard]] inline std::string gradient_name(qaoa::GradientMethod g) {
    return g == qaoa::GradientMethod::Adjoint ? "adjoint" : "parameter-shift";
}

[[nodiscard]] inline qaoa::GradientMethod parse_gradient(const std::string &s) {
    if (s == "adjoint") {
        return qaoa::GradientMethod::Adjoint;
    }
    METAQAOA_REQUIRE(s == "parameter-shift", ConfigError,
                     "gradient must be 'adjoint' or 'parameter-shift'");
    return qaoa::GradientMethod::ParameterShift;
}

[[nodiscard]] inline std::string sk_dist_name(problems::SkDistribution d) {
    return d == problems::SkDistribution::PlusMinusOne ? "pm1" : "normal";
}

[[nodiscard]] inline problems::SkDistribution
parse_sk_dist(const std::string &s) {
    if (s == "pm1") {
        return problems::SkDistribution::PlusMinusOne;
    }
    METAQAOA_REQUIRE(s == "normal", ConfigError,
                     "sk_distribution must be 'pm1' or 'normal'");
    return problems::SkDistribution::StandardNormal;
}

[[nodiscard]] inline PEdge p_edge_from_json(const json &j) {
    if (j.is_string()) {
        return parse_p_edge(j.get<std::string>());
    }
    METAQAOA_REQUIRE(j.is_number(), ConfigError,
                     "p_edge entries must be strings like \"3/7\" or numbers");
    return parse_p_edge(fmt::format("{}", j.get<double>()));
}

[[nodiscard]] inline json hyper_to_json(const baselines::Hyperparams &h) {
    return {{"learning_rate", h.learning_rate},
            {"beta1", h.beta1},
            {"beta2", h.beta2},
            {"rho", h.rho},
            {"epsilon", h.epsilon}};
}

inline void check_keys(const json &j, std::initializer_list<const char *> keys,
                       std::string_view where) {
    METAQAOA_REQUIRE(j.is_object(), ConfigError,
                     std::string(where) + " must be a JSON object");
    for (const auto &item : j.items()) {
        const bool ok = std::any_of(keys.begin(), keys.end(), [&](const char *k) {
            return item.key() == k;
        });
        METAQAOA_REQUIRE(ok, ConfigError,
                         fmt::format("unknown key '{}' in {}", item.key(), where));
    }
}

inline void train_from_json(TrainSettings &t, const json &j) {
    check_keys(j,
               {"optimizer", "meta_iterations", "horizon", "batch_size",
                "meta_lr", "train_nodes", "train_pool", "vqc_layers", "alpha0",
                "update_rule", "init_seed", "p_edge", "checkpoint_every",
                "resume"},
               "train");
    if (j.contains("optimizer")) {
        t.optimizer = normalize_optimizer(j["optimizer"].get<std::string>());
    }
    t.meta_iterations = j.value("meta_iterations", t.meta_iterations);
    t.horizon = j.value("horizon", t.horizon);
    t.batch_size = j.value("batch_size", t.batch_size);
    t.meta_lr = j.value("meta_lr", t.meta_lr);
    t.train_nodes = j.value("train_nodes", t.train_nodes);
    t.train_pool = j.value("train_pool", t.train_pool);
    t.vqc_layers = j.value("vqc_layers", t.vqc_layers);
    t.alpha0 = j.value("alpha0", t.alpha0);
    if (j.contains("update_rule")) {
        const auto r =
            recurrent::parse_update_rule(j["update_rule"].get<std::string>());
        METAQAOA_REQUIRE(r.has_value(), ConfigError,
                         "train.update_rule must be 'absolute' or 'residual'");
        t.update = *r;
    }
    if (j.contains("init_seed")) {
        t.init_seed = j["init_seed"].get<std::uint64_t>();
    }
    if (j.contains("p_edge")) {
        t.p_edge = p_edge_from_json(j["p_edge"]);
    }
    t.checkpoint_every = j.value("checkpoint_every", t.checkpoint_every);
    t.resume = j.value("resume", t.resume);
}

} // namespace detail

/// Applies the keys present in `j` on top of `cfg`. Unknown keys are errors.
inline void apply_json(BenchConfig &cfg, const json &j) {
    try {
        detail::check_keys(
            j,
            {"family", "p_edges", "sk_distribution", "sizes",
             "instances_per_cell", "p", "eval_T", "report_iter", "optimizers",
             "master_seed", "checkpoints", "out", "workers", "gradient",
             "hyperparameters", "train"},
            "config");
        if (j.contains("family")) {
            cfg.family = problems::parse_problem_kind(j["family"].get<std::string>());
        }
        if (j.contains("p_edges")) {
            cfg.p_edges.clear();
            for (const auto &pe : j["p_edges"]) {
                cfg.p_edges.push_back(detail::p_edge_from_json(pe));
            }
        }
        if (j.contains("sk_distribution")) {
            cfg.sk_dist = detail::parse_sk_dist(j["sk_distribution"].get<std::string>());
        }
        if (j.contains("sizes")) {
            cfg.sizes = j["sizes"].get<std::vector<std::size_t>>();
        }
        cfg.instances_per_cell = j.value("instances_per_cell", cfg.instances_per_cell);
        cfg.p = j.value("p", cfg.p);
        cfg.eval_T = j.value("eval_T", cfg.eval_T);
        cfg.report_iter = j.value("report_iter", cfg.report_iter);
        if (j.contains("optimizers")) {
            cfg.optimizers.clear();
            for (const auto &o : j["optimizers"]) {
                cfg.optimizers.push_back(normalize_optimizer(o.get<std::string>()));
            }
        }
        cfg.master_seed = j.value("master_seed", cfg.master_seed);
        if (j.contains("checkpoints")) {
            cfg.checkpoints.clear();
            for (const auto &c : j["checkpoints"]) {
                cfg.checkpoints.emplace_back(c.get<std::string>());
            }
        }
        if (j.contains("out")) {
            cfg.out = j["out"].get<std::string>();
        }
        cfg.workers = j.value("workers", cfg.workers);
        if (j.contains("gradient")) {
            cfg.gradient = detail::parse_gradient(j["gradient"].get<std::string>());
        }
        if (j.contains("hyperparameters")) {
            for (const auto &item : j["hyperparameters"].items()) {
                const auto name = normalize_optimizer(item.key());
                METAQAOA_REQUIRE(!is_learned(name) && name != "neldermead",
                                 ConfigError,
                                 "hyperparameters apply to first-order "
                                 "baselines only, not " + name);
                const auto &h = item.value();
                detail::check_keys(h,
                                   {"learning_rate", "beta1", "beta2", "rho",
                                    "epsilon"},
                                   "hyperparameters." + name);
                auto &dst = cfg.hyper[name];
                dst.learning_rate = h.value("learning_rate", dst.learning_rate);
                dst.beta1 = h.value("beta1", dst.beta1);
                dst.beta2 = h.value("beta2", dst.beta2);
                dst.rho = h.value("rho", dst.rho);
                dst.epsilon = h.value("epsilon", dst.epsilon);
            }
        }
        if (j.contains("train")) {
            detail::train_from_json(cfg.train, j["train"]);
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const DomainError &e) {
        throw ConfigError(e.what());
    }
}

[[nodiscard]] inline BenchConfig load_config(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    METAQAOA_REQUIRE(in.good(), ConfigError,
                     "cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    BenchConfig cfg;
    try {
        apply_json(cfg, json::parse(buf.str()));
    } catch (const json::exception &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return cfg;
}

/// Configuration echo stored in summary.json. Paths and worker count are
/// left out so that the summary depends only on seeds and settings.
[[nodiscard]] inline json config_to_json(const BenchConfig &cfg) {
    json j;
    j["family"] = cfg.family_name();
    auto pes = json::array();
    for (const auto &pe : cfg.p_edges) {
        pes.push_back(pe.label);
    }
    j["p_edges"] = pes;
    j["sk_distribution"] = detail::sk_dist_name(cfg.sk_dist);
    j["sizes"] = cfg.sizes;
    j["instances_per_cell"] = cfg.instances_per_cell;
    j["p"] = cfg.p;
    j["eval_T"] = cfg.eval_T;
    j["report_iter"] = cfg.report_iter;
    j["optimizers"] = cfg.optimizers;
    j["master_seed"] = cfg.master_seed;
    j["gradient"] = detail::gradient_name(cfg.gradient);
    json hp = json::object();
    for (const auto &[name, h] : cfg.hyper) {
        hp[name] = detail::hyper_to_json(h);
    }
    j["hyperparameters"] = hp;
    return j;
}

// --------------------------------------------------------------------------
// Instances
// --------------------------------------------------------------------------

/// One (family, p_edge) column of the benchmark grid.
struct Cell {
    std::optional<PEdge> p_edge;

    [[nodiscard]] std::string label() const {
        return p_edge ? p_edge->label : std::string{};
    }
};

[[nodiscard]] inline std::vector<Cell> cells(const BenchConfig &cfg) {
    if (cfg.family == problems::ProblemKind::SK) {
        return {Cell{}};
    }
    std::vector<Cell> out;
    for (const auto &pe : cfg.p_edges) {
        out.push_back(Cell{pe});
    }
    return out;
}

[[nodiscard]] inline std::uint64_t instance_seed(const BenchConfig &cfg,
                                                 const Cell &cell,
                                                 std::size_t n,
                                                 std::size_t index) {
    return derive_seed({cfg.master_seed, hash_label(cfg.family_name()), n,
                        index, hash_label(cell.label())});
}

[[nodiscard]] inline IsingInstance make_instance(const BenchConfig &cfg,
                                                 const Cell &cell,
                                                 std::size_t n,
                                                 std::size_t index) {
    const auto family = cfg.family_for(cell.p_edge.value_or(PEdge{}));
    return problems::generate_instance(family, n,
                                       instance_seed(cfg, cell, n, index));
}

[[nodiscard]] inline fs::path instance_path(const BenchConfig &cfg,
                                            const Cell &cell, std::size_t n,
                                            std::size_t index) {
    std::string name = cfg.family_name();
    if (cell.p_edge) {
        name += "_p" + cell.p_edge->file_label();
    }
    name += fmt::format("_n{:02d}_i{:03d}.json", n, index);
    return cfg.out / "instances" / name;
}

inline void ensure_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    METAQAOA_REQUIRE(!ec, IoError,
                     "cannot create directory " + dir.string() + ": " +
                         ec.message());
}

/// Writes every grid instance as JSON; returns the number of files.
inline std::size_t cmd_gen(const BenchConfig &cfg) {
    cfg.validate();
    ensure_dir(cfg.out / "instances");
    std::size_t count = 0;
    for (const auto &cell : cells(cfg)) {
        for (const auto n : cfg.sizes) {
            for (std::size_t k = 0; k < cfg.instances_per_cell; ++k) {
                problems::save_instance(make_instance(cfg, cell, n, k),
                                        instance_path(cfg, cell, n, k));
                ++count;
            }
        }
    }
    log(LogLevel::Info, "gen: wrote {} instances to {}", count,
        (cfg.out / "instances").string());
    return count;
}

// --------------------------------------------------------------------------
// Training
// --------------------------------------------------------------------------

[[nodiscard]] inline fs::path default_checkpoint(const BenchConfig &cfg,
                                                 std::string_view kind) {
    return cfg.out / fmt::format("{}.ckpt.json", kind);
}

[[nodiscard]] inline fs::path train_checkpoint_path(const BenchConfig &cfg) {
    return cfg.checkpoints.empty() ? default_checkpoint(cfg, cfg.train.optimizer)
                                   : cfg.checkpoints.front();
}

[[nodiscard]] inline fs::path train_log_path(const BenchConfig &cfg) {
    return cfg.out / fmt::format("{}_train_log.csv", cfg.train.optimizer);
}

struct TrainOutcome {
    fs::path checkpoint;
    fs::path log;
    std::size_t meta_iter{0};
    std::vector<meta::MetaLogEntry> entries;
};

namespace detail {

template <typename W> [[nodiscard]] W initial_weights(const BenchConfig &cfg) {
    const auto seed = cfg.init_seed(checkpoint::kind_name<W>());
    W w = [&] {
        if constexpr (std::is_same_v<W, recurrent::QlstmWeights>) {
            return W::init(cfg.p, seed, cfg.train.vqc_layers, cfg.train.alpha0);
        } else {
            return W::init(cfg.p, seed, cfg.train.alpha0);
        }
    }();
    w.update = cfg.train.update;
    return w;
}

template <typename W> TrainOutcome train_impl(const BenchConfig &cfg) {
    const auto mcfg = cfg.meta_config();
    const auto ck_path = train_checkpoint_path(cfg);
    const auto log_path = train_log_path(cfg);
    if (ck_path.has_parent_path()) {
        ensure_dir(ck_path.parent_path());
    }
    ensure_dir(cfg.out);

    meta::MetaTrainResult<W> start;
    const bool resuming = cfg.train.resume && fs::exists(ck_path);
    std::uint64_t seed = cfg.init_seed(checkpoint::kind_name<W>());
    if (resuming) {
        auto ck = checkpoint::load<W>(ck_path);
        METAQAOA_REQUIRE(ck.weights.depth() == cfg.p, ConfigError,
                         "checkpoint " + ck_path.string() +
                             " was trained for a different p");
        seed = ck.seed;
        start.weights = std::move(ck.weights);
        start.meta_iter = ck.meta_iter;
        if (ck.optimizer) {
            start.optimizer = std::move(*ck.optimizer);
        }
        log(LogLevel::Info, "train: resuming {} at meta-iteration {}",
            ck_path.string(), start.meta_iter);
    } else {
        start.weights = initial_weights<W>(cfg);
    }

    std::ofstream log_out(log_path, resuming ? std::ios::app
                                             : std::ios::trunc);
    METAQAOA_REQUIRE(log_out.good(), IoError, "cannot write " + log_path.string());
    if (!resuming || fs::file_size(log_path) == 0) {
        log_out << "meta_iter,mean_meta_loss,wallclock_s\n";
    }

    auto save = [&](const meta::MetaTrainResult<W> &r) {
        checkpoint::save(checkpoint::Checkpoint<W>{r.weights, seed, r.meta_iter,
                                                   r.optimizer},
                         ck_path);
    };
    meta::TrainHooks<W> hooks;
    hooks.on_iteration = [&](const meta::MetaTrainResult<W> &r) {
        const auto &e = r.log.back();
        fmt::print(log_out, "{},{:.17g},{:.17g}\n", e.meta_iter,
                   e.mean_meta_loss, e.wallclock_s);
        log_out.flush();
        if (r.meta_iter % cfg.train.checkpoint_every == 0) {
            save(r);
        }
        log(LogLevel::Debug, "train: iter {} loss {:.6f}", e.meta_iter,
            e.mean_meta_loss);
    };
    auto res = meta::meta_train(mcfg, std::move(start), hooks);
    if (res.optimizer.v.empty()) {
        res.optimizer = meta::meta_optimizer(mcfg, res.weights);
    }
    save(res);
    METAQAOA_REQUIRE(log_out.good(), IoError, "write failed: " + log_path.string());
    log(LogLevel::Info, "train: {} at meta-iteration {} -> {}",
        checkpoint::kind_name<W>(), res.meta_iter, ck_path.string());
    return {ck_path, log_path, res.meta_iter, res.log};
}

} // namespace detail

/// Meta-trains the configured learned optimizer; writes checkpoint and log.
inline TrainOutcome cmd_train(const BenchConfig &cfg) {
    cfg.validate();
    if (cfg.train.optimizer == "qlstm") {
        return detail::train_impl<recurrent::QlstmWeights>(cfg);
    }
    return detail::train_impl<recurrent::LstmWeights>(cfg);
}

// --------------------------------------------------------------------------
// Benchmark
// --------------------------------------------------------------------------

/// One row of records.csv.
struct RunRecord {
    std::size_t run_id{0};
    std::string optimizer;
    std::string family;
    std::string p_edge;
    std::size_t n{0};
    std::uint64_t instance_seed{0};
    std::size_t iter{0};
    double raw_cost{0.0};
    double normalized_cost{0.0};
    double approx_ratio{0.0};
};

struct RunResult {
    std::size_t run_id{0};
    std::string optimizer;
    std::string p_edge;
    std::size_t n{0};
    std::uint64_t instance_seed{0};
    Trajectory traj;
    Vec ratios;
};

/// Learned optimizer weights resolved from checkpoint files.
struct LearnedSet {
    std::optional<recurrent::QlstmWeights> qlstm;
    std::optional<recurrent::LstmWeights> lstm;
};

namespace detail {

template <typename W>
void load_into(std::optional<W> &slot, const fs::path &path, std::size_t p) {
    auto ck = checkpoint::load<W>(path);
    METAQAOA_REQUIRE(ck.weights.depth() == p, ConfigError,
                     fmt::format("checkpoint {} has p = {}, benchmark uses p = {}",
                                 path.string(), ck.weights.depth(), p));
    slot = std::move(ck.weights);
}

} // namespace detail

/// Explicit checkpoint paths first, then <out>/<kind>.ckpt.json.
[[nodiscard]] inline LearnedSet resolve_learned(const BenchConfig &cfg) {
    std::map<std::string, fs::path> by_kind;
    for (const auto &path : cfg.checkpoints) {
        METAQAOA_REQUIRE(fs::exists(path), ConfigError,
                         "checkpoint not found: " + path.string());
        by_kind.emplace(checkpoint::kind_of(checkpoint::read_json(path)), path);
    }
    LearnedSet set;
    for (const auto &name : cfg.optimizers) {
        if (!is_learned(name)) {
            continue;
        }
        auto it = by_kind.find(name);
        const fs::path path =
            it != by_kind.end() ? it->second : default_checkpoint(cfg, name);
        METAQAOA_REQUIRE(fs::exists(path), ConfigError,
                         "missing checkpoint for " + name + ": " + path.string() +
                             " (run 'train' first or pass --checkpoint)");
        if (name == "qlstm") {
            detail::load_into(set.qlstm, path, cfg.p);
        } else {
            detail::load_into(set.lstm, path, cfg.p);
        }
    }
    return set;
}

/// Trajectory of one optimizer on one instance.
[[nodiscard]] inline Trajectory run_one(const BenchConfig &cfg,
                                        const LearnedSet &learned,
                                        const std::string &name,
                                        const IsingInstance &inst,
                                        std::uint64_t seed) {
    if (name == "qlstm") {
        return meta::unroll_episode(*learned.qlstm, inst, cfg.eval_T);
    }
    if (name == "lstm") {
        return meta::unroll_episode(*learned.lstm, inst, cfg.eval_T);
    }
    const auto kind = classical_kind(name);
    baselines::RunOptions opts;
    opts.depth = cfg.p;
    opts.iterations = cfg.eval_T;
    opts.seed = seed;
    opts.gradient = cfg.gradient;
    const auto it = cfg.hyper.find(name);
    const auto hyper =
        it != cfg.hyper.end() ? it->second : baselines::Hyperparams::defaults(kind);
    return baselines::run_optimizer(inst, kind, hyper, opts);
}

/**
 * @brief Runs every (optimizer, instance) pair of the grid.
 *
 * Instances are the work units of a pool of `cfg.workers` threads; results
 * land in pre-assigned slots, so the output order is independent of
 * scheduling. run_id enumerates (cell, n, index, optimizer) in config order.
 */
[[nodiscard]] inline std::vector<RunResult>
run_benchmark(const BenchConfig &cfg, const LearnedSet &learned) {
    struct Job {
        Cell cell;
        std::size_t n;
        std::size_t index;
    };
    std::vector<Job> jobs;
    for (const auto &cell : cells(cfg)) {
        for (const auto n : cfg.sizes) {
            for (std::size_t k = 0; k < cfg.instances_per_cell; ++k) {
                jobs.push_back({cell, n, k});
            }
        }
    }
    const std::size_t n_opt = cfg.optimizers.size();
    std::vector<RunResult> results(jobs.size() * n_opt);
    std::vector<std::exception_ptr> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) {
                return;
            }
            try {
                const auto &job = jobs[j];
                const auto inst = make_instance(cfg, job.cell, job.n, job.index);
                const auto oracle = problems::brute_force_optimum(inst);
                for (std::size_t o = 0; o < n_opt; ++o) {
                    auto &r = results[j * n_opt + o];
                    r.run_id = j * n_opt + o;
                    r.optimizer = cfg.optimizers[o];
                    r.p_edge = job.cell.label();
                    r.n = job.n;
                    r.instance_seed = inst.seed;
                    r.traj = run_one(cfg, learned, r.optimizer, inst,
                                     derive_seed({inst.seed, hash_label(r.optimizer)}));
                    r.ratios = meta::ratio_trajectory(r.traj, inst, oracle);
                }
            } catch (...) {
                errors[j] = std::current_exception();
            }
            const auto d = done.fetch_add(1) + 1;
            if (d % 20 == 0 || d == jobs.size()) {
                log(LogLevel::Debug, "bench: {}/{} instances", d, jobs.size());
            }
        }
    };
    const std::size_t n_threads = std::min(cfg.workers, std::max<std::size_t>(jobs.size(), 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return results;
}

[[nodiscard]] inline std::vector<RunRecord>
to_records(const BenchConfig &cfg, const std::vector<RunResult> &runs) {
    std::vector<RunRecord> out;
    for (const auto &r : runs) {
        for (std::size_t t = 0; t < r.traj.size(); ++t) {
            out.push_back({r.run_id, r.optimizer, cfg.family_name(), r.p_edge,
                           r.n, r.instance_seed, t, r.traj.costs[t],
                           r.traj.normalized_costs[t], r.ratios[t]});
        }
    }
    return out;
}

inline constexpr std::string_view records_header =
    "run_id,optimizer,family,n,p_edge,instance_seed,iter,raw_cost,"
    "normalized_cost,approx_ratio";

[[nodiscard]] inline std::string format_records(const std::vector<RunRecord> &rows) {
    std::string out(records_header);
    out += '\n';
    for (const auto &r : rows) {
        out += fmt::format("{},{},{},{},{},{},{},{:.17g},{:.17g},{:.17g}\n",
                           r.run_id, r.optimizer, r.family, r.n, r.p_edge,
                           r.instance_seed, r.iter, r.raw_cost,
                           r.normalized_cost, r.approx_ratio);
    }
    return out;
}

/// run_id, iter, gamma_1..gamma_p, beta_1..beta_p.
[[nodiscard]] inline std::string format_params(const std::vector<RunResult> &runs,
                                               std::size_t p) {
    std::string out = "run_id,iter";
    for (std::size_t l = 1; l <= p; ++l) {
        out += fmt::format(",gamma_{}", l);
    }
    for (std::size_t l = 1; l <= p; ++l) {
        out += fmt::format(",beta_{}", l);
    }
    out += '\n';
    for (const auto &r : runs) {
        for (std::size_t t = 0; t < r.traj.size(); ++t) {
            out += fmt::format("{},{}", r.run_id, t);
            for (const double x : r.traj.thetas[t]) {
                out += fmt::format(",{:.17g}", x);
            }
            out += '\n';
        }
    }
    return out;
}

inline void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    METAQAOA_REQUIRE(out.good(), IoError, "cannot write " + path.string());
    out << text;
    METAQAOA_REQUIRE(out.good(), IoError, "write failed: " + path.string());
}

[[nodiscard]] inline std::string read_text(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    METAQAOA_REQUIRE(in.good(), IoError, "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Static reference values of the recursive-QAOA column, echoed verbatim.
[[nodiscard]] inline json reference_values() {
    json by_p = json::object();
    const std::vector<std::tuple<const char *, double, double>> rows{
        {"2/7", 0.92, 0.04}, {"3/7", 0.90, 0.05}, {"4/7", 0.89, 0.07},
        {"5/7", 0.87, 0.06}, {"6/7", 0.86, 0.07}};
    for (const auto &[label, mean, std] : rows) {
        by_p[label] = {{"mean", mean}, {"std", std}};
    }
    json by_n = json::object();
    const std::vector<double> sk{0.92, 0.89, 0.93, 0.87, 0.92,
                                 0.86, 0.92, 0.83, 0.84};
    for (std::size_t k = 0; k < sk.size(); ++k) {
        by_n[std::to_string(8 + k)] = {{"mean", sk[k]}};
    }
    return {{"method", "R-QAOA"},
            {"source", "published-citation"},
            {"computed", false},
            {"maxcut_by_p_edge", by_p},
            {"sk_by_n", by_n}};
}

namespace detail {

[[nodiscard]] inline json summary_json(const Summary &s) {
    return {{"mean", s.mean}, {"std", s.std}, {"count", s.count}};
}

/// Ratios at `iter` grouped by key.
template <typename Key, typename KeyFn>
[[nodiscard]] std::map<Key, Vec> group_ratios(const std::vector<RunResult> &runs,
                                              std::size_t iter, KeyFn key) {
    std::map<Key, Vec> out;
    for (const auto &r : runs) {
        out[key(r)].push_back(r.ratios.at(iter));
    }
    return out;
}

} // namespace detail

/**
 * @brief summary.json: per-cell statistics of the approximation ratio at
 * report_iter and at the final iteration, plus per-p_edge and per-size
 * aggregates.
 */
[[nodiscard]] inline json build_summary(const BenchConfig &cfg,
                                        const std::vector<RunResult> &runs) {
    json j;
    j["schema_version"] = schema_version;
    j["config"] = config_to_json(cfg);
    j["hyperparameters"] = j["config"]["hyperparameters"];
    j["report_iter"] = cfg.report_iter;
    using CellKey = std::tuple<std::string, std::string, std::size_t>;
    std::map<CellKey, std::size_t> order;
    auto at_report = detail::group_ratios<CellKey>(runs, cfg.report_iter, [](const RunResult &r) {
        return CellKey{r.optimizer, r.p_edge, r.n};
    });
    auto at_final = detail::group_ratios<CellKey>(runs, cfg.eval_T, [](const RunResult &r) {
        return CellKey{r.optimizer, r.p_edge, r.n};
    });
    auto cells_json = json::array();
    for (const auto &o : cfg.optimizers) {
        for (const auto &cell : cells(cfg)) {
            for (const auto n : cfg.sizes) {
                const CellKey key{o, cell.label(), n};
                auto row = detail::summary_json(summarize(at_report[key]));
                row["optimizer"] = o;
                row["family"] = cfg.family_name();
                row["p_edge"] = cell.label();
                row["n"] = n;
                row["final"] = detail::summary_json(summarize(at_final[key]));
                cells_json.push_back(row);
            }
        }
    }
    j["cells"] = cells_json;

    using PKey = std::pair<std::string, std::string>;
    auto by_p = detail::group_ratios<PKey>(runs, cfg.report_iter, [](const RunResult &r) {
        return PKey{r.optimizer, r.p_edge};
    });
    using NKey = std::pair<std::string, std::size_t>;
    auto by_n = detail::group_ratios<NKey>(runs, cfg.report_iter, [](const RunResult &r) {
        return NKey{r.optimizer, r.n};
    });
    auto table_p = json::array();
    auto table_n = json::array();
    for (const auto &o : cfg.optimizers) {
        for (const auto &cell : cells(cfg)) {
            auto row = detail::summary_json(summarize(by_p[{o, cell.label()}]));
            row["optimizer"] = o;
            row["p_edge"] = cell.label();
            table_p.push_back(row);
        }
        for (const auto n : cfg.sizes) {
            auto row = detail::summary_json(summarize(by_n[{o, n}]));
            row["optimizer"] = o;
            row["n"] = n;
            table_n.push_back(row);
        }
    }
    j["by_p_edge"] = table_p;
    j["by_n"] = table_n;
    j["reference"] = reference_values();
    return j;
}

struct BenchOutcome {
    std::vector<RunResult> runs;
    json summary;
    fs::path records;
    fs::path params;
    fs::path summary_path;
};

inline BenchOutcome cmd_bench(const BenchConfig &cfg) {
    cfg.validate();
    const auto learned = resolve_learned(cfg);
    ensure_dir(cfg.out);
    log(LogLevel::Info, "bench: {} optimizers x {} instances on {} worker(s)",
        cfg.optimizers.size(),
        cells(cfg).size() * cfg.sizes.size() * cfg.instances_per_cell,
        cfg.workers);
    BenchOutcome out;
    out.runs = run_benchmark(cfg, learned);
    out.summary = build_summary(cfg, out.runs);
    out.records = cfg.out / "records.csv";
    out.params = cfg.out / "params.csv";
    out.summary_path = cfg.out / "summary.json";
    write_text(out.records, format_records(to_records(cfg, out.runs)));
    write_text(out.params, format_params(out.runs, cfg.p));
    write_text(out.summary_path, out.summary.dump(1) + "\n");
    log(LogLevel::Info, "bench: wrote {}, {} and {}", out.records.string(),
        out.params.string(), out.summary_path.string());
    return out;
}

// --------------------------------------------------------------------------
// Report
// --------------------------------------------------------------------------

[[nodiscard]] inline std::vector<RunRecord> parse_records(const std::string &text) {
    std::vector<RunRecord> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    METAQAOA_REQUIRE(line == records_header, ConfigError,
                     "records.csv: unexpected header '" + line + "'");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::size_t start = 0;
        for (;;) {
            const auto pos = line.find(',', start);
            f.push_back(line.substr(start, pos - start));
            if (pos == std::string::npos) {
                break;
            }
            start = pos + 1;
        }
        METAQAOA_REQUIRE(f.size() == 10, ConfigError,
                         fmt::format("records.csv line {}: expected 10 fields",
                                     lineno));
        RunRecord r;
        r.run_id = detail::parse_size(f[0], "run_id");
        r.optimizer = f[1];
        r.family = f[2];
        r.n = detail::parse_size(f[3], "n");
        r.p_edge = f[4];
        r.instance_seed = std::stoull(f[5]);
        r.iter = detail::parse_size(f[6], "iter");
        r.raw_cost = detail::parse_double(f[7], "raw_cost");
        r.normalized_cost = detail::parse_double(f[8], "normalized_cost");
        r.approx_ratio = detail::parse_double(f[9], "approx_ratio");
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace detail {

struct ReportInputs {
    json summary;
    std::vector<RunRecord> records;
    std::size_t p{1};
    std::size_t eval_T{0};
    std::size_t report_iter{0};
    std::vector<std::string> optimizers;
    std::vector<std::string> p_edges;
    std::vector<std::size_t> sizes;
    std::size_t instances_per_cell{0};
};

[[nodiscard]] inline ReportInputs read_report_inputs(const fs::path &dir) {
    const auto summary_path = dir / "summary.json";
    const auto records_path = dir / "records.csv";
    METAQAOA_REQUIRE(fs::exists(summary_path), ConfigError,
                     "missing " + summary_path.string() + " (run 'bench' first)");
    METAQAOA_REQUIRE(fs::exists(records_path), ConfigError,
                     "missing " + records_path.string() + " (run 'bench' first)");
    ReportInputs in;
    try {
        in.summary = json::parse(read_text(summary_path));
        METAQAOA_REQUIRE(in.summary.at("schema_version").get<int>() ==
                             schema_version,
                         ConfigError, "unsupported summary schema_version");
        const auto &c = in.summary.at("config");
        in.p = c.at("p").get<std::size_t>();
        in.eval_T = c.at("eval_T").get<std::size_t>();
        in.report_iter = c.at("report_iter").get<std::size_t>();
        in.optimizers = c.at("optimizers").get<std::vector<std::string>>();
        in.sizes = c.at("sizes").get<std::vector<std::size_t>>();
        in.instances_per_cell = c.at("instances_per_cell").get<std::size_t>();
        if (c.at("family").get<std::string>() == "sk") {
            in.p_edges = {""};
        } else {
            in.p_edges = c.at("p_edges").get<std::vector<std::string>>();
        }
    } catch (const json::exception &e) {
        throw ConfigError(summary_path.string() + ": " + e.what());
    }
    in.records = parse_records(read_text(records_path));
    return in;
}

using CellKey = std::tuple<std::string, std::string, std::size_t>;

[[nodiscard]] inline std::string describe(const CellKey &k) {
    const auto &[o, pe, n] = k;
    return pe.empty() ? fmt::format("{} n={}", o, n)
                      : fmt::format("{} p_edge={} n={}", o, pe, n);
}

/// run_id -> its rows ordered by iter, grouped per cell.
[[nodiscard]] inline std::map<CellKey, std::map<std::size_t, std::vector<const RunRecord *>>>
group_runs(const std::vector<RunRecord> &records) {
    std::map<CellKey, std::map<std::size_t, std::vector<const RunRecord *>>> out;
    for (const auto &r : records) {
        out[{r.optimizer, r.p_edge, r.n}][r.run_id].push_back(&r);
    }
    return out;
}

} // namespace detail

/**
 * @brief Recomputes every summary cell from records.csv.
 *
 * Throws ConfigError naming the absent cells, incomplete runs, or the first
 * statistic that does not match the stored summary.
 */
inline void verify_summary(const fs::path &dir) {
    const auto in = detail::read_report_inputs(dir);
    const auto groups = detail::group_runs(in.records);
    std::vector<std::string> absent;
    for (const auto &o : in.optimizers) {
        for (const auto &pe : in.p_edges) {
            for (const auto n : in.sizes) {
                const detail::CellKey key{o, pe, n};
                const auto it = groups.find(key);
                if (it == groups.end() ||
                    it->second.size() != in.instances_per_cell) {
                    absent.push_back(detail::describe(key));
                    continue;
                }
                for (const auto &[id, rows] : it->second) {
                    if (rows.size() != in.eval_T + 1) {
                        absent.push_back(fmt::format("{} (run {} has {} of {} rows)",
                                                     detail::describe(key), id,
                                                     rows.size(), in.eval_T + 1));
                    }
                }
            }
        }
    }
    if (!absent.empty()) {
        std::string msg = "records.csv is missing cells:";
        for (const auto &a : absent) {
            msg += "\n  " + a;
        }
        throw ConfigError(msg);
    }
    for (const auto &cell : in.summary.at("cells")) {
        const detail::CellKey key{cell.at("optimizer").get<std::string>(),
                                  cell.at("p_edge").get<std::string>(),
                                  cell.at("n").get<std::size_t>()};
        Vec ratios;
        for (const auto &[id, rows] : groups.at(key)) {
            ratios.push_back(rows.at(in.report_iter)->approx_ratio);
        }
        const auto s = summarize(ratios);
        const bool ok = s.count == cell.at("count").get<std::size_t>() &&
                        std::abs(s.mean - cell.at("mean").get<double>()) <= 1e-12 &&
                        std::abs(s.std - cell.at("std").get<double>()) <= 1e-12;
        METAQAOA_REQUIRE(ok, ConfigError,
                         "summary cell " + detail::describe(key) +
                             " does not match records.csv");
    }
}

struct ReportOutcome {
    fs::path curves;
    fs::path paths;
    fs::path table;
    std::size_t curve_rows{0};
    std::size_t path_rows{0};
};

/**
 * @brief Plot-data files in <dir>/report:
 *   loss_curves.tsv   mean and std of normalized cost and ratio per
 *                     optimizer, cell and iteration (eval_T + 1 rows each)
 *   param_paths.tsv   (gamma, beta, cost) along every p = 1 run
 *   ratio_table.tsv   mean and std at report_iter per optimizer and cell
 */
inline ReportOutcome cmd_report(const fs::path &dir) {
    verify_summary(dir);
    const auto in = detail::read_report_inputs(dir);
    const auto groups = detail::group_runs(in.records);
    const auto report_dir = dir / "report";
    ensure_dir(report_dir);
    ReportOutcome out;
    out.curves = report_dir / "loss_curves.tsv";
    out.paths = report_dir / "param_paths.tsv";
    out.table = report_dir / "ratio_table.tsv";

    std::string curves =
        "optimizer\tp_edge\tn\titer\tmean_normalized_cost\tstd_normalized_cost"
        "\tmean_ratio\tstd_ratio\n";
    std::string table = "optimizer\tp_edge\tn\tmean_ratio\tstd_ratio\tcount\n";
    for (const auto &o : in.optimizers) {
        for (const auto &pe : in.p_edges) {
            for (const auto n : in.sizes) {
                const auto &runs = groups.at({o, pe, n});
                for (std::size_t t = 0; t <= in.eval_T; ++t) {
                    Vec cost;
                    Vec ratio;
                    for (const auto &[id, rows] : runs) {
                        cost.push_back(rows[t]->normalized_cost);
                        ratio.push_back(rows[t]->approx_ratio);
                    }
                    const auto sc = summarize(cost);
                    const auto sr = summarize(ratio);
                    curves += fmt::format("{}\t{}\t{}\t{}\t{:.17g}\t{:.17g}\t{:.17g}\t{:.17g}\n",
                                          o, pe, n, t, sc.mean, sc.std, sr.mean,
                                          sr.std);
                    ++out.curve_rows;
                    if (t == in.report_iter) {
                        table += fmt::format("{}\t{}\t{}\t{:.17g}\t{:.17g}\t{}\n", o,
                                             pe, n, sr.mean, sr.std, sr.count);
                    }
                }
            }
        }
    }
    write_text(out.curves, curves);
    write_text(out.table, table);

    std::string paths = "run_id\toptimizer\tp_edge\tn\tinstance_seed\titer\tgamma\tbeta\tcost\n";
    if (in.p == 1) {
        std::map<std::size_t, std::vector<std::string>> params;
        const auto text = read_text(dir / "params.csv");
        std::istringstream ps(text);
        std::string line;
        std::getline(ps, line);
        while (std::getline(ps, line)) {
            if (line.empty()) {
                continue;
            }
            const auto f = detail::split(line, ',');
            METAQAOA_REQUIRE(f.size() == 4, ConfigError,
                             "params.csv: expected run_id,iter,gamma_1,beta_1");
            params[detail::parse_size(f[0], "run_id")].push_back(f[2] + "\t" + f[3]);
        }
        for (const auto &[key, runs] : groups) {
            for (const auto &[id, rows] : runs) {
                const auto it = params.find(id);
                METAQAOA_REQUIRE(it != params.end() && it->second.size() == rows.size(),
                                 ConfigError,
                                 fmt::format("params.csv lacks run {}", id));
                for (std::size_t t = 0; t < rows.size(); ++t) {
                    const auto &r = *rows[t];
                    paths += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.17g}\n", id,
                                         r.optimizer, r.p_edge, r.n, r.instance_seed,
                                         t, it->second[t], r.raw_cost);
                    ++out.path_rows;
                }
            }
        }
    } else {
        log(LogLevel::Info, "report: p = {}; parameter paths are emitted for p = 1 only",
            in.p);
    }
    write_text(out.paths, paths);
    log(LogLevel::Info, "report: wrote {}", report_dir.string());
    return out;
}

} // namespace metaqaoa::bench
