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
 * metaqaoa command-line tool.
 *
 *   metaqaoa gen    --config bench.json --out out
 *   metaqaoa train  --optimizer qlstm --seed 7 --out out
 *   metaqaoa bench  --sizes 8-16 --p-edge 2/7,3/7 --workers 4 --out out
 *   metaqaoa report --out out
 *
 * Exit status: 0 success, 2 configuration error, 3 numerical divergence,
 * 1 any other failure. METAQAOA_LOG=quiet|info|debug sets verbosity.
 */
#include "metaqaoa/bench.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace mb = metaqaoa::bench;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> workers;
    std::optional<std::string> optimizer;
    std::optional<std::string> sizes;
    std::optional<std::string> p_edge;
    std::optional<std::string> family;
    std::vector<std::string> checkpoints;
    std::optional<std::size_t> instances;
    std::optional<std::size_t> meta_iterations;
    std::optional<std::size_t> eval_T;
    bool resume{false};
};

void add_common(CLI::App &cmd, Flags &f) {
    cmd.add_option("--config", f.config, "JSON configuration file");
    cmd.add_option("--seed", f.seed, "master seed");
    cmd.add_option("--out", f.out, "output directory");
    cmd.add_option("--workers", f.workers, "worker threads for bench");
    cmd.add_option("--optimizer", f.optimizer,
                   "optimizer(s), comma separated; train takes qlstm or lstm");
    cmd.add_option("--sizes", f.sizes, "problem sizes, e.g. 8-16 or 8,10,12");
    cmd.add_option("--p-edge", f.p_edge, "edge probabilities, e.g. 2/7,3/7");
    cmd.add_option("--family", f.family, "maxcut or sk");
    cmd.add_option("--checkpoint", f.checkpoints,
                   "checkpoint file (repeatable)");
    cmd.add_option("--instances", f.instances, "instances per grid cell");
    cmd.add_option("--eval-T", f.eval_T, "optimizer steps per run");
}

/// Config file first, then flags.
mb::BenchConfig resolve(const Flags &f, const std::string &command) {
    mb::BenchConfig cfg = f.config.empty() ? mb::BenchConfig{}
                                           : mb::load_config(f.config);
    if (f.seed) {
        cfg.master_seed = *f.seed;
    }
    if (f.out) {
        cfg.out = *f.out;
    }
    if (f.workers) {
        cfg.workers = *f.workers;
    }
    if (f.family) {
        cfg.family = metaqaoa::problems::parse_problem_kind(*f.family);
    }
    if (f.sizes) {
        cfg.sizes = mb::parse_sizes(*f.sizes);
    }
    if (f.p_edge) {
        cfg.p_edges.clear();
        for (const auto &item : mb::detail::split(*f.p_edge, ',')) {
            cfg.p_edges.push_back(mb::parse_p_edge(item));
        }
        if (command == "train" && !cfg.p_edges.empty()) {
            cfg.train.p_edge = cfg.p_edges.front();
        }
    }
    if (f.optimizer) {
        std::vector<std::string> names;
        for (const auto &item : mb::detail::split(*f.optimizer, ',')) {
            names.push_back(mb::normalize_optimizer(item));
        }
        if (command == "train") {
            METAQAOA_REQUIRE(names.size() == 1, metaqaoa::ConfigError,
                             "train takes exactly one optimizer");
            cfg.train.optimizer = names.front();
        } else {
            cfg.optimizers = names;
        }
    }
    if (!f.checkpoints.empty()) {
        cfg.checkpoints.assign(f.checkpoints.begin(), f.checkpoints.end());
    }
    if (f.instances) {
        cfg.instances_per_cell = *f.instances;
    }
    if (f.meta_iterations) {
        cfg.train.meta_iterations = *f.meta_iterations;
    }
    if (f.eval_T) {
        cfg.eval_T = *f.eval_T;
    }
    if (f.resume) {
        cfg.train.resume = true;
    }
    cfg.validate();
    return cfg;
}

int run(const std::string &command, const Flags &f) {
    const auto cfg = resolve(f, command);
    if (command == "gen") {
        const auto count = mb::cmd_gen(cfg);
        fmt::print("{} instances in {}\n", count, (cfg.out / "instances").string());
    } else if (command == "train") {
        const auto res = mb::cmd_train(cfg);
        fmt::print("{} after {} meta-iterations; log {}\n",
                   res.checkpoint.string(), res.meta_iter, res.log.string());
    } else if (command == "bench") {
        const auto res = mb::cmd_bench(cfg);
        fmt::print("{} runs; {}\n", res.runs.size(), res.summary_path.string());
    } else {
        const auto res = mb::cmd_report(cfg.out);
        fmt::print("{} curve rows, {} path rows in {}\n", res.curve_rows,
                   res.path_rows, res.curves.parent_path().string());
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"QAOA parameter optimization with learned recurrent optimizers"};
    app.require_subcommand(1);
    Flags flags;
    std::vector<CLI::App *> subs{
        app.add_subcommand("gen", "write benchmark instances as JSON"),
        app.add_subcommand("train", "meta-train a QLSTM or LSTM optimizer"),
        app.add_subcommand("bench", "run every optimizer on the instance grid"),
        app.add_subcommand("report", "emit plot-data files from bench output"),
    };
    for (auto *sub : subs) {
        add_common(*sub, flags);
    }
    auto *train = subs[1];
    train->add_option("--meta-iterations", flags.meta_iterations,
                      "meta-iterations to run");
    train->add_flag("--resume", flags.resume,
                    "continue from the checkpoint if it exists");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    std::string command;
    for (auto *sub : subs) {
        if (sub->parsed()) {
            command = sub->get_name();
        }
    }
    try {
        return run(command, flags);
    } catch (const metaqaoa::ConfigError &e) {
        fmt::print(stderr, "configuration error: {}\n", e.what());
        return 2;
    } catch (const metaqaoa::DivergenceError &e) {
        fmt::print(stderr, "numerical divergence: {}\n", e.what());
        return 3;
    } catch (const metaqaoa::Error &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    } catch (const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
}
