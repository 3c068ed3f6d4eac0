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
#include "metaqaoa/checkpoint.hpp"
#include "metaqaoa/meta.hpp"

#include <catch_amalgamated.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

using namespace metaqaoa;
using namespace metaqaoa::checkpoint;
using recurrent::LstmWeights;
using recurrent::QlstmWeights;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("metaqaoa_ckpt_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

/// Fills every parameter with awkward doubles.
template <typename W> W scrambled(W w, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    auto flat = w.flatten();
    for (auto &x : flat) {
        x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 9) - 4);
    }
    for (std::size_t k = flat.size() - w.alpha.size(); k < flat.size(); ++k) {
        flat[k] = std::abs(flat[k]) + 1e-3;
    }
    w.assign(flat);
    return w;
}

bool bit_equal(const std::vector<double> &a, const std::vector<double> &b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void write_file(const fs::path &p, const std::string &text) {
    std::ofstream(p, std::ios::binary) << text;
}

} // namespace

TEST_CASE("QLSTM checkpoints round-trip bit for bit", "[checkpoint]") {
    const auto dir = scratch_dir("qlstm");
    for (std::size_t p = 1; p <= 2; ++p) {
        auto w = scrambled(QlstmWeights::init(p, 3, 1 + p), 10 + p);
        w.update = p == 1 ? recurrent::UpdateRule::Residual : recurrent::UpdateRule::Absolute;
        auto opt = baselines::OptimizerState::create(baselines::OptimizerKind::Adam, w.num_parameters(), {});
        opt.step_count = 17;
        opt.m[0] = 0.1 + 0.2;
        opt.v.back() = 1e-300;
        const Checkpoint<QlstmWeights> ck{w, 123456789012345ULL, 42, opt};
        const auto path = dir / ("q" + std::to_string(p) + ".json");
        save(ck, path);
        const auto back = load<QlstmWeights>(path);
        CHECK(back.weights == w);
        CHECK(bit_equal(back.weights.flatten(), w.flatten()));
        CHECK(back.seed == ck.seed);
        CHECK(back.meta_iter == 42);
        REQUIRE(back.optimizer.has_value());
        CHECK(back.optimizer->step_count == 17);
        CHECK(bit_equal(back.optimizer->m, opt.m));
        CHECK(bit_equal(back.optimizer->v, opt.v));
        CHECK(serialize(back) == serialize(ck));
        CHECK_FALSE(fs::exists(path.string() + ".tmp"));
    }
}

TEST_CASE("LSTM checkpoints round-trip bit for bit", "[checkpoint]") {
    const auto dir = scratch_dir("lstm");
    const auto w = scrambled(LstmWeights::init(2, 9), 77);
    const Checkpoint<LstmWeights> ck{w, 5, 0, std::nullopt};
    save(ck, dir / "l.json");
    const auto back = load<LstmWeights>(dir / "l.json");
    CHECK(bit_equal(back.weights.flatten(), w.flatten()));
    CHECK_FALSE(back.optimizer.has_value());
    const auto j = read_json(dir / "l.json");
    CHECK(kind_of(j) == "lstm");
    CHECK(j.at("lstm").at("W").size() == 16);
    CHECK(j.at("lstm").at("W")[0].size() == 9);
}

TEST_CASE("a reloaded optimizer reproduces the same trajectories", "[checkpoint]") {
    const auto dir = scratch_dir("replay");
    const auto w = QlstmWeights::init(1, 21);
    save(Checkpoint<QlstmWeights>{w, 21, 0, std::nullopt}, dir / "w.json");
    const auto back = load<QlstmWeights>(dir / "w.json").weights;
    meta::MetaConfig cfg;
    const auto inst = meta::training_instance(cfg, 0);
    CHECK(meta::unroll_episode(w, inst, 6) == meta::unroll_episode(back, inst, 6));
}

TEST_CASE("malformed checkpoints are configuration errors", "[checkpoint]") {
    const auto dir = scratch_dir("bad");
    CHECK_THROWS_AS(load<QlstmWeights>(dir / "missing.json"), ConfigError);

    write_file(dir / "garbage.json", "{not json");
    CHECK_THROWS_AS(load<QlstmWeights>(dir / "garbage.json"), ConfigError);

    const Checkpoint<QlstmWeights> q{QlstmWeights::init(1, 1), 1, 1, std::nullopt};
    save(q, dir / "q.json");
    CHECK_THROWS_AS(load<LstmWeights>(dir / "q.json"), ConfigError);

    const auto good = to_json(q);
    const auto mutate = [&](auto fn) {
        auto j = good;
        fn(j);
        write_file(dir / "m.json", j.dump());
        return dir / "m.json";
    };
    CHECK_THROWS_AS(load<QlstmWeights>(mutate([](json &j) { j["version"] = 99; })), ConfigError);
    CHECK_THROWS_AS(load<QlstmWeights>(mutate([](json &j) { j.erase("alpha"); })), ConfigError);
    CHECK_THROWS_AS(load<QlstmWeights>(mutate([](json &j) { j["alpha"] = {1.0}; })), ConfigError);
    CHECK_THROWS_AS(load<QlstmWeights>(mutate([](json &j) { j["alpha"] = {1.0, -1.0}; })),
                    ConfigError);
    CHECK_THROWS_AS(load<QlstmWeights>(mutate([](json &j) { j["vqc_params"].erase(5); })),
                    ConfigError);
    CHECK_THROWS_AS(load<QlstmWeights>(mutate([](json &j) { j["vqc_params"][0][0][0] = {1.0}; })),
                    ConfigError);
    CHECK_THROWS_AS(load<QlstmWeights>(mutate([](json &j) { j["update_rule"] = "sideways"; })),
                    ConfigError);
    CHECK_THROWS_AS(load<QlstmWeights>(mutate([](json &j) { j["p"] = "one"; })), ConfigError);
    CHECK_THROWS_AS(load<QlstmWeights>(mutate([](json &j) { j["p"] = 0; })), ConfigError);

    const Checkpoint<LstmWeights> l{LstmWeights::init(1, 1), 1, 1, std::nullopt};
    auto lj = to_json(l);
    lj["lstm"]["W"][0].erase(0);
    write_file(dir / "l.json", lj.dump());
    CHECK_THROWS_AS(load<LstmWeights>(dir / "l.json"), ConfigError);
}

TEST_CASE("saving into a missing directory is an I/O error", "[checkpoint]") {
    const Checkpoint<LstmWeights> l{LstmWeights::init(1, 1), 1, 1, std::nullopt};
    CHECK_THROWS_AS(save(l, scratch_dir("io") / "no" / "such" / "dir.json"), IoError);
}
