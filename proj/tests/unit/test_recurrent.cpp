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
#include "helpers.hpp"

#include "metaqaoa/recurrent.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace metaqaoa;
using namespace metaqaoa::recurrent;
using Catch::Approx;

namespace {

double sig(double a) { return 1.0 / (1.0 + std::exp(-a)); }

/// Gate set whose transforms copy the input, truncated or zero-padded.
struct IdentityGates {
    struct Gradient {};
    std::size_t H;
    std::size_t I;

    [[nodiscard]] std::size_t hidden_size() const { return H; }
    [[nodiscard]] std::size_t input_size() const { return I; }
    [[nodiscard]] Vec gate_forward(std::size_t, std::span<const double> in) const {
        Vec out(H, 0.0);
        for (std::size_t k = 0; k < std::min(H, in.size()); ++k) {
            out[k] = in[k];
        }
        return out;
    }
    [[nodiscard]] Vec gate_backward(std::size_t, std::span<const double> in,
                                    std::span<const double> up, Gradient &) const {
        Vec out(in.size(), 0.0);
        for (std::size_t k = 0; k < std::min(H, in.size()); ++k) {
            out[k] = up[k];
        }
        return out;
    }
};
static_assert(GateSet<IdentityGates>);

CellState random_cell_state(std::mt19937_64 &rng, std::size_t H) {
    return {fixtures::uniform_vector(rng, H, -0.8, 0.8),
            fixtures::uniform_vector(rng, H, -1.5, 1.5)};
}

/// L = a.h + b.c + d.y for a cell output.
template <typename Step>
double probe(const Step &s, const Vec &a, const Vec &b, const Vec &d) {
    double out = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        out += a[k] * s.state.h[k] + b[k] * s.state.c[k];
    }
    for (std::size_t k = 0; k < d.size(); ++k) {
        out += d[k] * s.y[k];
    }
    return out;
}

/// Analytic vs finite-difference gradient of probe() w.r.t. weights, x, h, c.
template <typename W, typename Fwd, typename Bwd>
void check_cell_gradients(const W &w, std::mt19937_64 &rng, Fwd fwd, Bwd bwd,
                          double tol) {
    const std::size_t H = w.hidden_size();
    const auto st = random_cell_state(rng, H);
    const auto x = fixtures::uniform_vector(rng, w.input_size(), -1.0, 1.0);
    const auto a = fixtures::uniform_vector(rng, H, -1.0, 1.0);
    const auto b = fixtures::uniform_vector(rng, H, -1.0, 1.0);
    const auto d = fixtures::uniform_vector(rng, H, -1.0, 1.0);

    auto grad = w.zeros_like();
    const auto step = fwd(w, st, x);
    const auto back = bwd(w, step, a, b, d, grad);

    const auto flat = w.flatten();
    const auto fd_w = fixtures::fd_gradient(
        [&](std::span<const double> th) {
            W tmp = w;
            tmp.assign(th);
            return probe(fwd(tmp, st, x), a, b, d);
        },
        flat);
    auto gflat = grad.flatten();
    // alpha does not enter the cell
    gflat.resize(flat.size() - w.alpha.size());
    Vec fd_cell(fd_w.begin(), fd_w.begin() + static_cast<std::ptrdiff_t>(gflat.size()));
    CHECK(fixtures::max_rel_err(gflat, fd_cell) < tol);

    const auto fd_x = fixtures::fd_gradient(
        [&](std::span<const double> xx) {
            return probe(fwd(w, st, Vec(xx.begin(), xx.end())), a, b, d);
        },
        x);
    CHECK(fixtures::max_rel_err(back.dx, fd_x) < tol);

    const auto fd_h = fixtures::fd_gradient(
        [&](std::span<const double> hh) {
            return probe(fwd(w, CellState{Vec(hh.begin(), hh.end()), st.c}, x), a, b, d);
        },
        st.h);
    CHECK(fixtures::max_rel_err(back.dh_prev, fd_h) < tol);

    const auto fd_c = fixtures::fd_gradient(
        [&](std::span<const double> cc) {
            return probe(fwd(w, CellState{st.h, Vec(cc.begin(), cc.end())}, x), a, b, d);
        },
        st.c);
    CHECK(fixtures::max_rel_err(back.dc_prev, fd_c) < tol);
}

} // namespace

TEST_CASE("QLSTM cell with zero angles", "[recurrent][qlstm]") {
    for (std::size_t p = 1; p <= 2; ++p) {
        const auto w = QlstmWeights::zeros(p);
        const Vec x(w.input_size(), 0.0);
        const auto s = qlstm_cell_forward(w, CellState::zeros(2 * p), x);
        for (std::size_t k = 0; k < 2 * p; ++k) {
            CHECK(s.f[k] == Approx(0.7310585786).epsilon(1e-9));
            CHECK(s.i[k] == Approx(0.7310585786).epsilon(1e-9));
            CHECK(s.o[k] == Approx(0.7310585786).epsilon(1e-9));
            CHECK(s.cand[k] == Approx(0.7615941560).epsilon(1e-9));
            CHECK(s.state.c[k] == Approx(sig(1.0) * std::tanh(1.0)).epsilon(1e-12));
            CHECK(s.state.c[k] == Approx(0.5568).margin(5e-5));
        }
    }
}

TEST_CASE("QLSTM gate ranges and cell-state growth", "[recurrent][qlstm][property]") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        auto tw = QlstmWeights::init(1, rng(), 2);
        for (std::size_t k = 0; k < 6; ++k) {
            tw.params[k] = vqc::init_vqc_params(tw.config(k), rng, 3.0);
        }
        const auto st = random_cell_state(rng, 2);
        const auto x = fixtures::uniform_vector(rng, 3, -5.0, 5.0);
        const auto s = qlstm_cell_forward(tw, st, x);
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(s.f[k] > 0.0);
            CHECK(s.f[k] < 1.0);
            CHECK(s.i[k] > 0.0);
            CHECK(s.i[k] < 1.0);
            CHECK(s.o[k] > 0.0);
            CHECK(s.o[k] < 1.0);
            CHECK(std::abs(s.state.c[k]) <= std::abs(st.c[k]) + 1.0);
            CHECK(std::abs(s.state.h[k]) <= 1.0 + 1e-12);
            CHECK(std::abs(s.y[k]) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("identity gates reduce the cell to a bare LSTM skeleton", "[recurrent]") {
    std::mt19937_64 rng(22);
    const IdentityGates g{3, 2};
    for (int trial = 0; trial < 20; ++trial) {
        const auto st = random_cell_state(rng, 3);
        const auto x = fixtures::uniform_vector(rng, 2, -1.0, 1.0);
        const auto s = gated_cell_forward(g, st, x);
        // v = [h, x] truncated to H is just h
        for (std::size_t k = 0; k < 3; ++k) {
            const double f = sig(st.h[k]);
            const double c = f * st.c[k] + f * std::tanh(st.h[k]);
            const double h = f * std::tanh(c);
            CHECK(s.state.c[k] == Approx(c).epsilon(1e-14));
            CHECK(s.state.h[k] == Approx(h).epsilon(1e-14));
            CHECK(s.y[k] == s.state.h[k]);
        }
        IdentityGates::Gradient gr;
        const Vec dh{0.3, -0.2, 0.5};
        const Vec dc{0.1, 0.4, -0.7};
        const Vec dy{-0.5, 0.2, 0.1};
        const auto back = gated_cell_backward(g, s, dh, dc, dy, gr);
        const auto fd = fixtures::fd_gradient(
            [&](std::span<const double> hh) {
                const auto t = gated_cell_forward(g, CellState{Vec(hh.begin(), hh.end()), st.c}, x);
                return probe(t, dh, dc, dy);
            },
            st.h);
        CHECK(fixtures::max_rel_err(back.dh_prev, fd) < 1e-6);
        for (const double v : back.dx) {
            CHECK(v == 0.0);
        }
    }
}

TEST_CASE("QLSTM cell gradients match finite differences", "[recurrent][qlstm][gradient]") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 3; ++trial) {
        auto w = QlstmWeights::init(1, rng(), 1 + trial % 2);
        for (std::size_t k = 0; k < 6; ++k) {
            w.params[k] = vqc::init_vqc_params(w.config(k), rng, 1.0);
        }
        check_cell_gradients(
            w, rng,
            [](const QlstmWeights &ww, const CellState &s, const Vec &x) {
                return qlstm_cell_forward(ww, s, x);
            },
            [](const QlstmWeights &ww, const QlstmStep &s, const Vec &dh, const Vec &dc,
               const Vec &dy, QlstmWeights &g) {
                return qlstm_cell_backward(ww, s, dh, dc, dy, g);
            },
            1e-6);
    }
}

TEST_CASE("LSTM cell with zero weights", "[recurrent][lstm]") {
    const auto w = LstmWeights::zeros(2);
    const Vec x{0.3, -1.0, 2.0, 0.5, 0.9};
    const auto s = lstm_cell_forward(w, CellState::zeros(4), x);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(s.state.h[k] == 0.0);
        CHECK(s.y[k] == 0.0);
    }
}

TEST_CASE("LSTM output stays in [-1, 1]", "[recurrent][lstm][property]") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 200; ++trial) {
        auto w = LstmWeights::init(1 + trial % 3, rng());
        auto flat = w.flatten();
        for (auto &v : flat) {
            v *= 10.0;
        }
        w.assign(flat);
        const auto st = random_cell_state(rng, w.hidden_size());
        const auto x = fixtures::uniform_vector(rng, w.input_size(), -3.0, 3.0);
        for (const double y : lstm_cell_forward(w, st, x).y) {
            CHECK(std::abs(y) <= 1.0);
        }
    }
}

TEST_CASE("LSTM init draws every parameter from +-1/sqrt(H)", "[recurrent][lstm]") {
    const auto w = LstmWeights::init(2, 99);
    const double bound = 0.5;
    bool any_bias = false;
    for (const double v : w.b) {
        CHECK(std::abs(v) <= bound);
        any_bias = any_bias || v != 0.0;
    }
    CHECK(any_bias);
    for (const double v : w.W) {
        CHECK(std::abs(v) <= bound);
    }
    CHECK(w == LstmWeights::init(2, 99));
    CHECK_FALSE(w == LstmWeights::init(2, 100));
}

TEST_CASE("LSTM cell gradients match finite differences", "[recurrent][lstm][gradient]") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 10; ++trial) {
        const auto w = LstmWeights::init(1 + trial % 3, rng());
        check_cell_gradients(
            w, rng,
            [](const LstmWeights &ww, const CellState &s, const Vec &x) {
                return lstm_cell_forward(ww, s, x);
            },
            [](const LstmWeights &ww, const LstmStep &s, const Vec &dh, const Vec &dc,
               const Vec &dy, LstmWeights &g) { return lstm_cell_backward(ww, s, dh, dc, dy, g); },
            1e-6);
    }
}

TEST_CASE("cell shape errors", "[recurrent]") {
    const auto q = QlstmWeights::zeros(1);
    CHECK_THROWS_AS(qlstm_cell_forward(q, CellState::zeros(2), Vec(2, 0.0)), ShapeError);
    CHECK_THROWS_AS(qlstm_cell_forward(q, CellState::zeros(3), Vec(3, 0.0)), ShapeError);
    const auto l = LstmWeights::zeros(1);
    CHECK_THROWS_AS(lstm_cell_forward(l, CellState::zeros(2), Vec(4, 0.0)), ShapeError);
}

TEST_CASE("residual parameter proposals", "[recurrent][propose]") {
    const Vec alpha{std::numbers::pi / 2, std::numbers::pi / 2};
    const Vec theta{0.3, -0.4};
    CHECK(propose_params(theta, Vec{0.0, 0.0}, alpha) == theta);
    const auto out = propose_params(Vec{0.0, 0.0}, Vec{1.0, -1.0}, alpha);
    CHECK(out[0] == std::numbers::pi / 2);
    CHECK(out[1] == -std::numbers::pi / 2);
    CHECK(propose_params(UpdateRule::Residual, theta, Vec{0.0, 0.0}, alpha) == theta);
    CHECK_THROWS_AS(propose_params(theta, Vec{1.0}, alpha), ShapeError);

    std::mt19937_64 rng(26);
    for (int trial = 0; trial < 200; ++trial) {
        const auto th = fixtures::uniform_vector(rng, 4, -3.0, 3.0);
        const auto y = fixtures::uniform_vector(rng, 4, -1.0, 1.0);
        const auto al = fixtures::uniform_vector(rng, 4, 0.01, 2.0);
        const double amax = *std::max_element(al.begin(), al.end());
        const auto next = propose_params(UpdateRule::Residual, th, y, al);
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(std::abs(next[k] - th[k]) <= amax + 1e-15);
        }
    }
}

TEST_CASE("absolute parameter proposals", "[recurrent][propose]") {
    const Vec alpha{std::numbers::pi / 2, 1.0};
    const auto out = propose_params(UpdateRule::Absolute, Vec{5.0, -7.0}, Vec{1.0, -0.5}, alpha);
    CHECK(out[0] == std::numbers::pi / 2);
    CHECK(out[1] == -0.5);
    std::mt19937_64 rng(27);
    for (int trial = 0; trial < 200; ++trial) {
        const auto th = fixtures::uniform_vector(rng, 2, -9.0, 9.0);
        const auto y = fixtures::uniform_vector(rng, 2, -1.0, 1.0);
        const auto al = fixtures::uniform_vector(rng, 2, 0.01, 2.0);
        const auto next = propose_params(UpdateRule::Absolute, th, y, al);
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(std::abs(next[k]) <= al[k]);
        }
    }
    CHECK(parse_update_rule("absolute") == UpdateRule::Absolute);
    CHECK(parse_update_rule("residual") == UpdateRule::Residual);
    CHECK_FALSE(parse_update_rule("other").has_value());
    CHECK(to_string(UpdateRule::Residual) == "residual");
}

TEST_CASE("cost normalization", "[recurrent]") {
    const auto tri = fixtures::triangle();
    CHECK(normalize_cost(tri.normalizer(), tri) == 1.0);
    CHECK(normalize_cost(0.0, tri) == 0.0);
    problems::IsingInstance empty;
    empty.num_spins = 2;
    CHECK_THROWS_AS(normalize_cost(0.5, empty), DomainError);
}

TEST_CASE("weight init is deterministic", "[recurrent]") {
    CHECK(QlstmWeights::init(2, 5) == QlstmWeights::init(2, 5));
    CHECK_FALSE(QlstmWeights::init(2, 5) == QlstmWeights::init(2, 6));
    auto w = QlstmWeights::init(1, 3);
    const auto flat = w.flatten();
    CHECK(flat.size() == w.num_parameters());
    auto z = QlstmWeights::zeros(1);
    z.assign(flat);
    CHECK(z == w);
}
