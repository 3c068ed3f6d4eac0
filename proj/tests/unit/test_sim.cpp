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
#include "dense_oracle.hpp"
#include "helpers.hpp"

#include "metaqaoa/circuit.hpp"
#include "metaqaoa/sim.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

using namespace metaqaoa;
using namespace metaqaoa::sim;
using Catch::Approx;

namespace {

std::vector<oracle::cd> amps(const StateVector &s) {
    return {s.amplitudes().begin(), s.amplitudes().end()};
}

oracle::Mat dense_gate(const Gate &g, std::size_t n) {
    switch (g.kind) {
    case GateKind::H:
        return oracle::on_qubit(oracle::pauli('H'), g.q0, n);
    case GateKind::RX:
        return oracle::evolve(oracle::on_qubit(oracle::pauli('X'), g.q0, n), g.angle / 2);
    case GateKind::RY:
        return oracle::evolve(oracle::on_qubit(oracle::pauli('Y'), g.q0, n), g.angle / 2);
    case GateKind::RZ:
        return oracle::evolve(oracle::on_qubit(oracle::pauli('Z'), g.q0, n), g.angle / 2);
    case GateKind::CNOT:
        return oracle::cnot(g.q0, g.q1, n);
    case GateKind::ZZ:
        return oracle::evolve(oracle::zz(g.q0, g.q1, n), g.angle);
    }
    return oracle::Mat::identity(std::size_t{1} << n);
}

Gate random_gate(std::mt19937_64 &rng, std::size_t n) {
    std::uniform_int_distribution<int> kind(0, 5);
    std::uniform_int_distribution<std::size_t> q(0, n - 1);
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    const std::size_t a = q(rng);
    std::size_t b = q(rng);
    while (n > 1 && b == a) {
        b = q(rng);
    }
    switch (kind(rng)) {
    case 0:
        return Gate::h(a);
    case 1:
        return Gate::rx(a, angle(rng));
    case 2:
        return Gate::ry(a, angle(rng));
    case 3:
        return Gate::rz(a, angle(rng));
    case 4:
        return n > 1 ? Gate::cnot(a, b) : Gate::h(a);
    default:
        return n > 1 ? Gate::zz(a, b, angle(rng)) : Gate::rz(a, angle(rng));
    }
}

/// Random circuit whose parametric gates are bound to random slots.
Circuit random_circuit(std::mt19937_64 &rng, std::size_t n, std::size_t gates,
                       std::size_t params) {
    Circuit c(n, params);
    std::uniform_int_distribution<std::size_t> slot(0, params - 1);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (std::size_t k = 0; k < gates; ++k) {
        const auto g = random_gate(rng, n);
        if (is_parametric(g.kind)) {
            c.add(g, slot(rng), coeff(rng));
        } else {
            c.add(g);
        }
    }
    return c;
}

double circuit_value(Circuit c, std::span<const double> params,
                     const StateVector &init, const Observable &obs) {
    c.bind(params);
    return expectation(execute(c, init), obs);
}

} // namespace

TEST_CASE("plus state has uniform amplitudes", "[sim]") {
    const auto s1 = init_plus_state(1);
    CHECK(s1[0].real() == Approx(std::sqrt(0.5)).margin(1e-15));
    CHECK(s1[1].real() == Approx(std::sqrt(0.5)).margin(1e-15));
    const auto s2 = init_plus_state(2);
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(s2[k].real() == Approx(0.5).margin(1e-15));
    }
    const auto s10 = init_plus_state(10);
    REQUIRE(s10.dimension() == 1024);
    for (std::size_t k = 0; k < 1024; ++k) {
        CHECK(std::abs(s10[k] - std::complex<double>(1.0 / 32.0, 0.0)) < 1e-15);
    }
    CHECK(std::abs(s10.norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("register size outside [1, 24] is a capacity error", "[sim]") {
    CHECK_THROWS_AS(init_plus_state(0), CapacityError);
    CHECK_THROWS_AS(init_plus_state(25), CapacityError);
    CHECK_THROWS_AS(StateVector(25), CapacityError);
}

TEST_CASE("single gates on basis states", "[sim]") {
    auto s = apply_gate(StateVector(1), Gate::h(0));
    CHECK(s[0].real() == Approx(std::sqrt(0.5)));
    CHECK(s[1].real() == Approx(std::sqrt(0.5)));

    s = apply_gate(StateVector(1), Gate::ry(0, std::numbers::pi));
    CHECK(std::abs(s[1]) == Approx(1.0).margin(1e-15));
    CHECK(std::abs(s[0]) < 1e-15);

    // qubit 0 set, qubit 1 clear: index 1.
    StateVector b(2);
    b[0] = 0.0;
    b[1] = 1.0;
    const auto out = apply_gate(b, Gate::cnot(0, 1));
    CHECK(std::abs(out[3] - std::complex<double>(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(out[1]) < 1e-15);
}

TEST_CASE("every gate kind matches its dense matrix", "[sim][oracle]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const auto g = random_gate(rng, n);
        const auto psi = fixtures::random_state(rng, n);
        const auto got = amps(apply_gate(psi, g));
        const auto want = dense_gate(g, n) * amps(psi);
        for (std::size_t k = 0; k < got.size(); ++k) {
            INFO(to_string(g.kind) << " on n=" << n);
            CHECK(std::abs(got[k] - want[k]) < 1e-12);
        }
    }
}

TEST_CASE("adjoint application inverts each gate", "[sim]") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto psi = fixtures::random_state(rng, 3);
        const auto g = random_gate(rng, 3);
        auto s = psi;
        apply_gate_inplace(s, g);
        apply_gate_inplace(s, g, true);
        for (std::size_t k = 0; k < 8; ++k) {
            CHECK(std::abs(s[k] - psi[k]) < 1e-13);
        }
    }
}

TEST_CASE("gate indices are validated", "[sim]") {
    StateVector s(2);
    CHECK_THROWS_AS(apply_gate(s, Gate::rx(2, 0.1)), IndexError);
    CHECK_THROWS_AS(apply_gate(s, Gate::cnot(0, 0)), IndexError);
    CHECK_THROWS_AS(apply_gate(s, Gate::zz(1, 1, 0.3)), IndexError);
    CHECK_THROWS_AS(apply_gate(s, Gate::zz(0, 3, 0.3)), IndexError);
}

TEST_CASE("norm is conserved over 10^4 random gates", "[sim][property]") {
    std::mt19937_64 rng(2024);
    for (std::size_t n : {3, 9, 16}) {
        auto s = init_plus_state(n);
        const std::size_t gates = n == 16 ? 2000 : 10000;
        for (std::size_t k = 0; k < gates; ++k) {
            apply_gate_inplace(s, random_gate(rng, n));
        }
        CHECK(std::abs(s.norm_squared() - 1.0) < 1e-9);
    }
}

TEST_CASE("ZZ expectation", "[sim]") {
    std::vector<Coupling> c{{0, 1, 1.0}, {1, 3, -0.7}, {0, 2, 2.5}};
    CHECK(std::abs(expectation_zz(init_plus_state(4), c)) < 1e-12);
    std::vector<Coupling> one{{0, 1, 1.0}};
    CHECK(expectation_zz(StateVector(2), one) == Approx(1.0));
    std::vector<Coupling> bad{{0, 4, 1.0}};
    CHECK_THROWS_AS(expectation_zz(StateVector(4), bad), IndexError);
}

TEST_CASE("ZZ expectation matches the Kronecker oracle", "[sim][oracle][property]") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> w(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const auto psi = fixtures::random_state(rng, n);
        std::vector<Coupling> couplings;
        oracle::Mat h(std::size_t{1} << n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if ((rng() & 1U) != 0U) {
                    const double x = w(rng);
                    couplings.push_back({i, j, x});
                    h = h + oracle::cd{x, 0.0} * oracle::zz(i, j, n);
                }
            }
        }
        CHECK(std::abs(expectation_zz(psi, couplings) -
                       oracle::expectation(h, amps(psi))) < 1e-10);
    }
}

TEST_CASE("single-qubit Z expectation", "[sim]") {
    StateVector zero(1);
    CHECK(expectation_z(zero, 0) == Approx(1.0));
    auto one = apply_gate(zero, Gate::rx(0, std::numbers::pi));
    CHECK(expectation_z(one, 0) == Approx(-1.0));
    CHECK(std::abs(expectation_z(init_plus_state(1), 0)) < 1e-12);
    CHECK_THROWS_AS(expectation_z(zero, 1), IndexError);
}

TEST_CASE("sampling follows the Born rule", "[sim][sampling]") {
    std::mt19937_64 rng(1);
    const auto zeros = sample_bitstrings(StateVector(3), 100, rng);
    CHECK(zeros.size() == 100);
    CHECK(std::all_of(zeros.begin(), zeros.end(), [](auto s) { return s == 0; }));

    std::mt19937_64 r1(42);
    const auto plus = sample_bitstrings(init_plus_state(1), 10000, r1);
    const double freq0 =
        static_cast<double>(std::count(plus.begin(), plus.end(), 0U)) / 10000.0;
    CHECK(std::abs(freq0 - 0.5) <= 0.02);

    std::mt19937_64 r2(42);
    CHECK(sample_bitstrings(init_plus_state(1), 10000, r2) == plus);
}

TEST_CASE("sampled distribution is within 0.01 TV distance", "[sim][sampling][property]") {
    std::mt19937_64 rng(7);
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto psi = fixtures::random_state(rng, n);
        const auto samples = sample_bitstrings(psi, 100000, rng);
        std::map<std::uint64_t, double> freq;
        for (auto s : samples) {
            freq[s] += 1.0 / 100000.0;
        }
        double tv = 0.0;
        for (std::size_t k = 0; k < psi.dimension(); ++k) {
            tv += std::abs(freq[k] - std::norm(psi[k]));
        }
        CHECK(0.5 * tv < 0.01);
    }
}

TEST_CASE("zero shots are rejected", "[sim][sampling]") {
    std::mt19937_64 rng(1);
    CHECK_THROWS(sample_bitstrings(StateVector(1), 0, rng));
}

TEST_CASE("adjoint gradient of a circuit without parameters is empty", "[circuit]") {
    Circuit c(2, 0);
    c.add(Gate::h(0));
    c.add(Gate::cnot(0, 1));
    CHECK(adjoint_gradient(c, StateVector(2), Observable({{0, 1, 1.0}})).empty());
}

TEST_CASE("adjoint gradient of RY on |0> is -sin", "[circuit]") {
    Circuit c(1, 1);
    c.add(Gate::ry(0, 0.0), 0, 1.0);
    const std::vector<double> theta{0.3};
    c.bind(theta);
    const Observable z({}, {{0, 1.0}});
    const auto g = adjoint_gradient(c, StateVector(1), z);
    REQUIRE(g.size() == 1);
    CHECK(std::abs(g[0] + std::sin(0.3)) < 1e-10);
}

TEST_CASE("malformed slot bindings are configuration errors", "[circuit]") {
    Circuit bad_slot(2, 1);
    bad_slot.add(Gate::rx(0, 0.0), 3, 1.0);
    CHECK_THROWS_AS(adjoint_gradient(bad_slot, StateVector(2), Observable({{0, 1, 1.0}})),
                    ConfigError);
    Circuit bad_gate(2, 1);
    bad_gate.add(Gate::cnot(0, 1), 0, 1.0);
    CHECK_THROWS_AS(bad_gate.validate_slots(), ConfigError);
    Circuit bad_coeff(1, 1);
    bad_coeff.add(Gate::rz(0, 0.0), 0, std::nan(""));
    CHECK_THROWS_AS(bad_coeff.validate_slots(), ConfigError);
}

TEST_CASE("shift rule per generator", "[circuit]") {
    const auto zz = shift_rule(GateKind::ZZ);
    CHECK(zz.shift == Approx(std::numbers::pi / 4));
    CHECK(zz.factor == Approx(1.0));
    const auto rx = shift_rule(GateKind::RX);
    CHECK(rx.shift == Approx(std::numbers::pi / 2));
    CHECK(rx.factor == Approx(0.5));
}

TEST_CASE("adjoint and shift gradients match finite differences on random circuits",
          "[circuit][property]") {
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 8;
        const std::size_t params = 1 + trial % 5;
        const std::size_t gates = 5 + (trial * 7) % 36;
        auto c = random_circuit(rng, n, gates, params);
        const auto theta = fixtures::uniform_vector(rng, params, -2.0, 2.0);
        c.bind(theta);
        std::vector<Coupling> zz;
        std::vector<ZTerm> z{{0, 0.8}};
        if (n > 1) {
            zz.push_back({0, n - 1, 1.3});
        }
        const Observable obs(zz, z);
        const auto init = fixtures::random_state(rng, n);
        const auto adj = adjoint_gradient(c, init, obs);
        const auto ps = parameter_shift_gradient(c, init, obs);
        const auto fd = fixtures::fd_gradient(
            [&](std::span<const double> x) { return circuit_value(c, x, init, obs); },
            theta);
        INFO("trial " << trial << " n=" << n << " gates=" << gates);
        CHECK(fixtures::max_rel_err(adj, fd) < 1e-6);
        CHECK(fixtures::max_rel_err(ps, adj) < 1e-9);
    }
}
