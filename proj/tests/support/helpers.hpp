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
 * Small fixtures shared by the unit and acceptance tests.
 */
#pragma once

#include "metaqaoa/problems.hpp"
#include "metaqaoa/random.hpp"
#include "metaqaoa/sim.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace fixtures {

using metaqaoa::problems::Graph;
using metaqaoa::problems::IsingInstance;

inline IsingInstance graph_instance(std::size_t n,
                                    std::vector<std::pair<std::size_t, std::size_t>> edges) {
    Graph g;
    g.num_nodes = n;
    for (auto [i, j] : edges) {
        g.edges.push_back({i, j, 1.0});
    }
    return metaqaoa::problems::maxcut_to_ising(g);
}

inline IsingInstance single_edge() { return graph_instance(2, {{0, 1}}); }

inline IsingInstance triangle() {
    return graph_instance(3, {{0, 1}, {0, 2}, {1, 2}});
}

inline IsingInstance cycle(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        edges.emplace_back(k, k + 1);
    }
    edges.emplace_back(0, n - 1);
    return graph_instance(n, edges);
}

/// Max-Cut on G(n, 1/2) or SK with +-1 couplings, alternating by `sk`.
inline IsingInstance random_instance(std::mt19937_64 &rng, std::size_t n,
                                     bool sk) {
    const auto seed = rng();
    if (sk) {
        return metaqaoa::problems::gen_sk_instance(
            n, seed, metaqaoa::problems::SkDistribution::StandardNormal);
    }
    return metaqaoa::problems::generate_instance(
        {metaqaoa::problems::ProblemKind::MaxCut, 0.5, {}}, n, seed);
}

inline std::vector<double> uniform_vector(std::mt19937_64 &rng, std::size_t n,
                                          double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> out(n);
    for (auto &x : out) {
        x = u(rng);
    }
    return out;
}

/// Random normalized state on n qubits.
inline metaqaoa::sim::StateVector random_state(std::mt19937_64 &rng,
                                               std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<std::complex<double>> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &a : amps) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto &a : amps) {
        a /= std::sqrt(norm);
    }
    return metaqaoa::sim::StateVector(std::move(amps));
}

/// Central finite-difference gradient.
inline std::vector<double>
fd_gradient(const std::function<double(std::span<const double>)> &f,
            std::vector<double> x, double h = 1e-5) {
    std::vector<double> g(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double x0 = x[k];
        x[k] = x0 + h;
        const double fp = f(x);
        x[k] = x0 - h;
        const double fm = f(x);
        x[k] = x0;
        g[k] = (fp - fm) / (2.0 * h);
    }
    return g;
}

/// Largest |a - b| / max(1, |b|).
inline double max_rel_err(std::span<const double> a, std::span<const double> b) {
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        worst = std::max(worst, std::abs(a[k] - b[k]) / std::max(1.0, std::abs(b[k])));
    }
    return worst;
}

} // namespace fixtures
