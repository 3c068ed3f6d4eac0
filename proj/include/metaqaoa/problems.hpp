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
 * Max-Cut and Sherrington-Kirkpatrick instances in Ising form, exhaustive
 * ground-state oracles and approximation ratios.
 *
 * Bit conventions: bit value 0 is spin +1, bit value 1 is spin -1, and spin
 * k is bit k of a basis index (matching the simulator's little-endian order).
 */
#pragma once

#include "error.hpp"
#include "random.hpp"
#include "sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace metaqaoa::problems {

using sim::Coupling;

inline constexpr std::size_t max_spins = sim::max_qubits;

struct Edge {
    std::size_t i;
    std::size_t j;
    double weight{1.0};

    friend bool operator==(const Edge &, const Edge &) = default;
};

/// Simple undirected graph with i < j edges and no duplicates.
struct Graph {
    std::size_t num_nodes{0};
    std::vector<Edge> edges;

    void validate() const {
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto &e : edges) {
            METAQAOA_REQUIRE(e.i < e.j, IndexError,
                             "edges must satisfy i < j (no self-loops)");
            METAQAOA_REQUIRE(e.j < num_nodes, IndexError,
                             "edge endpoint out of range");
            METAQAOA_REQUIRE(seen.emplace(e.i, e.j).second, IndexError,
                             "duplicate edge");
        }
    }
};

enum class ProblemKind { MaxCut, SK };
enum class SkDistribution { PlusMinusOne, StandardNormal };

[[nodiscard]] inline std::string to_string(ProblemKind k) {
    return k == ProblemKind::MaxCut ? "MaxCut" : "SK";
}

[[nodiscard]] inline ProblemKind parse_problem_kind(std::string_view s) {
    if (s == "MaxCut" || s == "maxcut") {
        return ProblemKind::MaxCut;
    }
    if (s == "SK" || s == "sk") {
        return ProblemKind::SK;
    }
    throw ConfigError("unknown problem kind '" + std::string(s) + "'");
}

/**
 * @brief Cost Hamiltonian sum J_ij Z_i Z_j plus a constant offset.
 *
 * For Max-Cut the cut value of z is offset - energy(z)/2.
 */
struct IsingInstance {
    ProblemKind kind{ProblemKind::MaxCut};
    std::size_t num_spins{0};
    std::vector<Coupling> couplings;
    double offset{0.0};
    std::uint64_t seed{0};
    std::optional<double> p_edge;

    /// Sum of |J_ij|; bounds |<H_C>| for every state.
    [[nodiscard]] double normalizer() const noexcept {
        double acc = 0.0;
        for (const auto &c : couplings) {
            acc += std::abs(c.weight);
        }
        return acc;
    }

    void validate() const {
        METAQAOA_REQUIRE(num_spins >= 1, DomainError,
                         "instance needs at least one spin");
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (const auto &c : couplings) {
            METAQAOA_REQUIRE(c.i < c.j && c.j < num_spins, IndexError,
                             "coupling indices must satisfy i < j < N");
            METAQAOA_REQUIRE(seen.emplace(c.i, c.j).second, IndexError,
                             "duplicate coupling");
            METAQAOA_REQUIRE(std::isfinite(c.weight), DomainError,
                             "non-finite coupling");
        }
    }

    friend bool operator==(const IsingInstance &,
                           const IsingInstance &) = default;
};

/// Each pair (i, j), i < j, kept independently with probability p_edge.
[[nodiscard]] inline Graph gen_erdos_renyi(std::size_t n, double p_edge,
                                           std::uint64_t seed) {
    METAQAOA_REQUIRE(p_edge >= 0.0 && p_edge <= 1.0, DomainError,
                     "edge probability must lie in [0, 1]");
    METAQAOA_REQUIRE(n >= 2, DomainError, "graph needs at least two nodes");
    Rng rng(seed);
    std::bernoulli_distribution keep(p_edge);
    Graph g{n, {}};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (keep(rng)) {
                g.edges.push_back({i, j, 1.0});
            }
        }
    }
    return g;
}

/// Fully connected SK instance with couplings J_ij / sqrt(N).
[[nodiscard]] inline IsingInstance
gen_sk_instance(std::size_t n, std::uint64_t seed,
                SkDistribution dist = SkDistribution::PlusMinusOne) {
    METAQAOA_REQUIRE(n >= 2, DomainError, "SK instance needs at least two spins");
    Rng rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    IsingInstance inst;
    inst.kind = ProblemKind::SK;
    inst.num_spins = n;
    inst.seed = seed;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double J = dist == SkDistribution::PlusMinusOne
                                 ? (coin(rng) ? 1.0 : -1.0)
                                 : normal(rng);
            inst.couplings.push_back({i, j, J * scale});
        }
    }
    return inst;
}

/// J_ij = w_ij, offset = sum(w)/2.
[[nodiscard]] inline IsingInstance maxcut_to_ising(const Graph &graph) {
    graph.validate();
    IsingInstance inst;
    inst.kind = ProblemKind::MaxCut;
    inst.num_spins = graph.num_nodes;
    double total = 0.0;
    for (const auto &e : graph.edges) {
        inst.couplings.push_back({e.i, e.j, e.weight});
        total += e.weight;
    }
    inst.offset = 0.5 * total;
    return inst;
}

/// One byte per spin, 0 or 1.
using Bitstring = std::vector<std::uint8_t>;

/// Parses "0110"; character k is spin k.
[[nodiscard]] inline Bitstring parse_bitstring(std::string_view s) {
    Bitstring z;
    z.reserve(s.size());
    for (const char c : s) {
        METAQAOA_REQUIRE(c == '0' || c == '1', DomainError,
                         "bitstring characters must be '0' or '1'");
        z.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return z;
}

[[nodiscard]] inline std::string format_bitstring(const Bitstring &z) {
    std::string s;
    for (const auto b : z) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

[[nodiscard]] inline Bitstring index_to_bitstring(std::uint64_t index,
                                                  std::size_t n) {
    Bitstring z(n);
    for (std::size_t k = 0; k < n; ++k) {
        z[k] = static_cast<std::uint8_t>((index >> k) & 1U);
    }
    return z;
}

/// sum J_ij s_i s_j with s = +1 for bit 0 and -1 for bit 1.
[[nodiscard]] inline double ising_energy(const IsingInstance &inst,
                                         const Bitstring &z) {
    METAQAOA_REQUIRE(z.size() == inst.num_spins, ShapeError,
                     "bitstring length " + std::to_string(z.size()) +
                         " != num_spins " + std::to_string(inst.num_spins));
    double e = 0.0;
    for (const auto &c : inst.couplings) {
        e += (z[c.i] == z[c.j]) ? c.weight : -c.weight;
    }
    return e;
}

/// Ising energy of the basis state with the given index.
[[nodiscard]] inline double energy_of_index(const IsingInstance &inst,
                                            std::uint64_t index) {
    double e = 0.0;
    for (const auto &c : inst.couplings) {
        const bool odd = (((index >> c.i) ^ (index >> c.j)) & 1U) != 0U;
        e += odd ? -c.weight : c.weight;
    }
    return e;
}

/// Cut weight of z for a Max-Cut instance.
[[nodiscard]] inline double cut_value(const IsingInstance &inst,
                                      const Bitstring &z) {
    return inst.offset - 0.5 * ising_energy(inst, z);
}

/// Energy diagonal of H_C over all 2^N basis states.
[[nodiscard]] inline std::vector<double>
energy_diagonal(const IsingInstance &inst) {
    return sim::observable_diagonal(inst.num_spins, sim::Observable(inst.couplings));
}

struct OracleResult {
    Bitstring best_bitstring;
    Bitstring worst_bitstring;
    double best_energy{0.0};
    double worst_energy{0.0};
    /// Max-Cut only; NaN for SK.
    double best_cut{std::numeric_limits<double>::quiet_NaN()};

    [[nodiscard]] bool degenerate() const noexcept {
        return best_energy == worst_energy;
    }
};

/**
 * @brief Exact minimum and maximum energy by exhaustive enumeration.
 *
 * Spin N-1 is pinned to +1 (global-flip symmetry) and the remaining
 * 2^(N-1) configurations are visited in Gray-code order, updating local
 * fields in O(N) per step.
 */
[[nodiscard]] inline OracleResult brute_force_optimum(const IsingInstance &inst) {
    inst.validate();
    const std::size_t n = inst.num_spins;
    METAQAOA_REQUIRE(n <= max_spins, CapacityError,
                     "brute force limited to " + std::to_string(max_spins) +
                         " spins, got " + std::to_string(n));
    std::vector<double> J(n * n, 0.0);
    for (const auto &c : inst.couplings) {
        J[c.i * n + c.j] += c.weight;
        J[c.j * n + c.i] += c.weight;
    }
    std::vector<double> spins(n, 1.0);
    // field[k] = sum_j J_kj s_j
    std::vector<double> field(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            field[k] += J[k * n + j];
        }
    }
    double energy = 0.0;
    for (const auto &c : inst.couplings) {
        energy += c.weight;
    }

    std::uint64_t state = 0;
    std::uint64_t best_state = 0;
    std::uint64_t worst_state = 0;
    double best = energy;
    double worst = energy;
    const std::size_t free_spins = n - 1;
    const std::uint64_t count = std::uint64_t{1} << free_spins;
    for (std::uint64_t step = 1; step < count; ++step) {
        const auto k = static_cast<std::size_t>(std::countr_zero(step));
        const double s_old = spins[k];
        energy -= 2.0 * s_old * field[k];
        spins[k] = -s_old;
        for (std::size_t j = 0; j < n; ++j) {
            field[j] -= 2.0 * J[j * n + k] * s_old;
        }
        state ^= std::uint64_t{1} << k;
        if (energy < best) {
            best = energy;
            best_state = state;
        }
        if (energy > worst) {
            worst = energy;
            worst_state = state;
        }
    }

    OracleResult out;
    out.best_bitstring = index_to_bitstring(best_state, n);
    out.worst_bitstring = index_to_bitstring(worst_state, n);
    // Recompute from scratch so accumulated rounding never leaks out.
    out.best_energy = ising_energy(inst, out.best_bitstring);
    out.worst_energy = ising_energy(inst, out.worst_bitstring);
    if (inst.kind == ProblemKind::MaxCut) {
        out.best_cut = inst.offset - 0.5 * out.best_energy;
    }
    return out;
}

/// Random instance distribution used for training and benchmarks.
struct InstanceFamily {
    ProblemKind kind{ProblemKind::MaxCut};
    double p_edge{3.0 / 7.0};
    SkDistribution dist{SkDistribution::PlusMinusOne};
};

/**
 * @brief Draws one instance of `family` on n spins.
 *
 * Max-Cut graphs without edges are degenerate; they are redrawn from a
 * derived seed, and the seed actually used is stored on the instance so
 * that regenerating from it reproduces the same couplings.
 */
[[nodiscard]] inline IsingInstance generate_instance(const InstanceFamily &family,
                                                     std::size_t n,
                                                     std::uint64_t seed) {
    if (family.kind == ProblemKind::SK) {
        return gen_sk_instance(n, seed, family.dist);
    }
    METAQAOA_REQUIRE(family.p_edge > 0.0, ConfigError,
                     "p_edge = 0 yields only empty (degenerate) graphs");
    std::uint64_t s = seed;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        auto inst = maxcut_to_ising(gen_erdos_renyi(n, family.p_edge, s));
        if (!inst.couplings.empty()) {
            inst.seed = s;
            inst.p_edge = family.p_edge;
            return inst;
        }
        s = mix64(s + 1);
    }
    throw ConfigError("could not draw a non-empty graph; p_edge too small");
}

/// Slack allowed outside [0, 1] before a ratio is treated as inconsistent.
inline constexpr double ratio_tolerance = 1e-9;

/**
 * @brief Approximation ratio of an expected energy <H_C>.
 *
 * Max-Cut: (offset - <H_C>/2) / best_cut. SK: (worst - <H_C>) / (worst -
 * best), mapping the ground state to 1 and the anti-ground state to 0.
 * Degenerate oracles (best == worst) yield 1.0. Values within
 * ratio_tolerance of [0, 1] are clamped; values further out mean the
 * oracle belongs to a different instance and raise DomainError.
 */
[[nodiscard]] inline double approx_ratio(double expected_energy,
                                         const IsingInstance &inst,
                                         const OracleResult &oracle) {
    if (oracle.degenerate()) {
        return 1.0;
    }
    double r = 0.0;
    if (inst.kind == ProblemKind::MaxCut) {
        r = (inst.offset - 0.5 * expected_energy) / oracle.best_cut;
    } else {
        r = (oracle.worst_energy - expected_energy) /
            (oracle.worst_energy - oracle.best_energy);
    }
    METAQAOA_REQUIRE(r >= -ratio_tolerance && r <= 1.0 + ratio_tolerance,
                     DomainError,
                     "approximation ratio " + std::to_string(r) +
                         " outside [0, 1]; oracle/instance mismatch?");
    return std::clamp(r, 0.0, 1.0);
}

} // namespace metaqaoa::problems
