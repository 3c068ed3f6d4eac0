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
 * Dense statevector simulation of few-qubit circuits.
 *
 * Amplitudes are stored little-endian: qubit q is bit q of the basis index.
 * The gate set is {H, RX, RY, RZ, CNOT, ZZ} with
 *   R_P(t) = exp(-i t/2 P)   for P in {X, Y, Z},
 *   ZZ(t)  = exp(-i t Z_i Z_j).
 */
#pragma once

#include "error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace metaqaoa::sim {

using complex_t = std::complex<double>;

/// Largest register the dense simulator accepts (2^24 amplitudes, ~256 MB).
inline constexpr std::size_t max_qubits = 24;

/// Weighted two-body term w * Z_i Z_j.
struct Coupling {
    std::size_t i;
    std::size_t j;
    double weight;

    friend bool operator==(const Coupling &, const Coupling &) = default;
};

/// Weighted one-body term w * Z_q.
struct ZTerm {
    std::size_t qubit;
    double weight;
};

/// Diagonal observable sum_k w_k Z_ik Z_jk + sum_m w_m Z_qm.
struct Observable {
    std::vector<Coupling> zz;
    std::vector<ZTerm> z;

    Observable() = default;
    Observable(std::vector<Coupling> couplings) : zz(std::move(couplings)) {}
    Observable(std::vector<Coupling> couplings, std::vector<ZTerm> fields)
        : zz(std::move(couplings)), z(std::move(fields)) {}
};

namespace detail {
inline void check_capacity(std::size_t n) {
    METAQAOA_REQUIRE(n >= 1 && n <= max_qubits, CapacityError,
                     "qubit count " + std::to_string(n) +
                         " outside supported range [1, " +
                         std::to_string(max_qubits) + "]");
}

/// +1 for bit 0, -1 for bit 1.
inline double spin(std::size_t index, std::size_t qubit) {
    return ((index >> qubit) & 1U) ? -1.0 : 1.0;
}
} // namespace detail

/**
 * @brief Complex amplitude array over 2^n computational basis states.
 */
class StateVector {
  public:
    /// |0...0> on n qubits.
    explicit StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
        detail::check_capacity(num_qubits);
        amplitudes_.assign(std::size_t{1} << num_qubits, complex_t{0.0, 0.0});
        amplitudes_[0] = 1.0;
    }

    /// Wraps existing amplitudes; the length must be a power of two.
    explicit StateVector(std::vector<complex_t> amplitudes)
        : amplitudes_(std::move(amplitudes)) {
        const auto len = amplitudes_.size();
        METAQAOA_REQUIRE(len >= 2 && std::has_single_bit(len), ShapeError,
                         "amplitude count must be a power of two >= 2");
        num_qubits_ = static_cast<std::size_t>(std::countr_zero(len));
        detail::check_capacity(num_qubits_);
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t dimension() const noexcept {
        return amplitudes_.size();
    }
    [[nodiscard]] std::span<const complex_t> amplitudes() const noexcept {
        return amplitudes_;
    }
    [[nodiscard]] std::span<complex_t> amplitudes() noexcept {
        return amplitudes_;
    }
    [[nodiscard]] const complex_t &operator[](std::size_t k) const {
        return amplitudes_[k];
    }
    [[nodiscard]] complex_t &operator[](std::size_t k) { return amplitudes_[k]; }

    [[nodiscard]] double norm_squared() const noexcept {
        double acc = 0.0;
        for (const auto &a : amplitudes_) {
            acc += std::norm(a);
        }
        return acc;
    }

    void check_qubit(std::size_t q) const {
        METAQAOA_REQUIRE(q < num_qubits_, IndexError,
                         "qubit index " + std::to_string(q) +
                             " out of range for " +
                             std::to_string(num_qubits_) + "-qubit state");
    }

    /// Applies the 2x2 matrix [[m00, m01], [m10, m11]] to qubit q.
    void apply_matrix(std::size_t q, complex_t m00, complex_t m01,
                      complex_t m10, complex_t m11) {
        check_qubit(q);
        const std::size_t stride = std::size_t{1} << q;
        const std::size_t dim = amplitudes_.size();
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t k = 0; k < stride; ++k) {
                const std::size_t i0 = base + k;
                const std::size_t i1 = i0 + stride;
                const complex_t a0 = amplitudes_[i0];
                const complex_t a1 = amplitudes_[i1];
                amplitudes_[i0] = m00 * a0 + m01 * a1;
                amplitudes_[i1] = m10 * a0 + m11 * a1;
            }
        }
    }

    /// Multiplies every amplitude by the matching entry of a diagonal.
    void apply_diagonal(std::span<const double> diag) {
        METAQAOA_REQUIRE(diag.size() == amplitudes_.size(), ShapeError,
                         "diagonal length does not match state dimension");
        for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
            amplitudes_[k] *= diag[k];
        }
    }

  private:
    std::size_t num_qubits_{0};
    std::vector<complex_t> amplitudes_;
};

/// Inner product <a|b>.
[[nodiscard]] inline complex_t inner_product(const StateVector &a,
                                             const StateVector &b) {
    METAQAOA_REQUIRE(a.dimension() == b.dimension(), ShapeError,
                     "inner product of states with different dimensions");
    complex_t acc{0.0, 0.0};
    const auto x = a.amplitudes();
    const auto y = b.amplitudes();
    for (std::size_t k = 0; k < x.size(); ++k) {
        acc += std::conj(x[k]) * y[k];
    }
    return acc;
}

/// |+>^n, every amplitude 2^(-n/2).
[[nodiscard]] inline StateVector init_plus_state(std::size_t n) {
    detail::check_capacity(n);
    const double amp = std::pow(2.0, -0.5 * static_cast<double>(n));
    return StateVector(
        std::vector<complex_t>(std::size_t{1} << n, complex_t{amp, 0.0}));
}

enum class GateKind { H, RX, RY, RZ, CNOT, ZZ };

[[nodiscard]] constexpr bool is_parametric(GateKind kind) noexcept {
    return kind != GateKind::H && kind != GateKind::CNOT;
}

[[nodiscard]] constexpr bool is_two_qubit(GateKind kind) noexcept {
    return kind == GateKind::CNOT || kind == GateKind::ZZ;
}

/// Coefficient a in U(t) = exp(-i a t G) for the gate's Pauli generator G.
[[nodiscard]] constexpr double generator_scale(GateKind kind) noexcept {
    return kind == GateKind::ZZ ? 1.0 : 0.5;
}

[[nodiscard]] inline std::string to_string(GateKind kind) {
    switch (kind) {
    case GateKind::H:
        return "H";
    case GateKind::RX:
        return "RX";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::ZZ:
        return "ZZ";
    }
    return "?";
}

/**
 * @brief One gate instance. For CNOT, `q0` is the control and `q1` the
 * target; for ZZ the pair is unordered.
 */
struct Gate {
    GateKind kind{GateKind::H};
    std::size_t q0{0};
    std::size_t q1{0};
    double angle{0.0};

    static Gate h(std::size_t q) { return {GateKind::H, q, q, 0.0}; }
    static Gate rx(std::size_t q, double t) { return {GateKind::RX, q, q, t}; }
    static Gate ry(std::size_t q, double t) { return {GateKind::RY, q, q, t}; }
    static Gate rz(std::size_t q, double t) { return {GateKind::RZ, q, q, t}; }
    static Gate cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, control, target, 0.0};
    }
    static Gate zz(std::size_t i, std::size_t j, double t) {
        return {GateKind::ZZ, i, j, t};
    }
};

namespace detail {
inline void check_gate(const StateVector &state, const Gate &gate) {
    state.check_qubit(gate.q0);
    if (is_two_qubit(gate.kind)) {
        state.check_qubit(gate.q1);
        METAQAOA_REQUIRE(gate.q0 != gate.q1, IndexError,
                         to_string(gate.kind) +
                             " requires two distinct qubit indices");
    }
}

inline void apply_cnot(StateVector &state, std::size_t control,
                       std::size_t target) {
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    auto amps = state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
        if ((k & cmask) && !(k & tmask)) {
            std::swap(amps[k], amps[k | tmask]);
        }
    }
}

inline void apply_zz_phase(StateVector &state, std::size_t i, std::size_t j,
                           double angle) {
    const complex_t same = std::polar(1.0, -angle);
    const complex_t diff = std::polar(1.0, angle);
    auto amps = state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const bool odd = (((k >> i) ^ (k >> j)) & 1U) != 0U;
        amps[k] *= odd ? diff : same;
    }
}
} // namespace detail

/// Applies `gate` in place; `adjoint` applies its inverse.
inline void apply_gate_inplace(StateVector &state, const Gate &gate,
                               bool adjoint = false) {
    detail::check_gate(state, gate);
    const double t = adjoint ? -gate.angle : gate.angle;
    const double c = std::cos(0.5 * t);
    const double s = std::sin(0.5 * t);
    switch (gate.kind) {
    case GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        state.apply_matrix(gate.q0, r, r, r, -r);
        break;
    }
    case GateKind::RX:
        state.apply_matrix(gate.q0, c, {0.0, -s}, {0.0, -s}, c);
        break;
    case GateKind::RY:
        state.apply_matrix(gate.q0, c, -s, s, c);
        break;
    case GateKind::RZ:
        state.apply_matrix(gate.q0, {c, -s}, 0.0, 0.0, {c, s});
        break;
    case GateKind::CNOT:
        detail::apply_cnot(state, gate.q0, gate.q1);
        break;
    case GateKind::ZZ:
        detail::apply_zz_phase(state, gate.q0, gate.q1, t);
        break;
    }
}

/// Value-semantics form of apply_gate_inplace.
[[nodiscard]] inline StateVector apply_gate(StateVector state,
                                            const Gate &gate) {
    apply_gate_inplace(state, gate);
    return state;
}

/// Applies the Pauli generator G of a parametric gate (X, Y, Z or Z_iZ_j).
inline void apply_generator(StateVector &state, const Gate &gate) {
    detail::check_gate(state, gate);
    switch (gate.kind) {
    case GateKind::RX:
        state.apply_matrix(gate.q0, 0.0, 1.0, 1.0, 0.0);
        break;
    case GateKind::RY:
        state.apply_matrix(gate.q0, 0.0, {0.0, -1.0}, {0.0, 1.0}, 0.0);
        break;
    case GateKind::RZ:
        state.apply_matrix(gate.q0, 1.0, 0.0, 0.0, -1.0);
        break;
    case GateKind::ZZ: {
        auto amps = state.amplitudes();
        for (std::size_t k = 0; k < amps.size(); ++k) {
            if ((((k >> gate.q0) ^ (k >> gate.q1)) & 1U) != 0U) {
                amps[k] = -amps[k];
            }
        }
        break;
    }
    default:
        throw ConfigError(to_string(gate.kind) + " has no generator");
    }
}

namespace detail {
inline void check_observable(std::size_t n, const Observable &obs) {
    for (const auto &t : obs.zz) {
        METAQAOA_REQUIRE(t.i < n && t.j < n, IndexError,
                         "coupling index out of range");
        METAQAOA_REQUIRE(t.i != t.j, IndexError,
                         "coupling indices must be distinct");
    }
    for (const auto &t : obs.z) {
        METAQAOA_REQUIRE(t.qubit < n, IndexError, "Z index out of range");
    }
}
} // namespace detail

/// Diagonal of the observable in the computational basis.
[[nodiscard]] inline std::vector<double>
observable_diagonal(std::size_t num_qubits, const Observable &obs) {
    detail::check_capacity(num_qubits);
    detail::check_observable(num_qubits, obs);
    std::vector<double> diag(std::size_t{1} << num_qubits, 0.0);
    for (const auto &t : obs.zz) {
        for (std::size_t k = 0; k < diag.size(); ++k) {
            const bool odd = (((k >> t.i) ^ (k >> t.j)) & 1U) != 0U;
            diag[k] += odd ? -t.weight : t.weight;
        }
    }
    for (const auto &t : obs.z) {
        for (std::size_t k = 0; k < diag.size(); ++k) {
            diag[k] += t.weight * detail::spin(k, t.qubit);
        }
    }
    return diag;
}

/// <state| sum w_ij Z_i Z_j |state>.
[[nodiscard]] inline double
expectation_zz(const StateVector &state, std::span<const Coupling> couplings) {
    for (const auto &t : couplings) {
        state.check_qubit(t.i);
        state.check_qubit(t.j);
        METAQAOA_REQUIRE(t.i != t.j, IndexError,
                         "coupling indices must be distinct");
    }
    const auto amps = state.amplitudes();
    double total = 0.0;
    for (const auto &t : couplings) {
        double acc = 0.0;
        for (std::size_t k = 0; k < amps.size(); ++k) {
            const bool odd = (((k >> t.i) ^ (k >> t.j)) & 1U) != 0U;
            const double p = std::norm(amps[k]);
            acc += odd ? -p : p;
        }
        total += t.weight * acc;
    }
    return total;
}

/// <state| Z_qubit |state>.
[[nodiscard]] inline double expectation_z(const StateVector &state,
                                          std::size_t qubit) {
    state.check_qubit(qubit);
    const auto amps = state.amplitudes();
    double acc = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        acc += detail::spin(k, qubit) * std::norm(amps[k]);
    }
    return acc;
}

/// Expectation of a general diagonal observable.
[[nodiscard]] inline double expectation(const StateVector &state,
                                        const Observable &obs) {
    double total = expectation_zz(state, obs.zz);
    for (const auto &t : obs.z) {
        total += t.weight * expectation_z(state, t.qubit);
    }
    return total;
}

/**
 * @brief Draws `shots` basis indices from the Born distribution |a_z|^2.
 *
 * Bit q of each returned index is the measured value of qubit q. The result
 * is a pure function of (state, shots, rng state).
 */
[[nodiscard]] inline std::vector<std::uint64_t>
sample_bitstrings(const StateVector &state, std::size_t shots,
                  std::mt19937_64 &rng) {
    METAQAOA_REQUIRE(shots >= 1, DomainError, "shots must be >= 1");
    const auto amps = state.amplitudes();
    std::vector<double> cumulative(amps.size());
    double running = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        running += std::norm(amps[k]);
        cumulative[k] = running;
    }
    std::uniform_real_distribution<double> uniform(0.0, running);
    std::vector<std::uint64_t> out;
    out.reserve(shots);
    for (std::size_t s = 0; s < shots; ++s) {
        const double u = uniform(rng);
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) {
            --it;
        }
        out.push_back(static_cast<std::uint64_t>(it - cumulative.begin()));
    }
    return out;
}

/// Renders a basis index as a bitstring, character q holding qubit q.
[[nodiscard]] inline std::string to_bitstring(std::uint64_t index,
                                              std::size_t num_qubits) {
    std::string s(num_qubits, '0');
    for (std::size_t q = 0; q < num_qubits; ++q) {
        if ((index >> q) & 1U) {
            s[q] = '1';
        }
    }
    return s;
}

} // namespace metaqaoa::sim
