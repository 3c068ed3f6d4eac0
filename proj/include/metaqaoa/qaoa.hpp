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
 * Depth-p QAOA ansatz for Ising cost Hamiltonians.
 *
 * |Phi(gamma, beta)> = prod_l [ RX(2 beta_l)^{(x) N} prod_ij ZZ(gamma_l J_ij) ]
 * |+>^N. Flattened parameter vectors are ordered (gamma_1..gamma_p,
 * beta_1..beta_p).
 */
#pragma once

#include "circuit.hpp"
#include "error.hpp"
#include "problems.hpp"
#include "sim.hpp"

#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace metaqaoa::qaoa {

using problems::IsingInstance;
using sim::StateVector;

struct QaoaParams {
    std::vector<double> gamma;
    std::vector<double> beta;

    QaoaParams() = default;
    QaoaParams(std::vector<double> g, std::vector<double> b)
        : gamma(std::move(g)), beta(std::move(b)) {
        validate();
    }

    /// Zero angles at depth p.
    static QaoaParams zeros(std::size_t p) {
        return {std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)};
    }

    static QaoaParams from_flat(std::span<const double> theta) {
        METAQAOA_REQUIRE(theta.size() % 2 == 0 && !theta.empty(), ShapeError,
                         "flattened QAOA parameters must have even length 2p");
        const auto p = theta.size() / 2;
        return {std::vector<double>(theta.begin(), theta.begin() + p),
                std::vector<double>(theta.begin() + p, theta.end())};
    }

    [[nodiscard]] std::size_t depth() const noexcept { return gamma.size(); }

    [[nodiscard]] std::vector<double> flat() const {
        std::vector<double> out(gamma);
        out.insert(out.end(), beta.begin(), beta.end());
        return out;
    }

    void validate() const {
        METAQAOA_REQUIRE(gamma.size() == beta.size(), ShapeError,
                         "gamma and beta must have equal length");
        for (const double v : gamma) {
            METAQAOA_REQUIRE(std::isfinite(v), DomainError, "non-finite gamma");
        }
        for (const double v : beta) {
            METAQAOA_REQUIRE(std::isfinite(v), DomainError, "non-finite beta");
        }
    }
};

inline void check_size(const IsingInstance &inst) {
    METAQAOA_REQUIRE(inst.num_spins >= 1 && inst.num_spins <= sim::max_qubits,
                     CapacityError,
                     "QAOA simulation limited to " +
                         std::to_string(sim::max_qubits) + " qubits, got " +
                         std::to_string(inst.num_spins));
}

/**
 * @brief Gate-level QAOA circuit with 2p shared slots.
 *
 * Slot l drives every ZZ gate of layer l with coefficient J_ij; slot p + l
 * drives every RX of layer l with coefficient 2.
 */
[[nodiscard]] inline sim::Circuit build_qaoa_circuit(const IsingInstance &inst,
                                                     const QaoaParams &params) {
    params.validate();
    check_size(inst);
    const std::size_t p = params.depth();
    const std::size_t n = inst.num_spins;
    sim::Circuit circuit(n, 2 * p);
    for (std::size_t l = 0; l < p; ++l) {
        for (const auto &c : inst.couplings) {
            circuit.add(sim::Gate::zz(c.i, c.j, 0.0), l, c.weight);
        }
        for (std::size_t q = 0; q < n; ++q) {
            circuit.add(sim::Gate::rx(q, 0.0), p + l, 2.0);
        }
    }
    circuit.bind(params.flat());
    return circuit;
}

[[nodiscard]] inline StateVector build_qaoa_state(const IsingInstance &inst,
                                                  const QaoaParams &params) {
    const auto circuit = build_qaoa_circuit(inst, params);
    return sim::execute(circuit, sim::init_plus_state(inst.num_spins));
}

/// <Phi|H_C|Phi>, offset excluded.
[[nodiscard]] inline double qaoa_cost(const IsingInstance &inst,
                                      const QaoaParams &params) {
    return sim::expectation_zz(build_qaoa_state(inst, params), inst.couplings);
}

/// Mean Ising energy over `shots` Born samples of the QAOA state.
[[nodiscard]] inline double qaoa_cost_sampled(const IsingInstance &inst,
                                              const QaoaParams &params,
                                              std::size_t shots,
                                              std::mt19937_64 &rng) {
    const auto state = build_qaoa_state(inst, params);
    const auto samples = sim::sample_bitstrings(state, shots, rng);
    double acc = 0.0;
    for (const auto idx : samples) {
        acc += problems::energy_of_index(inst, idx);
    }
    return acc / static_cast<double>(shots);
}

/// Exact gradient (length 2p) by per-gate parameter shift.
[[nodiscard]] inline std::vector<double>
qaoa_gradient_paramshift(const IsingInstance &inst, const QaoaParams &params) {
    const auto circuit = build_qaoa_circuit(inst, params);
    return sim::parameter_shift_gradient(
        circuit, sim::init_plus_state(inst.num_spins),
        sim::Observable(inst.couplings));
}

/// Exact gradient (length 2p) by adjoint differentiation of the gate circuit.
[[nodiscard]] inline std::vector<double>
qaoa_gradient_adjoint(const IsingInstance &inst, const QaoaParams &params) {
    const auto circuit = build_qaoa_circuit(inst, params);
    return sim::adjoint_gradient(circuit, sim::init_plus_state(inst.num_spins),
                                 sim::Observable(inst.couplings));
}

enum class GradientMethod { ParameterShift, Adjoint };

/**
 * @brief Cached fast path for repeated evaluation on one instance.
 *
 * Each cost layer is applied as a single diagonal phase exp(-i gamma D)
 * with D the precomputed energy diagonal, which equals the product of the
 * layer's commuting ZZ gates. Gradients use the same adjoint sweep as
 * sim::adjoint_gradient with layer-level generators D and sum_k X_k.
 */
class QaoaEvaluator {
  public:
    explicit QaoaEvaluator(const IsingInstance &inst)
        : num_qubits_(inst.num_spins) {
        check_size(inst);
        inst.validate();
        diag_ = problems::energy_diagonal(inst);
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::span<const double> diagonal() const noexcept {
        return diag_;
    }

    [[nodiscard]] StateVector state(std::span<const double> theta) const {
        const auto p = depth_of(theta);
        StateVector psi = sim::init_plus_state(num_qubits_);
        for (std::size_t l = 0; l < p; ++l) {
            apply_phase(psi, theta[l]);
            apply_mixer(psi, theta[p + l]);
        }
        return psi;
    }

    [[nodiscard]] double cost(std::span<const double> theta) const {
        return diagonal_expectation(state(theta));
    }

    /// Returns the cost and writes d cost / d theta into `grad`.
    double cost_and_gradient(std::span<const double> theta,
                             std::span<double> grad) const {
        const auto p = depth_of(theta);
        METAQAOA_REQUIRE(grad.size() == theta.size(), ShapeError,
                         "gradient buffer has wrong length");
        StateVector phi = state(theta);
        const double value = diagonal_expectation(phi);
        StateVector lambda = phi;
        lambda.apply_diagonal(diag_);
        for (std::size_t l = p; l-- > 0;) {
            grad[p + l] = 2.0 * mixer_generator_overlap(lambda, phi);
            apply_mixer(phi, -theta[p + l]);
            apply_mixer(lambda, -theta[p + l]);
            grad[l] = 2.0 * phase_generator_overlap(lambda, phi);
            apply_phase(phi, -theta[l]);
            apply_phase(lambda, -theta[l]);
        }
        return value;
    }

    [[nodiscard]] std::vector<double>
    gradient(std::span<const double> theta) const {
        std::vector<double> g(theta.size());
        (void)cost_and_gradient(theta, g);
        return g;
    }

  private:
    static std::size_t depth_of(std::span<const double> theta) {
        METAQAOA_REQUIRE(!theta.empty() && theta.size() % 2 == 0, ShapeError,
                         "flattened QAOA parameters must have even length 2p");
        return theta.size() / 2;
    }

    [[nodiscard]] double diagonal_expectation(const StateVector &psi) const {
        double acc = 0.0;
        const auto amps = psi.amplitudes();
        for (std::size_t k = 0; k < amps.size(); ++k) {
            acc += diag_[k] * std::norm(amps[k]);
        }
        return acc;
    }

    void apply_phase(StateVector &psi, double gamma) const {
        auto amps = psi.amplitudes();
        for (std::size_t k = 0; k < amps.size(); ++k) {
            amps[k] *= std::polar(1.0, -gamma * diag_[k]);
        }
    }

    void apply_mixer(StateVector &psi, double beta) const {
        const double c = std::cos(beta);
        const double s = std::sin(beta);
        for (std::size_t q = 0; q < num_qubits_; ++q) {
            psi.apply_matrix(q, c, {0.0, -s}, {0.0, -s}, c);
        }
    }

    // Im <lambda| D |phi>
    [[nodiscard]] double phase_generator_overlap(const StateVector &lambda,
                                                 const StateVector &phi) const {
        const auto a = lambda.amplitudes();
        const auto b = phi.amplitudes();
        double acc = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            acc += diag_[k] * std::imag(std::conj(a[k]) * b[k]);
        }
        return acc;
    }

    // Im <lambda| sum_q X_q |phi>
    [[nodiscard]] double mixer_generator_overlap(const StateVector &lambda,
                                                 const StateVector &phi) const {
        const auto a = lambda.amplitudes();
        const auto b = phi.amplitudes();
        double acc = 0.0;
        for (std::size_t q = 0; q < num_qubits_; ++q) {
            const std::size_t mask = std::size_t{1} << q;
            for (std::size_t k = 0; k < a.size(); ++k) {
                acc += std::imag(std::conj(a[k]) * b[k ^ mask]);
            }
        }
        return acc;
    }

    std::size_t num_qubits_;
    std::vector<double> diag_;
};

} // namespace metaqaoa::qaoa
