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
 * Parameterized circuits with shared parameter slots, and exact gradients
 * of diagonal observables by adjoint differentiation and parameter shift.
 */
#pragma once

#include "error.hpp"
#include "sim.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace metaqaoa::sim {

/// Gate angle = coefficient * params[slot].
struct ParamBinding {
    std::size_t slot;
    double coefficient;
};

/**
 * @brief Ordered gate list whose parametric angles may be tied to shared
 * parameter slots.
 *
 * A slot can drive any number of gates, each through its own linear
 * coefficient; one QAOA mixer angle, for example, drives N RX rotations
 * with coefficient 2.
 */
class Circuit {
  public:
    Circuit(std::size_t num_qubits, std::size_t num_params)
        : num_qubits_(num_qubits), num_params_(num_params) {
        detail::check_capacity(num_qubits);
    }

    /// Appends a gate with a fixed angle.
    void add(const Gate &gate) {
        check_indices(gate);
        gates_.push_back(gate);
        bindings_.emplace_back(std::nullopt);
    }

    /// Appends a gate whose angle tracks coefficient * params[slot].
    void add(const Gate &gate, std::size_t slot, double coefficient) {
        check_indices(gate);
        gates_.push_back(gate);
        bindings_.emplace_back(ParamBinding{slot, coefficient});
    }

    [[nodiscard]] std::size_t num_qubits() const noexcept { return num_qubits_; }
    [[nodiscard]] std::size_t num_params() const noexcept { return num_params_; }
    [[nodiscard]] std::size_t size() const noexcept { return gates_.size(); }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept {
        return gates_;
    }
    [[nodiscard]] const std::optional<ParamBinding> &
    binding(std::size_t position) const {
        return bindings_.at(position);
    }
    [[nodiscard]] Gate &gate(std::size_t position) { return gates_.at(position); }

    /// Gate positions and coefficients driven by `slot`.
    [[nodiscard]] std::vector<std::pair<std::size_t, double>>
    slot_members(std::size_t slot) const {
        std::vector<std::pair<std::size_t, double>> out;
        for (std::size_t k = 0; k < bindings_.size(); ++k) {
            if (bindings_[k] && bindings_[k]->slot == slot) {
                out.emplace_back(k, bindings_[k]->coefficient);
            }
        }
        return out;
    }

    /// Throws ConfigError unless every binding targets a parametric gate and
    /// a slot below num_params.
    void validate_slots() const {
        for (std::size_t k = 0; k < gates_.size(); ++k) {
            if (!bindings_[k]) {
                continue;
            }
            METAQAOA_REQUIRE(is_parametric(gates_[k].kind), ConfigError,
                             "gate " + std::to_string(k) + " (" +
                                 to_string(gates_[k].kind) +
                                 ") has no angle to bind");
            METAQAOA_REQUIRE(bindings_[k]->slot < num_params_, ConfigError,
                             "gate " + std::to_string(k) + " bound to slot " +
                                 std::to_string(bindings_[k]->slot) +
                                 " but circuit has " +
                                 std::to_string(num_params_) + " slots");
            METAQAOA_REQUIRE(std::isfinite(bindings_[k]->coefficient),
                             ConfigError, "non-finite slot coefficient");
        }
    }

    /// Sets every bound angle from the parameter vector.
    void bind(std::span<const double> params) {
        METAQAOA_REQUIRE(params.size() == num_params_, ShapeError,
                         "expected " + std::to_string(num_params_) +
                             " parameters, got " +
                             std::to_string(params.size()));
        validate_slots();
        for (std::size_t k = 0; k < gates_.size(); ++k) {
            if (bindings_[k]) {
                gates_[k].angle =
                    bindings_[k]->coefficient * params[bindings_[k]->slot];
            }
        }
    }

    /// Applies every gate to `state` in order.
    void run(StateVector &state) const {
        METAQAOA_REQUIRE(state.num_qubits() == num_qubits_, ShapeError,
                         "state and circuit qubit counts differ");
        for (const auto &g : gates_) {
            apply_gate_inplace(state, g);
        }
    }

  private:
    void check_indices(const Gate &gate) const {
        METAQAOA_REQUIRE(gate.q0 < num_qubits_ &&
                             (!is_two_qubit(gate.kind) || gate.q1 < num_qubits_),
                         IndexError, "gate qubit index out of range");
        METAQAOA_REQUIRE(!is_two_qubit(gate.kind) || gate.q0 != gate.q1,
                         IndexError, "two-qubit gate needs distinct qubits");
    }

    std::size_t num_qubits_;
    std::size_t num_params_;
    std::vector<Gate> gates_;
    std::vector<std::optional<ParamBinding>> bindings_;
};

/// Runs the circuit from `init` and returns the final state.
[[nodiscard]] inline StateVector execute(const Circuit &circuit,
                                         StateVector init) {
    circuit.run(init);
    return init;
}

/**
 * @brief Exact gradient of <O> with respect to every parameter slot.
 *
 * One forward sweep followed by one backward sweep that carries both the
 * state |phi_k> and the back-propagated |lambda_k> = U_{k+1..}^dag O |psi>.
 * For U_k = exp(-i a t G), d<O>/dt = 2 a Im <lambda_k| G |phi_k>.
 * Contributions of gates sharing a slot are summed with their coefficients.
 */
[[nodiscard]] inline std::vector<double>
adjoint_gradient(const Circuit &circuit, const StateVector &init,
                 const Observable &observable) {
    circuit.validate_slots();
    std::vector<double> grad(circuit.num_params(), 0.0);
    if (circuit.num_params() == 0) {
        return grad;
    }
    const auto diag = observable_diagonal(circuit.num_qubits(), observable);

    StateVector phi = execute(circuit, init);
    StateVector lambda = phi;
    lambda.apply_diagonal(diag);
    StateVector mu = phi;

    const auto &gates = circuit.gates();
    for (std::size_t idx = gates.size(); idx-- > 0;) {
        const auto &binding = circuit.binding(idx);
        if (binding) {
            auto mu_amps = mu.amplitudes();
            const auto phi_amps = phi.amplitudes();
            std::copy(phi_amps.begin(), phi_amps.end(), mu_amps.begin());
            apply_generator(mu, gates[idx]);
            const double d_angle = 2.0 * generator_scale(gates[idx].kind) *
                                   std::imag(inner_product(lambda, mu));
            grad[binding->slot] += binding->coefficient * d_angle;
        }
        apply_gate_inplace(phi, gates[idx], true);
        apply_gate_inplace(lambda, gates[idx], true);
    }
    return grad;
}

/// Angle shift s and prefactor r with df/dt = r [f(t+s) - f(t-s)].
struct ShiftRule {
    double shift;
    double factor;
};

/// Two-term shift rule for U(t) = exp(-i a t G), G with eigenvalues +-1.
[[nodiscard]] inline ShiftRule shift_rule(GateKind kind) {
    const double a = generator_scale(kind);
    return {std::numbers::pi / (4.0 * a), a};
}

/**
 * @brief Gradient of <O> by per-gate parameter shift.
 *
 * Each bound gate is shifted on its own, so the result is exact for any
 * slot coefficients. Costs two circuit executions per bound gate.
 */
[[nodiscard]] inline std::vector<double>
parameter_shift_gradient(const Circuit &circuit, const StateVector &init,
                         const Observable &observable) {
    circuit.validate_slots();
    std::vector<double> grad(circuit.num_params(), 0.0);
    const auto diag = observable_diagonal(circuit.num_qubits(), observable);
    const auto evaluate = [&](const Circuit &c) {
        const StateVector out = execute(c, init);
        double acc = 0.0;
        const auto amps = out.amplitudes();
        for (std::size_t k = 0; k < amps.size(); ++k) {
            acc += diag[k] * std::norm(amps[k]);
        }
        return acc;
    };
    Circuit shifted = circuit;
    for (std::size_t idx = 0; idx < circuit.size(); ++idx) {
        const auto &binding = circuit.binding(idx);
        if (!binding) {
            continue;
        }
        const double base = circuit.gates()[idx].angle;
        const ShiftRule rule = shift_rule(circuit.gates()[idx].kind);
        shifted.gate(idx).angle = base + rule.shift;
        const double plus = evaluate(shifted);
        shifted.gate(idx).angle = base - rule.shift;
        const double minus = evaluate(shifted);
        shifted.gate(idx).angle = base;
        grad[binding->slot] += binding->coefficient * rule.factor * (plus - minus);
    }
    return grad;
}

} // namespace metaqaoa::sim
