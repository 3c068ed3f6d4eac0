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
 * Variational quantum circuit block used as a QLSTM gate.
 *
 * Layout on n qubits starting from |0...0>:
 *   encoding   RY(arctan v_i) on qubit i
 *   L layers   RX(a) RY(b) RZ(c) on every qubit, then CNOT q -> (q+1) mod n
 *   readout    (<Z_0>, ..., <Z_{m-1}>)
 */
#pragma once

#include "circuit.hpp"
#include "error.hpp"
#include "random.hpp"
#include "sim.hpp"

#include <cmath>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace metaqaoa::vqc {

struct VqcConfig {
    std::size_t num_qubits{1};
    std::size_t num_layers{2};
    std::size_t output_size{1};

    void validate() const {
        METAQAOA_REQUIRE(output_size >= 1, ConfigError,
                         "VQC output_size must be >= 1");
        METAQAOA_REQUIRE(num_qubits >= output_size, ConfigError,
                         "VQC needs num_qubits >= output_size");
        METAQAOA_REQUIRE(num_qubits <= sim::max_qubits, CapacityError,
                         "VQC register too large");
    }

    /// Rotation angles per layer and qubit: RX, RY, RZ.
    [[nodiscard]] std::size_t num_params() const noexcept {
        return num_layers * num_qubits * 3;
    }

    friend bool operator==(const VqcConfig &, const VqcConfig &) = default;
};

/// Angles stored flat in [layer][qubit][axis] order.
struct VqcParams {
    std::vector<double> angles;

    static VqcParams zeros(const VqcConfig &cfg) {
        return {std::vector<double>(cfg.num_params(), 0.0)};
    }

    [[nodiscard]] double at(const VqcConfig &cfg, std::size_t layer,
                            std::size_t qubit, std::size_t axis) const {
        return angles.at((layer * cfg.num_qubits + qubit) * 3 + axis);
    }

    friend bool operator==(const VqcParams &, const VqcParams &) = default;
};

/// Uniform in [-scale, scale].
[[nodiscard]] inline VqcParams init_vqc_params(const VqcConfig &cfg, Rng &rng,
                                               double scale = 0.1) {
    std::uniform_real_distribution<double> u(-scale, scale);
    VqcParams out = VqcParams::zeros(cfg);
    for (auto &a : out.angles) {
        a = u(rng);
    }
    return out;
}

namespace detail {
inline void check_shapes(const VqcConfig &cfg, const VqcParams &params,
                         std::span<const double> v) {
    cfg.validate();
    METAQAOA_REQUIRE(params.angles.size() == cfg.num_params(), ShapeError,
                     "VQC parameter count " +
                         std::to_string(params.angles.size()) + " != " +
                         std::to_string(cfg.num_params()));
    METAQAOA_REQUIRE(v.size() == cfg.num_qubits, ShapeError,
                     "VQC input length " + std::to_string(v.size()) +
                         " != num_qubits " + std::to_string(cfg.num_qubits));
}

/// Slots [0, P) are variational angles, [P, P + n) the encoding angles.
inline sim::Circuit build_circuit(const VqcConfig &cfg, const VqcParams &params,
                                  std::span<const double> v) {
    const std::size_t n = cfg.num_qubits;
    const std::size_t P = cfg.num_params();
    sim::Circuit circuit(n, P + n);
    for (std::size_t q = 0; q < n; ++q) {
        circuit.add(sim::Gate::ry(q, 0.0), P + q, 1.0);
    }
    for (std::size_t l = 0; l < cfg.num_layers; ++l) {
        for (std::size_t q = 0; q < n; ++q) {
            const std::size_t base = (l * n + q) * 3;
            circuit.add(sim::Gate::rx(q, 0.0), base + 0, 1.0);
            circuit.add(sim::Gate::ry(q, 0.0), base + 1, 1.0);
            circuit.add(sim::Gate::rz(q, 0.0), base + 2, 1.0);
        }
        if (n > 1) {
            for (std::size_t q = 0; q < n; ++q) {
                circuit.add(sim::Gate::cnot(q, (q + 1) % n));
            }
        }
    }
    std::vector<double> slots(params.angles);
    slots.reserve(P + n);
    for (const double x : v) {
        slots.push_back(std::atan(x));
    }
    circuit.bind(slots);
    return circuit;
}

inline sim::Observable readout(std::span<const double> upstream) {
    sim::Observable obs;
    for (std::size_t k = 0; k < upstream.size(); ++k) {
        obs.z.push_back({k, upstream[k]});
    }
    return obs;
}
} // namespace detail

/// Z-expectations of the first output_size qubits; each lies in [-1, 1].
[[nodiscard]] inline std::vector<double>
vqc_forward(const VqcConfig &cfg, const VqcParams &params,
            std::span<const double> v) {
    detail::check_shapes(cfg, params, v);
    const auto circuit = detail::build_circuit(cfg, params, v);
    const auto state = sim::execute(circuit, sim::StateVector(cfg.num_qubits));
    std::vector<double> out(cfg.output_size);
    for (std::size_t k = 0; k < cfg.output_size; ++k) {
        out[k] = sim::expectation_z(state, k);
    }
    return out;
}

struct VqcGradient {
    VqcParams params;
    std::vector<double> inputs;
};

enum class VqcDiffMethod { Adjoint, ParameterShift };

/**
 * @brief Vector-Jacobian product of vqc_forward.
 *
 * Returns upstream^T d(out)/d(params) and upstream^T d(out)/d(v); the input
 * part carries the encoding chain factor 1 / (1 + v_i^2).
 */
[[nodiscard]] inline VqcGradient
vqc_backward(const VqcConfig &cfg, const VqcParams &params,
             std::span<const double> v, std::span<const double> upstream,
             VqcDiffMethod method = VqcDiffMethod::Adjoint) {
    detail::check_shapes(cfg, params, v);
    METAQAOA_REQUIRE(upstream.size() == cfg.output_size, ShapeError,
                     "upstream length " + std::to_string(upstream.size()) +
                         " != output_size " + std::to_string(cfg.output_size));
    const std::size_t P = cfg.num_params();
    const std::size_t n = cfg.num_qubits;
    VqcGradient out{VqcParams::zeros(cfg), std::vector<double>(n, 0.0)};
    bool all_zero = true;
    for (const double u : upstream) {
        all_zero = all_zero && u == 0.0;
    }
    if (all_zero) {
        return out;
    }
    const auto circuit = detail::build_circuit(cfg, params, v);
    const auto obs = detail::readout(upstream);
    const sim::StateVector init(n);
    const auto g = method == VqcDiffMethod::Adjoint
                       ? sim::adjoint_gradient(circuit, init, obs)
                       : sim::parameter_shift_gradient(circuit, init, obs);
    std::copy(g.begin(), g.begin() + static_cast<std::ptrdiff_t>(P),
              out.params.angles.begin());
    for (std::size_t q = 0; q < n; ++q) {
        out.inputs[q] = g[P + q] / (1.0 + v[q] * v[q]);
    }
    return out;
}

} // namespace metaqaoa::vqc
