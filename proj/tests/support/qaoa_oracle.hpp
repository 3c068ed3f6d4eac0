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
 * Dense matrix-exponential model of the QAOA state for n <= 6.
 */
#pragma once

#include "dense_oracle.hpp"

#include "metaqaoa/problems.hpp"

#include <cmath>
#include <vector>

namespace oracle {

inline Mat cost_hamiltonian(const metaqaoa::problems::IsingInstance &inst) {
    const std::size_t n = inst.num_spins;
    Mat h(std::size_t{1} << n);
    for (const auto &c : inst.couplings) {
        h = h + cd{c.weight, 0.0} * zz(c.i, c.j, n);
    }
    return h;
}

inline Mat mixer_hamiltonian(std::size_t n) {
    Mat b(std::size_t{1} << n);
    for (std::size_t q = 0; q < n; ++q) {
        b = b + on_qubit(pauli('X'), q, n);
    }
    return b;
}

/// prod_l exp(-i beta_l B) exp(-i gamma_l H_C) |+>^n.
inline std::vector<cd> qaoa_state(const metaqaoa::problems::IsingInstance &inst,
                                  const std::vector<double> &gamma,
                                  const std::vector<double> &beta) {
    const std::size_t n = inst.num_spins;
    const auto hc = cost_hamiltonian(inst);
    const auto hb = mixer_hamiltonian(n);
    std::vector<cd> psi(std::size_t{1} << n,
                        cd{std::pow(2.0, -0.5 * static_cast<double>(n)), 0.0});
    for (std::size_t l = 0; l < gamma.size(); ++l) {
        psi = evolve(hc, gamma[l]) * psi;
        psi = evolve(hb, beta[l]) * psi;
    }
    return psi;
}

inline double qaoa_cost(const metaqaoa::problems::IsingInstance &inst,
                        const std::vector<double> &gamma,
                        const std::vector<double> &beta) {
    return expectation(cost_hamiltonian(inst), qaoa_state(inst, gamma, beta));
}

} // namespace oracle
