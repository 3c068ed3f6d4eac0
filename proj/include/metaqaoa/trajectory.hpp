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
 * Optimization trajectories shared by learned and classical optimizers.
 */
#pragma once

#include "problems.hpp"

#include <vector>

namespace metaqaoa {

/// thetas[t], costs[t] = <H_C>(thetas[t]) and costs[t] / sum|J|, t = 0..T.
struct Trajectory {
    std::vector<std::vector<double>> thetas;
    std::vector<double> costs;
    std::vector<double> normalized_costs;

    [[nodiscard]] std::size_t size() const noexcept { return costs.size(); }

    void push(std::vector<double> theta, double cost, double normalizer) {
        thetas.push_back(std::move(theta));
        costs.push_back(cost);
        normalized_costs.push_back(normalizer > 0.0 ? cost / normalizer : 0.0);
    }

    friend bool operator==(const Trajectory &, const Trajectory &) = default;
};

} // namespace metaqaoa
