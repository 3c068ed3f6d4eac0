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
 * Mean / standard deviation summaries.
 */
#pragma once

#include <cmath>
#include <span>

namespace metaqaoa {

struct Summary {
    double mean{0.0};
    /// Sample standard deviation (n - 1 denominator); 0 when count < 2.
    double std{0.0};
    std::size_t count{0};
};

[[nodiscard]] inline Summary summarize(std::span<const double> xs) {
    Summary s;
    s.count = xs.size();
    if (xs.empty()) {
        return s;
    }
    double acc = 0.0;
    for (const double x : xs) {
        acc += x;
    }
    s.mean = acc / static_cast<double>(xs.size());
    if (xs.size() >= 2) {
        double sq = 0.0;
        for (const double x : xs) {
            sq += (x - s.mean) * (x - s.mean);
        }
        s.std = std::sqrt(sq / static_cast<double>(xs.size() - 1));
    }
    return s;
}

} // namespace metaqaoa
