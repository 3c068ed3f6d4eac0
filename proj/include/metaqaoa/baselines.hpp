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
 * Classical optimizer baselines (SGD, Adam, RMSProp, Adagrad, Nelder-Mead)
 * driving QAOA from theta_0 = 0.
 */
#pragma once

#include "error.hpp"
#include "problems.hpp"
#include "qaoa.hpp"
#include "random.hpp"
#include "trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metaqaoa::baselines {

enum class OptimizerKind { SGD, Adam, RMSProp, Adagrad, NelderMead };

[[nodiscard]] inline std::string to_string(OptimizerKind k) {
    switch (k) {
    case OptimizerKind::SGD:
        return "SGD";
    case OptimizerKind::Adam:
        return "Adam";
    case OptimizerKind::RMSProp:
        return "RMSProp";
    case OptimizerKind::Adagrad:
        return "Adagrad";
    case OptimizerKind::NelderMead:
        return "NelderMead";
    }
    return "?";
}

[[nodiscard]] inline std::optional<OptimizerKind>
parse_optimizer_kind(std::string_view s) {
    for (auto k : {OptimizerKind::SGD, OptimizerKind::Adam,
                   OptimizerKind::RMSProp, OptimizerKind::Adagrad,
                   OptimizerKind::NelderMead}) {
        std::string name = to_string(k);
        if (s.size() == name.size() &&
            std::equal(s.begin(), s.end(), name.begin(), [](char a, char b) {
                return std::tolower(static_cast<unsigned char>(a)) ==
                       std::tolower(static_cast<unsigned char>(b));
            })) {
            return k;
        }
    }
    return std::nullopt;
}

struct Hyperparams {
    double learning_rate{0.01};
    double beta1{0.9};
    double beta2{0.999};
    /// RMSProp decay.
    double rho{0.9};
    double epsilon{1e-8};

    /// eta = 0.05 for SGD, 0.01 otherwise.
    static Hyperparams defaults(OptimizerKind kind) {
        Hyperparams h;
        if (kind == OptimizerKind::SGD) {
            h.learning_rate = 0.05;
        }
        return h;
    }
};

struct OptimizerState {
    OptimizerKind kind{OptimizerKind::SGD};
    Hyperparams hyper;
    std::size_t step_count{0};
    std::vector<double> m;
    std::vector<double> v;

    static OptimizerState create(OptimizerKind kind, std::size_t dim,
                                 Hyperparams hyper) {
        METAQAOA_REQUIRE(kind != OptimizerKind::NelderMead, ConfigError,
                         "Nelder-Mead is gradient free; use nelder_mead()");
        return {kind, hyper, 0, std::vector<double>(dim, 0.0),
                std::vector<double>(dim, 0.0)};
    }
};

/**
 * @brief One first-order update.
 *
 * SGD: theta -= eta g.
 * Adam: bias-corrected first/second moments.
 * RMSProp: v = rho v + (1 - rho) g^2, theta -= eta g / (sqrt(v) + eps).
 * Adagrad: v += g^2, theta -= eta g / (sqrt(v) + eps).
 */
inline void step(OptimizerState &state, std::span<double> theta,
                 std::span<const double> grad) {
    METAQAOA_REQUIRE(theta.size() == grad.size() &&
                         theta.size() == state.v.size(),
                     ShapeError, "optimizer step: dimension mismatch");
    for (std::size_t k = 0; k < grad.size(); ++k) {
        METAQAOA_REQUIRE(std::isfinite(grad[k]), DivergenceError,
                         "non-finite gradient component " + std::to_string(k) +
                             " at step " + std::to_string(state.step_count));
    }
    ++state.step_count;
    const auto &h = state.hyper;
    switch (state.kind) {
    case OptimizerKind::SGD:
        for (std::size_t k = 0; k < grad.size(); ++k) {
            theta[k] -= h.learning_rate * grad[k];
        }
        break;
    case OptimizerKind::Adam: {
        const double t = static_cast<double>(state.step_count);
        const double c1 = 1.0 - std::pow(h.beta1, t);
        const double c2 = 1.0 - std::pow(h.beta2, t);
        for (std::size_t k = 0; k < grad.size(); ++k) {
            state.m[k] = h.beta1 * state.m[k] + (1.0 - h.beta1) * grad[k];
            state.v[k] =
                h.beta2 * state.v[k] + (1.0 - h.beta2) * grad[k] * grad[k];
            const double m_hat = state.m[k] / c1;
            const double v_hat = state.v[k] / c2;
            theta[k] -= h.learning_rate * m_hat / (std::sqrt(v_hat) + h.epsilon);
        }
        break;
    }
    case OptimizerKind::RMSProp:
        for (std::size_t k = 0; k < grad.size(); ++k) {
            state.v[k] = h.rho * state.v[k] + (1.0 - h.rho) * grad[k] * grad[k];
            theta[k] -=
                h.learning_rate * grad[k] / (std::sqrt(state.v[k]) + h.epsilon);
        }
        break;
    case OptimizerKind::Adagrad:
        for (std::size_t k = 0; k < grad.size(); ++k) {
            state.v[k] += grad[k] * grad[k];
            theta[k] -=
                h.learning_rate * grad[k] / (std::sqrt(state.v[k]) + h.epsilon);
        }
        break;
    case OptimizerKind::NelderMead:
        throw ConfigError("Nelder-Mead has no gradient step");
    }
}

struct RunOptions {
    std::size_t depth{1};
    std::size_t iterations{50};
    std::uint64_t seed{0};
    /// theta_0 drawn uniformly from [-jitter, jitter]; 0 keeps theta_0 = 0.
    double init_jitter{0.0};
    qaoa::GradientMethod gradient{qaoa::GradientMethod::ParameterShift};
};

namespace detail {
inline std::vector<double> initial_theta(const RunOptions &opts) {
    std::vector<double> theta(2 * opts.depth, 0.0);
    if (opts.init_jitter > 0.0) {
        Rng rng(opts.seed);
        std::uniform_real_distribution<double> u(-opts.init_jitter,
                                                 opts.init_jitter);
        for (auto &x : theta) {
            x = u(rng);
        }
    }
    return theta;
}
} // namespace detail

struct NelderMeadOptions {
    double initial_step{0.1};
    double reflection{1.0};
    double expansion{2.0};
    double contraction{0.5};
    double shrink{0.5};
};

/**
 * @brief Downhill simplex minimization under an evaluation budget.
 *
 * The returned trajectory has one entry per evaluation of `f`, holding the
 * best point found so far; it stops after exactly `max_evals` evaluations.
 */
[[nodiscard]] inline std::vector<std::pair<std::vector<double>, double>>
nelder_mead(const std::function<double(std::span<const double>)> &f,
            std::vector<double> x0, std::size_t max_evals,
            const NelderMeadOptions &opts = {}) {
    using Point = std::vector<double>;
    const std::size_t d = x0.size();
    METAQAOA_REQUIRE(d >= 1, ShapeError, "Nelder-Mead needs dimension >= 1");
    std::vector<std::pair<Point, double>> history;
    if (max_evals == 0) {
        return history;
    }
    Point best_x;
    double best_f = 0.0;
    bool exhausted = false;
    const auto eval = [&](const Point &x) {
        if (history.size() >= max_evals) {
            exhausted = true;
            return std::numeric_limits<double>::infinity();
        }
        const double fx = f(x);
        if (history.empty() || fx < best_f) {
            best_f = fx;
            best_x = x;
        }
        history.emplace_back(best_x, best_f);
        exhausted = history.size() >= max_evals;
        return fx;
    };

    std::vector<Point> simplex{x0};
    std::vector<double> values{eval(x0)};
    for (std::size_t k = 0; k < d && !exhausted; ++k) {
        Point x = x0;
        x[k] += opts.initial_step;
        values.push_back(eval(x));
        simplex.push_back(std::move(x));
    }

    std::vector<std::size_t> order(simplex.size());
    while (!exhausted) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return values[a] < values[b];
                         });
        const std::size_t worst = order.back();
        const std::size_t second = order[order.size() - 2];
        const std::size_t lowest = order.front();
        Point centroid(d, 0.0);
        for (std::size_t idx : order) {
            if (idx == worst) {
                continue;
            }
            for (std::size_t k = 0; k < d; ++k) {
                centroid[k] += simplex[idx][k] / static_cast<double>(d);
            }
        }
        const auto along = [&](double coeff) {
            Point x(d);
            for (std::size_t k = 0; k < d; ++k) {
                x[k] = centroid[k] + coeff * (simplex[worst][k] - centroid[k]);
            }
            return x;
        };
        Point xr = along(-opts.reflection);
        const double fr = eval(xr);
        if (exhausted && fr == std::numeric_limits<double>::infinity()) {
            break;
        }
        if (fr < values[lowest]) {
            Point xe = along(-opts.reflection * opts.expansion);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = std::move(xe);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(xr);
                values[worst] = fr;
            }
        } else if (fr < values[second]) {
            simplex[worst] = std::move(xr);
            values[worst] = fr;
        } else {
            const bool outside = fr < values[worst];
            Point xc = along(outside ? -opts.contraction : opts.contraction);
            const double fc = eval(xc);
            if (fc < std::min(fr, values[worst])) {
                simplex[worst] = std::move(xc);
                values[worst] = fc;
            } else {
                for (std::size_t idx : order) {
                    if (idx == lowest || exhausted) {
                        continue;
                    }
                    for (std::size_t k = 0; k < d; ++k) {
                        simplex[idx][k] =
                            simplex[lowest][k] +
                            opts.shrink * (simplex[idx][k] - simplex[lowest][k]);
                    }
                    values[idx] = eval(simplex[idx]);
                }
            }
        }
    }
    return history;
}

/**
 * @brief Runs a classical optimizer on QAOA for opts.iterations steps.
 *
 * The trajectory holds iterations + 1 entries. Nelder-Mead spends one cost
 * evaluation per entry and records its best point so far.
 */
[[nodiscard]] inline Trajectory
run_optimizer(const problems::IsingInstance &inst, OptimizerKind kind,
              const Hyperparams &hyper, const RunOptions &opts) {
    METAQAOA_REQUIRE(opts.depth >= 1, ConfigError, "QAOA depth must be >= 1");
    const qaoa::QaoaEvaluator evaluator(inst);
    const double normalizer = inst.normalizer();
    Trajectory traj;
    std::vector<double> theta = detail::initial_theta(opts);

    if (kind == OptimizerKind::NelderMead) {
        const auto history = nelder_mead(
            [&](std::span<const double> x) { return evaluator.cost(x); }, theta,
            opts.iterations + 1);
        for (const auto &[x, fx] : history) {
            traj.push(x, fx, normalizer);
        }
        return traj;
    }

    OptimizerState state =
        OptimizerState::create(kind, theta.size(), hyper);
    std::vector<double> grad(theta.size());
    for (std::size_t t = 0;; ++t) {
        double cost = 0.0;
        if (opts.gradient == qaoa::GradientMethod::Adjoint) {
            cost = evaluator.cost_and_gradient(theta, grad);
        } else {
            cost = evaluator.cost(theta);
            grad = qaoa::qaoa_gradient_paramshift(
                inst, qaoa::QaoaParams::from_flat(theta));
        }
        METAQAOA_REQUIRE(std::isfinite(cost), DivergenceError,
                         "non-finite cost at step " + std::to_string(t));
        traj.push(theta, cost, normalizer);
        if (t == opts.iterations) {
            break;
        }
        step(state, theta, grad);
    }
    return traj;
}

} // namespace metaqaoa::baselines
