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
 * Meta-training of recurrent QAOA optimizers: episode unrolling, the
 * observed-improvement meta-loss, backpropagation through time and
 * transfer evaluation on larger instances.
 */
#pragma once

#include "baselines.hpp"
#include "error.hpp"
#include "problems.hpp"
#include "qaoa.hpp"
#include "random.hpp"
#include "recurrent.hpp"
#include "stats.hpp"
#include "trajectory.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace metaqaoa::meta {

using problems::IsingInstance;
using recurrent::CellState;
using recurrent::RecurrentWeights;
using recurrent::Vec;

struct MetaConfig {
    std::size_t p{1};
    /// Unroll horizon T.
    std::size_t horizon{5};
    std::size_t meta_iterations{200};
    std::size_t batch_size{4};
    double meta_lr{0.01};
    std::size_t train_nodes{7};
    std::uint64_t seed{0};
    problems::InstanceFamily family{};
    /// Fixed pool of training instances; 0 draws fresh instances per batch.
    std::size_t train_pool{0};
    std::size_t vqc_layers{2};
    double alpha0{recurrent::default_alpha};

    void validate() const {
        METAQAOA_REQUIRE(horizon >= 2, ConfigError, "unroll horizon T must be >= 2");
        METAQAOA_REQUIRE(p >= 1 && batch_size >= 1 && train_nodes >= 2,
                         ConfigError, "p, batch_size must be >= 1 and train_nodes >= 2");
        METAQAOA_REQUIRE(meta_lr > 0.0 && std::isfinite(meta_lr), ConfigError,
                         "meta_lr must be positive");
        METAQAOA_REQUIRE(alpha0 > 0.0, ConfigError, "alpha0 must be positive");
    }
};

/// Smallest value alpha may take after a meta-update.
inline constexpr double min_alpha = 1e-3;

// --------------------------------------------------------------------------
// Meta-loss
// --------------------------------------------------------------------------

/// best[t] = min_{j < t} y_j; best[0] = +inf.
[[nodiscard]] inline Vec running_best(std::span<const double> ys) {
    Vec best(ys.size(), std::numeric_limits<double>::infinity());
    for (std::size_t t = 1; t < ys.size(); ++t) {
        best[t] = std::min(best[t - 1], ys[t - 1]);
    }
    return best;
}

using BestTracker = std::function<Vec(std::span<const double>)>;

struct MetaLossTerms {
    double loss{0.0};
    /// dL/dy_t; zero at t = 0 and wherever y_t >= best_t.
    Vec dloss;
};

/**
 * @brief L = sum_{t=1..T} min(0, y_t - best_t).
 *
 * best is a constant (no gradient through the bookkeeping) and the kink
 * y_t == best_t takes subgradient 0.
 */
[[nodiscard]] inline MetaLossTerms
observed_improvement(std::span<const double> ys, std::span<const double> best) {
    METAQAOA_REQUIRE(ys.size() == best.size(), ShapeError,
                     "best-tracker length mismatch");
    MetaLossTerms out{0.0, Vec(ys.size(), 0.0)};
    for (std::size_t t = 1; t < ys.size(); ++t) {
        const double diff = ys[t] - best[t];
        if (diff < 0.0) {
            out.loss += diff;
            out.dloss[t] = 1.0;
        }
    }
    return out;
}

[[nodiscard]] inline double meta_loss(std::span<const double> normalized_costs) {
    METAQAOA_REQUIRE(normalized_costs.size() >= 3, DomainError,
                     "meta-loss needs T >= 2");
    return observed_improvement(normalized_costs,
                                running_best(normalized_costs))
        .loss;
}

[[nodiscard]] inline double meta_loss(const Trajectory &traj) {
    return meta_loss(traj.normalized_costs);
}

// --------------------------------------------------------------------------
// Unrolling and BPTT
// --------------------------------------------------------------------------

template <RecurrentWeights W>
using StepOf = decltype(recurrent::cell_forward(
    std::declval<const W &>(), std::declval<const CellState &>(),
    std::declval<std::span<const double>>()));

/// Forward record of one episode, kept for the backward pass.
template <RecurrentWeights W> struct Episode {
    Trajectory traj;
    std::vector<StepOf<W>> steps;
    /// d(normalized cost)/d theta at every theta_t.
    std::vector<Vec> cost_grads;
};

/**
 * @brief Runs the cell for T proposals starting from theta_0 = 0.
 *
 * At step t the cell reads [theta_t, cost_t / sum|J|] and proposes
 * theta_{t+1} according to `weights.update`. The trajectory has T + 1
 * entries.
 */
template <RecurrentWeights W>
[[nodiscard]] Episode<W> run_episode(const W &weights, const IsingInstance &inst,
                                     std::size_t T, bool with_gradients) {
    const std::size_t dim = 2 * weights.depth();
    const double z = inst.normalizer();
    METAQAOA_REQUIRE(z > 0.0, DomainError,
                     "instance has no couplings; nothing to optimize");
    const qaoa::QaoaEvaluator evaluator(inst);
    Episode<W> ep;
    Vec theta(dim, 0.0);
    Vec grad(dim, 0.0);
    CellState state = CellState::zeros(weights.hidden_size());
    for (std::size_t t = 0;; ++t) {
        double cost = 0.0;
        if (with_gradients) {
            cost = evaluator.cost_and_gradient(theta, grad);
            for (auto &g : grad) {
                g /= z;
            }
            ep.cost_grads.push_back(grad);
        } else {
            cost = evaluator.cost(theta);
        }
        METAQAOA_REQUIRE(std::isfinite(cost), DivergenceError,
                         "non-finite QAOA cost at step " + std::to_string(t));
        ep.traj.push(theta, cost, z);
        if (t == T) {
            break;
        }
        Vec x(theta);
        x.push_back(ep.traj.normalized_costs.back());
        auto step = recurrent::cell_forward(weights, state, x);
        theta = recurrent::propose_params(weights.update, theta, step.y,
                                          weights.alpha);
        state = step.state;
        if (with_gradients) {
            ep.steps.push_back(std::move(step));
        }
    }
    return ep;
}

template <RecurrentWeights W>
[[nodiscard]] Trajectory unroll_episode(const W &weights,
                                        const IsingInstance &inst,
                                        std::size_t T) {
    return run_episode(weights, inst, T, false).traj;
}

template <RecurrentWeights W> struct EpisodeGradient {
    double loss{0.0};
    W grad;
    Trajectory traj;
};

/**
 * @brief Meta-loss of one episode and its exact gradient w.r.t. all weights.
 *
 * Reverse pass over t = T-1..0 through the update rule, the cell, and the QAOA cost, whose parameter gradients come from the
 * adjoint method. `tracker` supplies the running-best values.
 */
template <RecurrentWeights W>
[[nodiscard]] EpisodeGradient<W>
episode_gradient(const W &weights, const IsingInstance &inst, std::size_t T,
                 const BestTracker &tracker = running_best) {
    METAQAOA_REQUIRE(T >= 2, ConfigError, "unroll horizon T must be >= 2");
    const auto ep = run_episode(weights, inst, T, true);
    const auto &ys = ep.traj.normalized_costs;
    const auto terms = observed_improvement(ys, tracker(ys));

    EpisodeGradient<W> out{terms.loss, weights.zeros_like(), ep.traj};
    const std::size_t dim = 2 * weights.depth();
    const std::size_t H = weights.hidden_size();
    Vec d_theta(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        d_theta[k] = terms.dloss[T] * ep.cost_grads[T][k];
    }
    Vec dh(H, 0.0);
    Vec dc(H, 0.0);
    Vec dy(dim);
    for (std::size_t t = T; t-- > 0;) {
        const auto &step = ep.steps[t];
        for (std::size_t k = 0; k < dim; ++k) {
            out.grad.alpha[k] += d_theta[k] * step.y[k];
            dy[k] = d_theta[k] * weights.alpha[k];
        }
        auto back = recurrent::cell_backward(weights, step, dh, dc, dy, out.grad);
        dh = std::move(back.dh_prev);
        dc = std::move(back.dc_prev);
        const double d_y = terms.dloss[t] + back.dx[dim];
        if (weights.update == recurrent::UpdateRule::Absolute) {
            std::fill(d_theta.begin(), d_theta.end(), 0.0);
        }
        for (std::size_t k = 0; k < dim; ++k) {
            d_theta[k] += back.dx[k] + d_y * ep.cost_grads[t][k];
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// Meta-training
// --------------------------------------------------------------------------

/// Training instance `index` for the configured family and N_1.
[[nodiscard]] inline IsingInstance training_instance(const MetaConfig &cfg,
                                                     std::uint64_t index) {
    const auto seed = derive_seed({cfg.seed, hash_label("train"), index});
    return problems::generate_instance(cfg.family, cfg.train_nodes, seed);
}

/// Instances used in meta-iteration `iter`.
[[nodiscard]] inline std::vector<IsingInstance>
training_batch(const MetaConfig &cfg, std::size_t iter) {
    std::vector<IsingInstance> batch;
    if (cfg.train_pool > 0) {
        Rng rng(derive_seed({cfg.seed, hash_label("batch"), iter}));
        std::uniform_int_distribution<std::size_t> pick(0, cfg.train_pool - 1);
        for (std::size_t b = 0; b < cfg.batch_size; ++b) {
            batch.push_back(training_instance(cfg, pick(rng)));
        }
    } else {
        for (std::size_t b = 0; b < cfg.batch_size; ++b) {
            batch.push_back(training_instance(cfg, iter * cfg.batch_size + b));
        }
    }
    return batch;
}

struct MetaLogEntry {
    std::size_t meta_iter{0};
    double mean_meta_loss{0.0};
    double wallclock_s{0.0};
};

template <RecurrentWeights W> struct MetaTrainResult {
    W weights;
    baselines::OptimizerState optimizer;
    /// Number of completed meta-iterations, including resumed ones.
    std::size_t meta_iter{0};
    std::vector<MetaLogEntry> log;
};

template <RecurrentWeights W> struct TrainHooks {
    /// Called after every meta-iteration with the updated result.
    std::function<void(const MetaTrainResult<W> &)> on_iteration;
};

/// Fresh Adam state for the weight vector at the configured meta_lr.
template <RecurrentWeights W>
[[nodiscard]] baselines::OptimizerState meta_optimizer(const MetaConfig &cfg,
                                                       const W &weights) {
    baselines::Hyperparams h;
    h.learning_rate = cfg.meta_lr;
    return baselines::OptimizerState::create(baselines::OptimizerKind::Adam,
                                             weights.flatten().size(), h);
}

/// Mean meta-loss and mean gradient over a batch.
template <RecurrentWeights W>
[[nodiscard]] std::pair<double, Vec>
batch_gradient(const W &weights, std::span<const IsingInstance> batch,
               std::size_t T) {
    double loss = 0.0;
    Vec grad(weights.flatten().size(), 0.0);
    for (const auto &inst : batch) {
        const auto eg = episode_gradient(weights, inst, T);
        loss += eg.loss;
        const auto g = eg.grad.flatten();
        for (std::size_t k = 0; k < grad.size(); ++k) {
            grad[k] += g[k];
        }
    }
    const double scale = 1.0 / static_cast<double>(batch.size());
    for (auto &g : grad) {
        g *= scale;
    }
    return {loss * scale, grad};
}

/**
 * @brief Adam on the mean meta-loss of `cfg.meta_iterations` batches.
 *
 * `start` carries weights, optimizer moments and the iteration counter, so
 * a resumed run continues where a checkpoint left off. Non-finite losses or
 * gradients abort with DivergenceError.
 */
template <RecurrentWeights W>
[[nodiscard]] MetaTrainResult<W> meta_train(const MetaConfig &cfg,
                                            MetaTrainResult<W> start,
                                            const TrainHooks<W> &hooks = {}) {
    cfg.validate();
    METAQAOA_REQUIRE(start.weights.depth() == cfg.p, ConfigError,
                     "weights were built for a different QAOA depth");
    if (start.optimizer.v.size() != start.weights.flatten().size()) {
        start.optimizer = meta_optimizer(cfg, start.weights);
    }
    MetaTrainResult<W> res = std::move(start);
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t k = 0; k < cfg.meta_iterations; ++k) {
        const std::size_t iter = res.meta_iter;
        const auto batch = training_batch(cfg, iter);
        auto [loss, grad] = batch_gradient(res.weights, batch, cfg.horizon);
        METAQAOA_REQUIRE(std::isfinite(loss), DivergenceError,
                         "meta-loss became non-finite at meta-iteration " +
                             std::to_string(iter));
        Vec flat = res.weights.flatten();
        baselines::step(res.optimizer, flat, grad);
        const std::size_t a0 = flat.size() - res.weights.alpha.size();
        for (std::size_t a = a0; a < flat.size(); ++a) {
            flat[a] = std::max(flat[a], min_alpha);
        }
        res.weights.assign(flat);
        res.meta_iter = iter + 1;
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        res.log.push_back({iter, loss, elapsed});
        if (hooks.on_iteration) {
            hooks.on_iteration(res);
        }
    }
    return res;
}

template <RecurrentWeights W>
[[nodiscard]] MetaTrainResult<W> meta_train(const MetaConfig &cfg, W init,
                                            const TrainHooks<W> &hooks = {}) {
    MetaTrainResult<W> start{std::move(init), {}, 0, {}};
    return meta_train(cfg, std::move(start), hooks);
}

/// Mean meta-loss of frozen weights over the given instances.
template <RecurrentWeights W>
[[nodiscard]] double mean_meta_loss(const W &weights,
                                    std::span<const IsingInstance> instances,
                                    std::size_t T) {
    double acc = 0.0;
    for (const auto &inst : instances) {
        acc += meta_loss(unroll_episode(weights, inst, T));
    }
    return acc / static_cast<double>(instances.size());
}

// --------------------------------------------------------------------------
// Transfer evaluation
// --------------------------------------------------------------------------

/// Approximation ratio at every trajectory entry.
[[nodiscard]] inline Vec ratio_trajectory(const Trajectory &traj,
                                          const IsingInstance &inst,
                                          const problems::OracleResult &oracle) {
    Vec out;
    out.reserve(traj.size());
    for (const double c : traj.costs) {
        out.push_back(problems::approx_ratio(c, inst, oracle));
    }
    return out;
}

struct TransferRow {
    std::size_t n{0};
    Summary at_report;
    /// Per-instance ratio at report_iter.
    Vec ratios;
    /// Mean ratio at every iteration 0..eval_T.
    Vec mean_curve;
};

/// Seed of evaluation instance `index` of size n.
[[nodiscard]] inline std::uint64_t eval_seed(std::uint64_t seed, std::size_t n,
                                             std::size_t index) {
    return derive_seed({seed, hash_label("eval"), n, index});
}

/**
 * @brief Frozen-weight evaluation on unseen instances of each size.
 */
template <RecurrentWeights W>
[[nodiscard]] std::vector<TransferRow>
evaluate_transfer(const W &weights, const problems::InstanceFamily &family,
                  std::span<const std::size_t> sizes,
                  std::size_t instances_per_size, std::size_t eval_T,
                  std::size_t report_iter, std::uint64_t seed) {
    METAQAOA_REQUIRE(report_iter <= eval_T, ConfigError,
                     "report_iter must not exceed eval_T");
    std::vector<TransferRow> rows;
    for (const std::size_t n : sizes) {
        METAQAOA_REQUIRE(n <= sim::max_qubits, CapacityError,
                         "evaluation size " + std::to_string(n) +
                             " exceeds simulator capacity");
        TransferRow row;
        row.n = n;
        row.mean_curve.assign(eval_T + 1, 0.0);
        for (std::size_t k = 0; k < instances_per_size; ++k) {
            const auto inst =
                problems::generate_instance(family, n, eval_seed(seed, n, k));
            const auto oracle = problems::brute_force_optimum(inst);
            const auto ratios =
                ratio_trajectory(unroll_episode(weights, inst, eval_T), inst, oracle);
            row.ratios.push_back(ratios[report_iter]);
            for (std::size_t t = 0; t <= eval_T; ++t) {
                row.mean_curve[t] +=
                    ratios[t] / static_cast<double>(instances_per_size);
            }
        }
        row.at_report = summarize(row.ratios);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace metaqaoa::meta
