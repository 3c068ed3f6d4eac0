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
 * Recurrent parameter-update cells: the QLSTM cell, whose six gate
 * transforms are variational circuits, and a classical LSTM baseline.
 *
 * Both cells read x_t = [theta_t (2p); normalized cost (1)] and the state
 * (h, c) of width 2p, and emit y_t in [-1, 1]^{2p}, which UpdateRule
 * turns into the next QAOA parameters.
 */
#pragma once

#include "error.hpp"
#include "problems.hpp"
#include "random.hpp"
#include "vqc.hpp"

#include <array>
#include <cmath>
#include <concepts>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace metaqaoa::recurrent {

using Vec = std::vector<double>;

struct CellState {
    Vec h;
    Vec c;

    static CellState zeros(std::size_t hidden) {
        return {Vec(hidden, 0.0), Vec(hidden, 0.0)};
    }
};

/// Gradients leaving a cell towards the previous step and its input.
struct CellInputGrad {
    Vec dh_prev;
    Vec dc_prev;
    Vec dx;
};

namespace detail {
inline double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

inline void require_len(std::span<const double> v, std::size_t n,
                        const char *what) {
    METAQAOA_REQUIRE(v.size() == n, ShapeError,
                     std::string(what) + " has length " +
                         std::to_string(v.size()) + ", expected " +
                         std::to_string(n));
}

inline Vec concat(std::span<const double> a, std::span<const double> b) {
    Vec out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline void accumulate(Vec &acc, std::span<const double> g) {
    for (std::size_t k = 0; k < acc.size(); ++k) {
        acc[k] += g[k];
    }
}
} // namespace detail

/**
 * @brief Six gate transforms g_0..g_5 feeding an LSTM-shaped cell.
 *
 * g_0..g_3 map v = [h_prev, x] to hidden-width pre-activations of the
 * forget, input, candidate and output gates; g_4 and g_5 map
 * m = o (.) tanh(c) to h and y. backward() returns the input gradient and
 * accumulates parameter gradients into `grad`.
 */
template <typename G>
concept GateSet = requires(const G &g, std::size_t k, std::span<const double> in,
                           std::span<const double> up,
                           typename G::Gradient &grad) {
    { g.hidden_size() } -> std::convertible_to<std::size_t>;
    { g.input_size() } -> std::convertible_to<std::size_t>;
    { g.gate_forward(k, in) } -> std::same_as<Vec>;
    { g.gate_backward(k, in, up, grad) } -> std::same_as<Vec>;
};

/// Everything the backward pass of a gated cell needs.
struct GatedCellStep {
    CellState prev;
    Vec v;
    Vec f, i, cand, o;
    Vec tanh_c;
    Vec m;
    CellState state;
    Vec y;
};

/**
 * f = sigma(g0(v)), i = sigma(g1(v)), C~ = tanh(g2(v)),
 * c = f c_prev + i C~, o = sigma(g3(v)), h = g4(o tanh c), y = g5(o tanh c).
 */
template <GateSet G>
[[nodiscard]] GatedCellStep gated_cell_forward(const G &gates,
                                               const CellState &state,
                                               std::span<const double> x) {
    const std::size_t H = gates.hidden_size();
    detail::require_len(state.h, H, "h");
    detail::require_len(state.c, H, "c");
    detail::require_len(x, gates.input_size(), "cell input");
    GatedCellStep s;
    s.prev = state;
    s.v = detail::concat(state.h, x);
    s.f = gates.gate_forward(0, s.v);
    s.i = gates.gate_forward(1, s.v);
    s.cand = gates.gate_forward(2, s.v);
    s.o = gates.gate_forward(3, s.v);
    s.state = CellState::zeros(H);
    s.tanh_c.resize(H);
    s.m.resize(H);
    for (std::size_t k = 0; k < H; ++k) {
        s.f[k] = detail::sigmoid(s.f[k]);
        s.i[k] = detail::sigmoid(s.i[k]);
        s.cand[k] = std::tanh(s.cand[k]);
        s.o[k] = detail::sigmoid(s.o[k]);
        s.state.c[k] = s.f[k] * state.c[k] + s.i[k] * s.cand[k];
        s.tanh_c[k] = std::tanh(s.state.c[k]);
        s.m[k] = s.o[k] * s.tanh_c[k];
    }
    s.state.h = gates.gate_forward(4, s.m);
    s.y = gates.gate_forward(5, s.m);
    return s;
}

/// Backward through one gated step given dL/dh, dL/dc and dL/dy.
template <GateSet G>
CellInputGrad gated_cell_backward(const G &gates, const GatedCellStep &s,
                                  std::span<const double> dh,
                                  std::span<const double> dc,
                                  std::span<const double> dy,
                                  typename G::Gradient &grad) {
    const std::size_t H = gates.hidden_size();
    detail::require_len(dh, H, "dh");
    detail::require_len(dc, H, "dc");
    detail::require_len(dy, s.y.size(), "dy");
    Vec dm = gates.gate_backward(4, s.m, dh, grad);
    detail::accumulate(dm, gates.gate_backward(5, s.m, dy, grad));

    Vec da_f(H), da_i(H), da_c(H), da_o(H);
    CellInputGrad out{Vec(H), Vec(H), {}};
    for (std::size_t k = 0; k < H; ++k) {
        const double d_o = dm[k] * s.tanh_c[k];
        const double dct =
            dc[k] + dm[k] * s.o[k] * (1.0 - s.tanh_c[k] * s.tanh_c[k]);
        da_f[k] = dct * s.prev.c[k] * s.f[k] * (1.0 - s.f[k]);
        da_i[k] = dct * s.cand[k] * s.i[k] * (1.0 - s.i[k]);
        da_c[k] = dct * s.i[k] * (1.0 - s.cand[k] * s.cand[k]);
        da_o[k] = d_o * s.o[k] * (1.0 - s.o[k]);
        out.dc_prev[k] = dct * s.f[k];
    }
    Vec dv = gates.gate_backward(0, s.v, da_f, grad);
    detail::accumulate(dv, gates.gate_backward(1, s.v, da_i, grad));
    detail::accumulate(dv, gates.gate_backward(2, s.v, da_c, grad));
    detail::accumulate(dv, gates.gate_backward(3, s.v, da_o, grad));
    out.dh_prev.assign(dv.begin(), dv.begin() + static_cast<std::ptrdiff_t>(H));
    out.dx.assign(dv.begin() + static_cast<std::ptrdiff_t>(H), dv.end());
    return out;
}

/// Default per-coordinate update scale.
inline constexpr double default_alpha = std::numbers::pi / 2.0;

/// How the cell output turns into the next QAOA parameters.
enum class UpdateRule {
    /// theta_{t+1} = alpha (.) y_t
    Absolute,
    /// theta_{t+1} = theta_t + alpha (.) y_t
    Residual,
};

[[nodiscard]] inline std::string to_string(UpdateRule r) {
    return r == UpdateRule::Absolute ? "absolute" : "residual";
}

[[nodiscard]] inline std::optional<UpdateRule>
parse_update_rule(std::string_view s) {
    if (s == "absolute") {
        return UpdateRule::Absolute;
    }
    if (s == "residual") {
        return UpdateRule::Residual;
    }
    return std::nullopt;
}

/**
 * @brief Trainable state of the QLSTM optimizer for QAOA depth p.
 *
 * VQC_1..VQC_4 act on the 1 + 4p qubit register [h, x]; VQC_5 and VQC_6 act
 * on the 2p-qubit register holding o (.) tanh(c).
 */
struct QlstmWeights {
    using Gradient = QlstmWeights;

    std::size_t p{1};
    vqc::VqcConfig wide;
    vqc::VqcConfig narrow;
    std::array<vqc::VqcParams, 6> params;
    Vec alpha;
    UpdateRule update{UpdateRule::Absolute};

    static QlstmWeights zeros(std::size_t p, std::size_t layers = 2) {
        METAQAOA_REQUIRE(p >= 1, ConfigError, "QAOA depth must be >= 1");
        QlstmWeights w;
        w.p = p;
        w.wide = {1 + 4 * p, layers, 2 * p};
        w.narrow = {2 * p, layers, 2 * p};
        for (std::size_t k = 0; k < 6; ++k) {
            w.params[k] = vqc::VqcParams::zeros(w.config(k));
        }
        w.alpha.assign(2 * p, 0.0);
        return w;
    }

    /// Angles uniform in [-0.1, 0.1], alpha = alpha0.
    static QlstmWeights init(std::size_t p, std::uint64_t seed,
                             std::size_t layers = 2,
                             double alpha0 = default_alpha) {
        QlstmWeights w = zeros(p, layers);
        Rng rng(seed);
        for (std::size_t k = 0; k < 6; ++k) {
            w.params[k] = vqc::init_vqc_params(w.config(k), rng);
        }
        w.alpha.assign(2 * p, alpha0);
        return w;
    }

    [[nodiscard]] Gradient zeros_like() const {
        return zeros(p, wide.num_layers);
    }

    [[nodiscard]] std::size_t hidden_size() const noexcept { return 2 * p; }
    [[nodiscard]] std::size_t input_size() const noexcept { return 1 + 2 * p; }
    [[nodiscard]] std::size_t depth() const noexcept { return p; }

    [[nodiscard]] const vqc::VqcConfig &config(std::size_t k) const {
        return k < 4 ? wide : narrow;
    }

    [[nodiscard]] Vec gate_forward(std::size_t k,
                                   std::span<const double> in) const {
        return vqc::vqc_forward(config(k), params.at(k), in);
    }

    [[nodiscard]] Vec gate_backward(std::size_t k, std::span<const double> in,
                                    std::span<const double> up,
                                    Gradient &grad) const {
        auto g = vqc::vqc_backward(config(k), params.at(k), in, up);
        detail::accumulate(grad.params.at(k).angles, g.params.angles);
        return std::move(g.inputs);
    }

    [[nodiscard]] std::size_t num_parameters() const {
        std::size_t n = alpha.size();
        for (const auto &pr : params) {
            n += pr.angles.size();
        }
        return n;
    }

    /// VQC_1..VQC_6 angles followed by alpha.
    [[nodiscard]] Vec flatten() const {
        Vec out;
        out.reserve(num_parameters());
        for (const auto &pr : params) {
            out.insert(out.end(), pr.angles.begin(), pr.angles.end());
        }
        out.insert(out.end(), alpha.begin(), alpha.end());
        return out;
    }

    void assign(std::span<const double> flat) {
        METAQAOA_REQUIRE(flat.size() == num_parameters(), ShapeError,
                         "flat QLSTM parameter vector has wrong length");
        std::size_t pos = 0;
        for (auto &pr : params) {
            std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                        pr.angles.size(), pr.angles.begin());
            pos += pr.angles.size();
        }
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos), flat.end(),
                  alpha.begin());
    }

    void validate() const {
        METAQAOA_REQUIRE(p >= 1, ConfigError, "QAOA depth must be >= 1");
        METAQAOA_REQUIRE(wide.num_qubits == 1 + 4 * p &&
                             wide.output_size == 2 * p &&
                             narrow.num_qubits == 2 * p &&
                             narrow.output_size == 2 * p,
                         ConfigError, "QLSTM register sizes inconsistent with p");
        for (std::size_t k = 0; k < 6; ++k) {
            METAQAOA_REQUIRE(params[k].angles.size() == config(k).num_params(),
                             ShapeError, "VQC parameter block has wrong size");
        }
        METAQAOA_REQUIRE(alpha.size() == 2 * p, ShapeError,
                         "alpha must have length 2p");
        for (const double a : alpha) {
            METAQAOA_REQUIRE(a > 0.0, ConfigError, "alpha entries must be > 0");
        }
    }

    friend bool operator==(const QlstmWeights &, const QlstmWeights &) = default;
};

static_assert(GateSet<QlstmWeights>);

using QlstmStep = GatedCellStep;

[[nodiscard]] inline QlstmStep qlstm_cell_forward(const QlstmWeights &w,
                                                  const CellState &state,
                                                  std::span<const double> x) {
    return gated_cell_forward(w, state, x);
}

inline CellInputGrad qlstm_cell_backward(const QlstmWeights &w,
                                         const QlstmStep &step,
                                         std::span<const double> dh,
                                         std::span<const double> dc,
                                         std::span<const double> dy,
                                         QlstmWeights &grad) {
    return gated_cell_backward(w, step, dh, dc, dy, grad);
}

/**
 * @brief Classical LSTM optimizer with hidden width 2p and a tanh head.
 *
 * Gate pre-activations W [h, x] + b are stacked (forget, input, candidate,
 * output), W row-major of shape 4H x (H + I).
 */
struct LstmWeights {
    using Gradient = LstmWeights;

    std::size_t p{1};
    Vec W;
    Vec b;
    Vec Wy;
    Vec by;
    Vec alpha;
    UpdateRule update{UpdateRule::Absolute};

    [[nodiscard]] std::size_t hidden_size() const noexcept { return 2 * p; }
    [[nodiscard]] std::size_t input_size() const noexcept { return 1 + 2 * p; }
    [[nodiscard]] std::size_t depth() const noexcept { return p; }
    [[nodiscard]] std::size_t row_width() const noexcept {
        return hidden_size() + input_size();
    }

    static LstmWeights zeros(std::size_t p) {
        METAQAOA_REQUIRE(p >= 1, ConfigError, "QAOA depth must be >= 1");
        LstmWeights w;
        w.p = p;
        const auto H = w.hidden_size();
        w.W.assign(4 * H * w.row_width(), 0.0);
        w.b.assign(4 * H, 0.0);
        w.Wy.assign(2 * p * H, 0.0);
        w.by.assign(2 * p, 0.0);
        w.alpha.assign(2 * p, 0.0);
        return w;
    }

    /// Every weight and bias uniform in [-1/sqrt(H), 1/sqrt(H)],
    /// alpha = alpha0.
    static LstmWeights init(std::size_t p, std::uint64_t seed,
                            double alpha0 = default_alpha) {
        LstmWeights w = zeros(p);
        Rng rng(seed);
        const double bound =
            1.0 / std::sqrt(static_cast<double>(w.hidden_size()));
        std::uniform_real_distribution<double> u(-bound, bound);
        for (Vec *part : {&w.W, &w.b, &w.Wy, &w.by}) {
            for (auto &x : *part) {
                x = u(rng);
            }
        }
        w.alpha.assign(2 * p, alpha0);
        return w;
    }

    [[nodiscard]] Gradient zeros_like() const { return zeros(p); }

    [[nodiscard]] std::size_t num_parameters() const {
        return W.size() + b.size() + Wy.size() + by.size() + alpha.size();
    }

    /// W, b, Wy, by, alpha.
    [[nodiscard]] Vec flatten() const {
        Vec out;
        out.reserve(num_parameters());
        for (const Vec *part : {&W, &b, &Wy, &by, &alpha}) {
            out.insert(out.end(), part->begin(), part->end());
        }
        return out;
    }

    void assign(std::span<const double> flat) {
        METAQAOA_REQUIRE(flat.size() == num_parameters(), ShapeError,
                         "flat LSTM parameter vector has wrong length");
        std::size_t pos = 0;
        for (Vec *part : {&W, &b, &Wy, &by, &alpha}) {
            std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                        part->size(), part->begin());
            pos += part->size();
        }
    }

    void validate() const {
        const auto ref = zeros(p);
        METAQAOA_REQUIRE(W.size() == ref.W.size() && b.size() == ref.b.size() &&
                             Wy.size() == ref.Wy.size() &&
                             by.size() == ref.by.size() &&
                             alpha.size() == ref.alpha.size(),
                         ShapeError, "LSTM weight shapes inconsistent with p");
        for (const double a : alpha) {
            METAQAOA_REQUIRE(a > 0.0, ConfigError, "alpha entries must be > 0");
        }
    }

    friend bool operator==(const LstmWeights &, const LstmWeights &) = default;
};

struct LstmStep {
    CellState prev;
    Vec z;
    Vec f, i, g, o;
    Vec tanh_c;
    CellState state;
    Vec y;
};

[[nodiscard]] inline LstmStep lstm_cell_forward(const LstmWeights &w,
                                                const CellState &state,
                                                std::span<const double> x) {
    const std::size_t H = w.hidden_size();
    detail::require_len(state.h, H, "h");
    detail::require_len(state.c, H, "c");
    detail::require_len(x, w.input_size(), "cell input");
    const std::size_t D = w.row_width();
    LstmStep s;
    s.prev = state;
    s.z = detail::concat(state.h, x);
    Vec a(4 * H);
    for (std::size_t r = 0; r < 4 * H; ++r) {
        double acc = w.b[r];
        for (std::size_t col = 0; col < D; ++col) {
            acc += w.W[r * D + col] * s.z[col];
        }
        a[r] = acc;
    }
    s.f.resize(H);
    s.i.resize(H);
    s.g.resize(H);
    s.o.resize(H);
    s.tanh_c.resize(H);
    s.state = CellState::zeros(H);
    for (std::size_t k = 0; k < H; ++k) {
        s.f[k] = detail::sigmoid(a[k]);
        s.i[k] = detail::sigmoid(a[H + k]);
        s.g[k] = std::tanh(a[2 * H + k]);
        s.o[k] = detail::sigmoid(a[3 * H + k]);
        s.state.c[k] = s.f[k] * state.c[k] + s.i[k] * s.g[k];
        s.tanh_c[k] = std::tanh(s.state.c[k]);
        s.state.h[k] = s.o[k] * s.tanh_c[k];
    }
    const std::size_t Y = 2 * w.p;
    s.y.resize(Y);
    for (std::size_t r = 0; r < Y; ++r) {
        double acc = w.by[r];
        for (std::size_t k = 0; k < H; ++k) {
            acc += w.Wy[r * H + k] * s.state.h[k];
        }
        s.y[r] = std::tanh(acc);
    }
    return s;
}

inline CellInputGrad lstm_cell_backward(const LstmWeights &w,
                                        const LstmStep &s,
                                        std::span<const double> dh,
                                        std::span<const double> dc,
                                        std::span<const double> dy,
                                        LstmWeights &grad) {
    const std::size_t H = w.hidden_size();
    const std::size_t D = w.row_width();
    const std::size_t Y = 2 * w.p;
    detail::require_len(dh, H, "dh");
    detail::require_len(dc, H, "dc");
    detail::require_len(dy, Y, "dy");

    Vec dh_total(dh.begin(), dh.end());
    for (std::size_t r = 0; r < Y; ++r) {
        const double da = dy[r] * (1.0 - s.y[r] * s.y[r]);
        grad.by[r] += da;
        for (std::size_t k = 0; k < H; ++k) {
            grad.Wy[r * H + k] += da * s.state.h[k];
            dh_total[k] += da * w.Wy[r * H + k];
        }
    }

    Vec da(4 * H);
    CellInputGrad out{Vec(H, 0.0), Vec(H), Vec(w.input_size(), 0.0)};
    for (std::size_t k = 0; k < H; ++k) {
        const double d_o = dh_total[k] * s.tanh_c[k];
        const double dct =
            dc[k] + dh_total[k] * s.o[k] * (1.0 - s.tanh_c[k] * s.tanh_c[k]);
        da[k] = dct * s.prev.c[k] * s.f[k] * (1.0 - s.f[k]);
        da[H + k] = dct * s.g[k] * s.i[k] * (1.0 - s.i[k]);
        da[2 * H + k] = dct * s.i[k] * (1.0 - s.g[k] * s.g[k]);
        da[3 * H + k] = d_o * s.o[k] * (1.0 - s.o[k]);
        out.dc_prev[k] = dct * s.f[k];
    }
    Vec dz(D, 0.0);
    for (std::size_t r = 0; r < 4 * H; ++r) {
        grad.b[r] += da[r];
        for (std::size_t col = 0; col < D; ++col) {
            grad.W[r * D + col] += da[r] * s.z[col];
            dz[col] += da[r] * w.W[r * D + col];
        }
    }
    std::copy_n(dz.begin(), H, out.dh_prev.begin());
    std::copy(dz.begin() + static_cast<std::ptrdiff_t>(H), dz.end(),
              out.dx.begin());
    return out;
}

// Uniform entry points used by the unroller.
[[nodiscard]] inline QlstmStep cell_forward(const QlstmWeights &w,
                                            const CellState &s,
                                            std::span<const double> x) {
    return qlstm_cell_forward(w, s, x);
}
inline CellInputGrad cell_backward(const QlstmWeights &w, const QlstmStep &s,
                                   std::span<const double> dh,
                                   std::span<const double> dc,
                                   std::span<const double> dy,
                                   QlstmWeights &grad) {
    return qlstm_cell_backward(w, s, dh, dc, dy, grad);
}
[[nodiscard]] inline LstmStep cell_forward(const LstmWeights &w,
                                           const CellState &s,
                                           std::span<const double> x) {
    return lstm_cell_forward(w, s, x);
}
inline CellInputGrad cell_backward(const LstmWeights &w, const LstmStep &s,
                                   std::span<const double> dh,
                                   std::span<const double> dc,
                                   std::span<const double> dy,
                                   LstmWeights &grad) {
    return lstm_cell_backward(w, s, dh, dc, dy, grad);
}

/// Weight types the unroller and meta-trainer accept.
template <typename W>
concept RecurrentWeights =
    requires(const W &w, W &grad, const CellState &s, std::span<const double> x,
             std::span<const double> d) {
        { w.depth() } -> std::convertible_to<std::size_t>;
        { w.hidden_size() } -> std::convertible_to<std::size_t>;
        { w.flatten() } -> std::same_as<Vec>;
        { w.zeros_like() } -> std::same_as<W>;
        { w.alpha } -> std::convertible_to<const Vec &>;
        { w.update } -> std::convertible_to<UpdateRule>;
        cell_forward(w, s, x).state;
        cell_forward(w, s, x).y;
        { cell_backward(w, cell_forward(w, s, x), d, d, d, grad) } ->
            std::same_as<CellInputGrad>;
    };

static_assert(RecurrentWeights<QlstmWeights>);
static_assert(RecurrentWeights<LstmWeights>);

/// Residual proposal theta + alpha (.) y.
[[nodiscard]] inline Vec propose_params(std::span<const double> theta,
                                        std::span<const double> y,
                                        std::span<const double> alpha) {
    METAQAOA_REQUIRE(theta.size() == y.size() && y.size() == alpha.size(),
                     ShapeError, "propose_params: length mismatch");
    Vec out(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        out[k] = theta[k] + alpha[k] * y[k];
    }
    return out;
}

[[nodiscard]] inline Vec propose_params(UpdateRule rule,
                                        std::span<const double> theta,
                                        std::span<const double> y,
                                        std::span<const double> alpha) {
    Vec out = propose_params(theta, y, alpha);
    if (rule == UpdateRule::Absolute) {
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = alpha[k] * y[k];
        }
    }
    return out;
}

/// raw / sum|J|, in [-1, 1] for any expectation value.
[[nodiscard]] inline double
normalize_cost(double raw_cost, const problems::IsingInstance &inst) {
    const double z = inst.normalizer();
    METAQAOA_REQUIRE(z > 0.0, DomainError,
                     "instance has zero coupling normalizer");
    return raw_cost / z;
}

} // namespace metaqaoa::recurrent
