// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Central-difference verification of the autodiff engine.
//
// The function under test may return any shape. A non-scalar output is
// contracted with fixed pseudo-random weights r in [-1, 1] (seeded), so the
// checked scalar is sum(r * f(x)); the contraction is done in double on the
// numeric side to keep rounding out of the difference quotient. The step
// actually taken is (fl(x+eps) - fl(x-eps)), not 2*eps.
//
// The error of one checked tensor is the norm-wise relative error
// ||analytic - numeric||_2 / max(||analytic||_2, ||numeric||_2) over its probed
// coordinates; the report carries the worst tensor. Per-coordinate ratios are
// not used: in float32 with eps = 1e-3 the difference quotient carries
// ~1e-4 absolute noise, which swamps components that are themselves ~1e-2.
// A single wrong coordinate among n similar ones still shows up as ~1/sqrt(n).
// With pool_leaves all probed coordinates form one vector, the natural
// reading for "the gradient of a whole layer".
//
// Piecewise-linear ops (relu, max pooling) make the difference quotient
// wrong whenever a probe step crosses a kink. With kink_halvings > 0 the
// relu sign patterns and pooling winners at x-eps, x and x+eps are hashed.
// If only one side differs from x, the one-sided quotient of the clean side
// is used; if both differ the step is halved, at most kink_halvings times.
// Coordinates still straddling a kink are counted in the report.
#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "radionet/core/ops.hpp"

namespace radionet {

struct GradCheckOptions {
    float eps = 1e-3f;
    /// 0 checks every coordinate; otherwise a seeded random subset of this size.
    std::size_t max_coordinates = 0;
    bool pool_leaves = false;
    std::uint64_t seed = 0x5eed;
    int kink_halvings = 0;
};

struct GradCheckReport {
    /// Worst norm-wise relative error over the checked tensors.
    double max_rel_error = 0.0;
    std::size_t coordinates = 0;
    /// Largest single |analytic - numeric| seen, for diagnostics.
    double max_abs_diff = 0.0;
    double analytic_norm = 0.0;
    double numeric_norm = 0.0;
    /// Probed coordinates whose final step still crossed a kink.
    std::size_t kinked = 0;
    /// Coordinates whose step had to be shrunk.
    std::size_t shrunk = 0;
};

namespace detail {

inline double contract(const Tensor& out, const std::vector<float>& weights) {
    if (out.numel() == 1) return out.data()[0];
    double acc = 0.0;
    auto d = out.data();
    for (std::size_t i = 0; i < d.size(); ++i) acc += static_cast<double>(weights[i]) * d[i];
    return acc;
}

}  // namespace detail

/// Checks d f / d leaves. `f` must read the leaves (captured by reference or
/// handle) each time it runs; the leaves are perturbed in place and restored.
inline GradCheckReport gradient_check(const std::function<Tensor()>& f, std::vector<Tensor> leaves,
                                      const GradCheckOptions& opts = {}) {
    Rng rng(opts.seed);
    std::vector<float> weights;
    {
        NoGradGuard guard;
        const Tensor probe = f();
        if (probe.numel() != 1) {
            weights.resize(static_cast<std::size_t>(probe.numel()));
            for (auto& w : weights) w = rng.uniform_f(-1.0f, 1.0f);
        }
    }

    std::vector<bool> restore(leaves.size());
    for (std::size_t l = 0; l < leaves.size(); ++l) {
        restore[l] = leaves[l].requires_grad();
        leaves[l].set_requires_grad(true);
        leaves[l].zero_grad();
    }
    {
        Tensor out = f();
        Tensor loss = out.numel() == 1
                          ? reshape(out, {})
                          : sum(mul(out, Tensor(out.shape(), std::vector<float>(weights.begin(), weights.end()))));
        backward(loss);
    }
    std::vector<std::vector<float>> analytic;
    for (auto& leaf : leaves) analytic.emplace_back(leaf.grad().begin(), leaf.grad().end());

    // (leaf, index) pairs to probe
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    for (std::size_t l = 0; l < leaves.size(); ++l) {
        for (std::size_t i = 0; i < static_cast<std::size_t>(leaves[l].numel()); ++i) coords.emplace_back(l, i);
    }
    if (opts.max_coordinates > 0 && coords.size() > opts.max_coordinates) {
        rng.shuffle(std::span(coords));
        coords.resize(opts.max_coordinates);
    }

    auto evaluate = [&](std::uint64_t* signature = nullptr) {
        NoGradGuard guard;
        if (signature) *signature = 0;
        detail::branch_signature() = signature;
        const double v = detail::contract(f(), weights);
        detail::branch_signature() = nullptr;
        return v;
    };

    GradCheckReport report;
    struct Accum {
        double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
    };
    std::vector<Accum> acc(leaves.size());
    for (auto [l, i] : coords) {
        auto data = leaves[l].data();
        const float orig = data[i];
        const bool track = opts.kink_halvings > 0;
        std::uint64_t s_mid = 0, s_hi = 0, s_lo = 0;
        if (track) evaluate(&s_mid);
        double numeric = 0.0;
        float eps = opts.eps;
        for (int round = 0;; ++round) {
            const float hi = orig + eps;
            const float lo = orig - eps;
            data[i] = hi;
            const double f_hi = evaluate(track ? &s_hi : nullptr);
            data[i] = lo;
            const double f_lo = evaluate(track ? &s_lo : nullptr);
            data[i] = orig;
            const bool clean_hi = !track || s_hi == s_mid, clean_lo = !track || s_lo == s_mid;
            if (clean_hi && clean_lo) {
                numeric = (f_hi - f_lo) / (static_cast<double>(hi) - static_cast<double>(lo));
                break;
            }
            if (round == 0) ++report.shrunk;
            if (clean_hi || clean_lo) {
                const double f_mid = evaluate();
                numeric = clean_hi ? (f_hi - f_mid) / (static_cast<double>(hi) - orig)
                                   : (f_mid - f_lo) / (static_cast<double>(orig) - lo);
                break;
            }
            if (round == opts.kink_halvings) {
                ++report.kinked;
                numeric = (f_hi - f_lo) / (static_cast<double>(hi) - static_cast<double>(lo));
                break;
            }
            eps *= 0.5f;
        }
        const double a = analytic[l][i];
        if (opts.pool_leaves) l = 0;
        acc[l].diff2 += (a - numeric) * (a - numeric);
        acc[l].a2 += a * a;
        acc[l].n2 += numeric * numeric;
        report.max_abs_diff = std::max(report.max_abs_diff, std::abs(a - numeric));
        ++report.coordinates;
    }
    for (const auto& t : acc) {
        const double denom = std::max(std::sqrt(t.a2), std::sqrt(t.n2));
        // both gradients exactly zero: nothing to compare
        const double rel = denom > 0.0 ? std::sqrt(t.diff2) / denom : 0.0;
        if (rel >= report.max_rel_error) {
            report.max_rel_error = rel;
            report.analytic_norm = std::sqrt(t.a2);
            report.numeric_norm = std::sqrt(t.n2);
        }
    }

    for (std::size_t l = 0; l < leaves.size(); ++l) {
        leaves[l].zero_grad();
        if (!restore[l]) leaves[l].set_requires_grad(false);
    }
    return report;
}

/// Single-input convenience form; returns the worst relative error.
inline double finite_difference_check(const std::function<Tensor(const Tensor&)>& f, const Tensor& x,
                                      float eps = 1e-3f) {
    Tensor leaf = x.detach();
    GradCheckOptions opts;
    opts.eps = eps;
    return gradient_check([&] { return f(leaf); }, {leaf}, opts).max_rel_error;
}

}  // namespace radionet
