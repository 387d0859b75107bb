// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "radionet/core/errors.hpp"
#include "radionet/nn/params.hpp"

namespace radionet {

struct AdamConfig {
    float lr = 1e-4f;
    float beta1 = 0.9f;
    float beta2 = 0.999f;
    float eps = 1e-8f;
};

/// Bias-corrected Adam over a parameter list; moments live in the optimizer.
class Adam {
public:
    Adam() = default;
    Adam(ParamList params, AdamConfig cfg = {}) : params_(std::move(params)), cfg_(cfg) {
        for (const auto& p : params_) {
            m_.emplace_back(static_cast<std::size_t>(p.tensor.numel()), 0.0f);
            v_.emplace_back(static_cast<std::size_t>(p.tensor.numel()), 0.0f);
        }
    }

    /// Applies one update from the accumulated gradients; missing gradients count as zero.
    void step() {
        ++t_;
        const double c1 = 1.0 - std::pow(static_cast<double>(cfg_.beta1), static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(static_cast<double>(cfg_.beta2), static_cast<double>(t_));
        const auto a1 = static_cast<float>(1.0 / c1), a2 = static_cast<float>(1.0 / c2);
        for (std::size_t k = 0; k < params_.size(); ++k) {
            auto data = params_[k].tensor.data();
            auto grad = params_[k].tensor.grad();
            auto& m = m_[k];
            auto& v = v_[k];
            for (std::size_t i = 0; i < data.size(); ++i) {
                const float g = grad.empty() ? 0.0f : grad[i];
                m[i] = cfg_.beta1 * m[i] + (1.0f - cfg_.beta1) * g;
                v[i] = cfg_.beta2 * v[i] + (1.0f - cfg_.beta2) * g * g;
                data[i] -= cfg_.lr * (m[i] * a1) / (std::sqrt(v[i] * a2) + cfg_.eps);
            }
        }
    }

    void zero_grad() { zero_grads(params_); }

    std::int64_t step_count() const { return t_; }
    void set_step_count(std::int64_t t) { t_ = t; }
    const AdamConfig& config() const { return cfg_; }
    void set_lr(float lr) { cfg_.lr = lr; }
    const ParamList& params() const { return params_; }

    std::vector<float>& first_moment(std::size_t k) { return m_.at(k); }
    std::vector<float>& second_moment(std::size_t k) { return v_.at(k); }
    const std::vector<float>& first_moment(std::size_t k) const { return m_.at(k); }
    const std::vector<float>& second_moment(std::size_t k) const { return v_.at(k); }

private:
    ParamList params_;
    AdamConfig cfg_;
    std::vector<std::vector<float>> m_, v_;
    std::int64_t t_ = 0;
};

}  // namespace radionet
