// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dense row-major float32 tensor with define-by-run reverse-mode autodiff.
//
// A Tensor is a shared handle. Every op that sees at least one input with
// requires_grad (and grad mode enabled) attaches a Node to its output; the
// node keeps its inputs alive and knows how to push the output gradient
// back into them. backward() orders the recorded nodes topologically,
// runs each once, and then releases the graph.
#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "radionet/core/errors.hpp"
#include "radionet/core/rng.hpp"

namespace radionet {

using Index = std::int64_t;
using Shape = std::vector<Index>;

inline Index numel_of(const Shape& shape) {
    Index n = 1;
    for (Index d : shape) n *= d;
    return n;
}

struct TensorImpl;

/// One recorded op: its inputs and the closure that back-propagates into them.
struct Node {
    const char* op = "";
    std::vector<std::shared_ptr<TensorImpl>> inputs;
    std::function<void(TensorImpl& out)> backward;
};

struct TensorImpl {
    Shape shape;
    std::vector<float> data;
    std::vector<float> grad;  // empty until needed
    bool requires_grad = false;
    std::shared_ptr<Node> node;

    std::span<float> ensure_grad() {
        if (grad.size() != data.size()) grad.assign(data.size(), 0.0f);
        return grad;
    }
};

namespace detail {
inline bool& grad_mode_flag() {
    thread_local bool enabled = true;
    return enabled;
}

/// Hash of the branch decisions (relu signs, pooling winners) taken by the
/// forward pass, collected only while a gradient check installs a target.
inline std::uint64_t*& branch_signature() {
    thread_local std::uint64_t* target = nullptr;
    return target;
}

inline void note_branches(std::uint64_t word) {
    if (auto* s = branch_signature()) *s = splitmix64_mix(*s ^ word);
}
}  // namespace detail

inline bool grad_mode_enabled() { return detail::grad_mode_flag(); }

/// Disables graph recording for its lifetime (inference, evaluation).
class NoGradGuard {
public:
    NoGradGuard() : previous_(detail::grad_mode_flag()) { detail::grad_mode_flag() = false; }
    ~NoGradGuard() { detail::grad_mode_flag() = previous_; }
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;

private:
    bool previous_;
};

class Tensor {
public:
    Tensor() = default;

    Tensor(Shape shape, std::vector<float> data, bool requires_grad = false)
        : impl_(std::make_shared<TensorImpl>()) {
        if (numel_of(shape) != static_cast<Index>(data.size())) {
            throw DimensionError("tensor data length " + std::to_string(data.size()) +
                                 " does not match shape " + shape_str(shape));
        }
        for (Index d : shape) {
            if (d < 0) throw DimensionError("negative dimension in shape " + shape_str(shape));
        }
        impl_->shape = std::move(shape);
        impl_->data = std::move(data);
        set_requires_grad(requires_grad);
    }

    static Tensor zeros(Shape shape, bool requires_grad = false) {
        const auto n = static_cast<std::size_t>(numel_of(shape));
        return Tensor(std::move(shape), std::vector<float>(n, 0.0f), requires_grad);
    }

    static Tensor full(Shape shape, float value, bool requires_grad = false) {
        const auto n = static_cast<std::size_t>(numel_of(shape));
        return Tensor(std::move(shape), std::vector<float>(n, value), requires_grad);
    }

    static Tensor ones(Shape shape, bool requires_grad = false) {
        return full(std::move(shape), 1.0f, requires_grad);
    }

    static Tensor scalar(float value, bool requires_grad = false) {
        return Tensor({}, {value}, requires_grad);
    }

    static Tensor uniform(Shape shape, Rng& rng, float lo, float hi, bool requires_grad = false) {
        std::vector<float> v(static_cast<std::size_t>(numel_of(shape)));
        for (auto& x : v) x = rng.uniform_f(lo, hi);
        return Tensor(std::move(shape), std::move(v), requires_grad);
    }

    static Tensor randn(Shape shape, Rng& rng, float stddev = 1.0f, bool requires_grad = false) {
        std::vector<float> v(static_cast<std::size_t>(numel_of(shape)));
        for (auto& x : v) x = stddev * rng.normal();
        return Tensor(std::move(shape), std::move(v), requires_grad);
    }

    bool defined() const { return static_cast<bool>(impl_); }

    const Shape& shape() const { return impl_->shape; }
    Index dim(Index axis) const {
        const Index r = rank();
        if (axis < 0) axis += r;
        if (axis < 0 || axis >= r) {
            throw DimensionError("axis " + std::to_string(axis) + " out of range for shape " +
                                 shape_str(shape()));
        }
        return impl_->shape[static_cast<std::size_t>(axis)];
    }
    Index rank() const { return static_cast<Index>(impl_->shape.size()); }
    Index numel() const { return static_cast<Index>(impl_->data.size()); }

    std::span<float> data() { return impl_->data; }
    std::span<const float> data() const { return impl_->data; }
    float item() const {
        if (numel() != 1) throw ContractError("item() on tensor of shape " + shape_str(shape()));
        return impl_->data[0];
    }
    float at(std::initializer_list<Index> idx) const { return impl_->data[offset(idx)]; }

    bool requires_grad() const { return impl_->requires_grad; }
    void set_requires_grad(bool on) {
        impl_->requires_grad = on;
        if (on) impl_->ensure_grad();
    }

    bool is_leaf() const { return !impl_->node; }

    /// Gradient buffer; empty when no gradient has reached this tensor.
    std::span<const float> grad() const { return impl_->grad; }
    std::span<float> mutable_grad() { return impl_->ensure_grad(); }
    /// Gradient as a tensor, zeros when nothing was accumulated.
    Tensor grad_tensor() const {
        if (impl_->grad.size() != impl_->data.size()) return zeros(shape());
        return Tensor(shape(), impl_->grad);
    }
    void zero_grad() {
        if (!impl_->grad.empty()) std::fill(impl_->grad.begin(), impl_->grad.end(), 0.0f);
    }

    /// Deep copy of the values, detached from any graph.
    Tensor detach() const { return Tensor(shape(), impl_->data); }

    const char* op_name() const { return impl_->node ? impl_->node->op : "leaf"; }

    std::shared_ptr<TensorImpl> impl() const { return impl_; }
    TensorImpl& raw() const { return *impl_; }

    bool same_as(const Tensor& other) const { return impl_ == other.impl_; }

private:
    std::size_t offset(std::initializer_list<Index> idx) const {
        if (static_cast<Index>(idx.size()) != rank()) {
            throw DimensionError("index rank mismatch for shape " + shape_str(shape()));
        }
        Index off = 0;
        std::size_t a = 0;
        for (Index i : idx) {
            const Index d = impl_->shape[a++];
            if (i < 0 || i >= d) throw DimensionError("index out of range for shape " + shape_str(shape()));
            off = off * d + i;
        }
        return static_cast<std::size_t>(off);
    }

    std::shared_ptr<TensorImpl> impl_;
};

namespace detail {

inline bool any_requires_grad(std::initializer_list<const Tensor*> inputs) {
    if (!grad_mode_enabled()) return false;
    for (const Tensor* t : inputs) {
        if (t && t->defined() && t->requires_grad()) return true;
    }
    return false;
}

inline bool any_requires_grad(std::span<const Tensor> inputs) {
    if (!grad_mode_enabled()) return false;
    for (const Tensor& t : inputs) {
        if (t.defined() && t.requires_grad()) return true;
    }
    return false;
}

#ifndef NDEBUG
inline void assert_finite(const Tensor& t, const char* op) {
    for (float v : t.data()) {
        if (!std::isfinite(v)) {
            assert(false && "non-finite value produced by forward op");
            (void)op;
            return;
        }
    }
}
#else
inline void assert_finite(const Tensor&, const char*) {}
#endif

/// Wires `out` into the graph. The backward closure receives the output impl
/// whose grad buffer is populated.
inline void record(Tensor& out, const char* op, std::vector<Tensor> inputs,
                   std::function<void(TensorImpl&)> backward) {
    assert_finite(out, op);
    std::vector<std::shared_ptr<TensorImpl>> impls;
    impls.reserve(inputs.size());
    bool needs = false;
    for (auto& t : inputs) {
        if (t.defined()) {
            needs = needs || t.requires_grad();
            impls.push_back(t.impl());
        }
    }
    if (!needs || !grad_mode_enabled()) return;
    auto node = std::make_shared<Node>();
    node->op = op;
    node->inputs = std::move(impls);
    node->backward = std::move(backward);
    out.raw().node = std::move(node);
    out.raw().requires_grad = true;
}

/// Gradient buffer of an input if it participates in differentiation, else empty.
inline std::span<float> grad_of(const Tensor& t) {
    if (!t.defined() || !t.requires_grad()) return {};
    return t.raw().ensure_grad();
}

}  // namespace detail

/// Topologically ordered view of the recorded graph under a root tensor.
struct ComputeGraph {
    /// Producers before consumers; the root is last.
    std::vector<TensorImpl*> nodes;

    static ComputeGraph from(const Tensor& root) {
        ComputeGraph g;
        std::unordered_set<TensorImpl*> seen;
        // iterative post-order DFS
        std::vector<std::pair<TensorImpl*, std::size_t>> stack;
        stack.emplace_back(root.impl().get(), 0);
        seen.insert(root.impl().get());
        while (!stack.empty()) {
            auto& [impl, next] = stack.back();
            const auto* node = impl->node.get();
            if (node && next < node->inputs.size()) {
                TensorImpl* child = node->inputs[next++].get();
                if (child->requires_grad && seen.insert(child).second) stack.emplace_back(child, 0);
            } else {
                g.nodes.push_back(impl);
                stack.pop_back();
            }
        }
        return g;
    }

    /// Op names of interior nodes in topological order.
    std::vector<std::string> op_sequence() const {
        std::vector<std::string> ops;
        for (auto* n : nodes) {
            if (n->node) ops.emplace_back(n->node->op);
        }
        return ops;
    }
};

/// Accumulates d(loss)/d(leaf) into every requires_grad leaf and consumes the graph.
inline void backward(const Tensor& loss) {
    if (!loss.defined() || loss.numel() != 1) {
        throw ContractError("backward() needs a scalar loss, got shape " +
                            (loss.defined() ? shape_str(loss.shape()) : std::string("<undefined>")));
    }
    if (!loss.requires_grad()) return;
    ComputeGraph graph = ComputeGraph::from(loss);
    loss.raw().ensure_grad()[0] += 1.0f;
    for (auto it = graph.nodes.rbegin(); it != graph.nodes.rend(); ++it) {
        TensorImpl* impl = *it;
        if (!impl->node) continue;
        if (impl->grad.size() == impl->data.size()) impl->node->backward(*impl);
    }
    // Release the graph; interior gradients are dropped with it.
    for (TensorImpl* impl : graph.nodes) {
        if (impl->node) {
            impl->node.reset();
            impl->grad.clear();
            impl->grad.shrink_to_fit();
            impl->requires_grad = false;
        }
    }
}

}  // namespace radionet
