// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Differentiable tensor ops. No implicit broadcasting: binary elementwise
// ops require identical shapes, biases are handled inside linear/conv.
#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "radionet/core/tensor.hpp"

namespace radionet {

namespace detail {

using RowMat = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using CMatMap = Eigen::Map<const RowMat>;

inline MatMap mat(float* p, Index rows, Index cols) { return MatMap(p, rows, cols); }
inline CMatMap cmat(const float* p, Index rows, Index cols) { return CMatMap(p, rows, cols); }
inline Eigen::Map<const Eigen::VectorXf> cvec(const float* p, Index n) { return Eigen::Map<const Eigen::VectorXf>(p, n); }
inline Eigen::Map<const Eigen::RowVectorXf> crow(const float* p, Index n) {
    return Eigen::Map<const Eigen::RowVectorXf>(p, n);
}

// Bias gradients. Eigen's vectorised reductions peel by pointer alignment,
// which makes the summation order (and the low bits) depend on where the
// heap put the buffer; these fixed-order loops keep training reproducible.
inline void add_row_sums(float* g, const float* m, Index rows, Index cols) {
    for (Index r = 0; r < rows; ++r) {
        const float* row = m + r * cols;
        float acc = 0.0f;
        for (Index c = 0; c < cols; ++c) acc += row[c];
        g[r] += acc;
    }
}

inline void add_col_sums(float* g, const float* m, Index rows, Index cols) {
    for (Index r = 0; r < rows; ++r) {
        const float* row = m + r * cols;
        for (Index c = 0; c < cols; ++c) g[c] += row[c];
    }
}

inline Index normalize_axis(Index axis, Index rank, const Shape& shape) {
    if (axis < 0) axis += rank;
    if (axis < 0 || axis >= rank) {
        throw DimensionError("axis out of range for shape " + shape_str(shape));
    }
    return axis;
}

/// outer x n x inner decomposition of a shape around `axis`.
struct AxisSplit {
    Index outer = 1, n = 1, inner = 1;
};

inline AxisSplit split_at(const Shape& shape, Index axis) {
    AxisSplit s;
    for (Index i = 0; i < axis; ++i) s.outer *= shape[static_cast<std::size_t>(i)];
    s.n = shape[static_cast<std::size_t>(axis)];
    for (Index i = axis + 1; i < static_cast<Index>(shape.size()); ++i) s.inner *= shape[static_cast<std::size_t>(i)];
    return s;
}

inline void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (a.shape() != b.shape()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
                             shape_str(b.shape()));
    }
}

template <typename Fwd, typename Bwd>
Tensor unary(const Tensor& x, const char* op, Fwd fwd, Bwd bwd) {
    std::vector<float> out(x.data().size());
    auto xd = x.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(xd[i]);
    Tensor y(x.shape(), std::move(out));
    record(y, op, {x}, [x, bwd](TensorImpl& o) {
        auto gx = grad_of(x);
        auto xd = x.data();
        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += o.grad[i] * bwd(xd[i], o.data[i]);
    });
    return y;
}

}  // namespace detail

inline Tensor add(const Tensor& a, const Tensor& b) {
    detail::require_same_shape(a, b, "add");
    std::vector<float> out(a.data().begin(), a.data().end());
    auto bd = b.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += bd[i];
    Tensor y(a.shape(), std::move(out));
    detail::record(y, "add", {a, b}, [a, b](TensorImpl& o) {
        for (const Tensor* t : {&a, &b}) {
            auto g = detail::grad_of(*t);
            for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.grad[i];
        }
    });
    return y;
}

inline Tensor sub(const Tensor& a, const Tensor& b) {
    detail::require_same_shape(a, b, "sub");
    std::vector<float> out(a.data().begin(), a.data().end());
    auto bd = b.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= bd[i];
    Tensor y(a.shape(), std::move(out));
    detail::record(y, "sub", {a, b}, [a, b](TensorImpl& o) {
        auto ga = detail::grad_of(a);
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += o.grad[i];
        auto gb = detail::grad_of(b);
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] -= o.grad[i];
    });
    return y;
}

inline Tensor mul(const Tensor& a, const Tensor& b) {
    detail::require_same_shape(a, b, "mul");
    std::vector<float> out(a.data().size());
    auto ad = a.data();
    auto bd = b.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = ad[i] * bd[i];
    Tensor y(a.shape(), std::move(out));
    detail::record(y, "mul", {a, b}, [a, b](TensorImpl& o) {
        auto ga = detail::grad_of(a);
        auto bd = b.data();
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += o.grad[i] * bd[i];
        auto gb = detail::grad_of(b);
        auto ad = a.data();
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += o.grad[i] * ad[i];
    });
    return y;
}

inline Tensor scale(const Tensor& x, float s) {
    return detail::unary(
        x, "scale", [s](float v) { return v * s; }, [s](float, float) { return s; });
}

inline Tensor relu(const Tensor& x) {
    if (detail::branch_signature()) {
        std::uint64_t word = 0;
        std::size_t n = 0;
        for (float v : x.data()) {
            word = (word << 1) | (v > 0.0f ? 1u : 0u);
            if (++n % 64 == 0) detail::note_branches(word);
        }
        detail::note_branches(word ^ n);
    }
    return detail::unary(
        x, "relu", [](float v) { return v > 0.0f ? v : 0.0f; },
        [](float in, float) { return in > 0.0f ? 1.0f : 0.0f; });
}

inline Tensor sigmoid(const Tensor& x) {
    return detail::unary(
        x, "sigmoid",
        [](float v) {
            // split by sign so exp never overflows
            if (v >= 0.0f) return 1.0f / (1.0f + std::exp(-v));
            const float e = std::exp(v);
            return e / (1.0f + e);
        },
        [](float, float out) { return out * (1.0f - out); });
}

inline Tensor square(const Tensor& x) {
    return detail::unary(
        x, "square", [](float v) { return v * v; }, [](float in, float) { return 2.0f * in; });
}

/// [m,k] x [k,n] -> [m,n]
inline Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
        throw DimensionError("matmul: incompatible shapes " + shape_str(a.shape()) + " x " +
                             shape_str(b.shape()));
    }
    const Index m = a.dim(0), k = a.dim(1), n = b.dim(1);
    Tensor y = Tensor::zeros({m, n});
    detail::mat(y.data().data(), m, n).noalias() =
        detail::cmat(a.data().data(), m, k) * detail::cmat(b.data().data(), k, n);
    detail::record(y, "matmul", {a, b}, [a, b, m, k, n](TensorImpl& o) {
        auto dy = detail::cmat(o.grad.data(), m, n);
        if (auto ga = detail::grad_of(a); !ga.empty()) {
            detail::mat(ga.data(), m, k).noalias() += dy * detail::cmat(b.data().data(), k, n).transpose();
        }
        if (auto gb = detail::grad_of(b); !gb.empty()) {
            detail::mat(gb.data(), k, n).noalias() += detail::cmat(a.data().data(), m, k).transpose() * dy;
        }
    });
    return y;
}

inline Tensor transpose(const Tensor& x) {
    if (x.rank() != 2) throw DimensionError("transpose: expected rank 2, got " + shape_str(x.shape()));
    const Index r = x.dim(0), c = x.dim(1);
    Tensor y = Tensor::zeros({c, r});
    detail::mat(y.data().data(), c, r) = detail::cmat(x.data().data(), r, c).transpose();
    detail::record(y, "transpose", {x}, [x, r, c](TensorImpl& o) {
        if (auto gx = detail::grad_of(x); !gx.empty()) {
            detail::mat(gx.data(), r, c) += detail::cmat(o.grad.data(), c, r).transpose();
        }
    });
    return y;
}

/// x[N,in] . W[in,out] + b[out]; `b` may be undefined.
inline Tensor linear(const Tensor& x, const Tensor& w, const Tensor& b = {}) {
    if (x.rank() != 2 || w.rank() != 2 || x.dim(1) != w.dim(0)) {
        throw DimensionError("linear: incompatible shapes " + shape_str(x.shape()) + " x " +
                             shape_str(w.shape()));
    }
    const Index n = x.dim(0), in = x.dim(1), out = w.dim(1);
    if (b.defined() && (b.rank() != 1 || b.dim(0) != out)) {
        throw DimensionError("linear: bias shape " + shape_str(b.shape()) + " does not match out dim " +
                             std::to_string(out));
    }
    Tensor y = Tensor::zeros({n, out});
    auto ym = detail::mat(y.data().data(), n, out);
    ym.noalias() = detail::cmat(x.data().data(), n, in) * detail::cmat(w.data().data(), in, out);
    if (b.defined()) ym.rowwise() += detail::crow(b.data().data(), out);
    detail::record(y, "linear", {x, w, b}, [x, w, b, n, in, out](TensorImpl& o) {
        auto dy = detail::cmat(o.grad.data(), n, out);
        if (auto gx = detail::grad_of(x); !gx.empty()) {
            detail::mat(gx.data(), n, in).noalias() += dy * detail::cmat(w.data().data(), in, out).transpose();
        }
        if (auto gw = detail::grad_of(w); !gw.empty()) {
            detail::mat(gw.data(), in, out).noalias() += detail::cmat(x.data().data(), n, in).transpose() * dy;
        }
        if (auto gb = detail::grad_of(b); !gb.empty()) {
            detail::add_col_sums(gb.data(), o.grad.data(), n, out);
        }
    });
    return y;
}

/// Numerically stable softmax along `axis` (max subtracted before exp).
inline Tensor softmax(const Tensor& x, Index axis) {
    axis = detail::normalize_axis(axis, x.rank(), x.shape());
    const auto s = detail::split_at(x.shape(), axis);
    std::vector<float> out(x.data().size());
    auto xd = x.data();
    for (Index o = 0; o < s.outer; ++o) {
        for (Index i = 0; i < s.inner; ++i) {
            const Index base = o * s.n * s.inner + i;
            float mx = -std::numeric_limits<float>::infinity();
            for (Index k = 0; k < s.n; ++k) mx = std::max(mx, xd[base + k * s.inner]);
            double total = 0.0;
            for (Index k = 0; k < s.n; ++k) {
                const float e = std::exp(xd[base + k * s.inner] - mx);
                out[base + k * s.inner] = e;
                total += e;
            }
            const auto inv = static_cast<float>(1.0 / total);
            for (Index k = 0; k < s.n; ++k) out[base + k * s.inner] *= inv;
        }
    }
    Tensor y(x.shape(), std::move(out));
    detail::record(y, "softmax", {x}, [x, s](TensorImpl& o) {
        auto gx = detail::grad_of(x);
        if (gx.empty()) return;
        for (Index oo = 0; oo < s.outer; ++oo) {
            for (Index i = 0; i < s.inner; ++i) {
                const Index base = oo * s.n * s.inner + i;
                double dot = 0.0;
                for (Index k = 0; k < s.n; ++k) {
                    const Index j = base + k * s.inner;
                    dot += static_cast<double>(o.grad[j]) * o.data[j];
                }
                for (Index k = 0; k < s.n; ++k) {
                    const Index j = base + k * s.inner;
                    gx[j] += o.data[j] * (o.grad[j] - static_cast<float>(dot));
                }
            }
        }
    });
    return y;
}

inline constexpr float kLayerNormEps = 1e-5f;

/// Normalizes to zero mean / unit variance along `axis`, then applies
/// gamma[n] * xhat + beta[n]. Biased variance; eps inside the sqrt.
inline Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, Index axis = -1,
                         float eps = kLayerNormEps) {
    axis = detail::normalize_axis(axis, x.rank(), x.shape());
    const auto s = detail::split_at(x.shape(), axis);
    if (gamma.numel() != s.n || beta.numel() != s.n) {
        throw DimensionError("layer_norm: scale/shift length must equal normalized dim " + std::to_string(s.n));
    }
    std::vector<float> out(x.data().size());
    std::vector<float> xhat(x.data().size());
    std::vector<float> inv_std(static_cast<std::size_t>(s.outer * s.inner));
    auto xd = x.data();
    auto gd = gamma.data();
    auto bd = beta.data();
    for (Index o = 0; o < s.outer; ++o) {
        for (Index i = 0; i < s.inner; ++i) {
            const Index base = o * s.n * s.inner + i;
            double mean = 0.0;
            for (Index k = 0; k < s.n; ++k) mean += xd[base + k * s.inner];
            mean /= static_cast<double>(s.n);
            double var = 0.0;
            for (Index k = 0; k < s.n; ++k) {
                const double d = xd[base + k * s.inner] - mean;
                var += d * d;
            }
            var /= static_cast<double>(s.n);
            const double istd = 1.0 / std::sqrt(var + eps);
            inv_std[static_cast<std::size_t>(o * s.inner + i)] = static_cast<float>(istd);
            for (Index k = 0; k < s.n; ++k) {
                const Index j = base + k * s.inner;
                const auto xh = static_cast<float>((xd[j] - mean) * istd);
                xhat[j] = xh;
                out[j] = gd[k] * xh + bd[k];
            }
        }
    }
    Tensor y(x.shape(), std::move(out));
    detail::record(y, "layer_norm", {x, gamma, beta},
                   [x, gamma, beta, s, xhat = std::move(xhat), inv_std = std::move(inv_std)](TensorImpl& o) {
                       auto gx = detail::grad_of(x);
                       auto gg = detail::grad_of(gamma);
                       auto gb = detail::grad_of(beta);
                       auto gd = gamma.data();
                       for (Index oo = 0; oo < s.outer; ++oo) {
                           for (Index i = 0; i < s.inner; ++i) {
                               const Index base = oo * s.n * s.inner + i;
                               double mean_dxh = 0.0, mean_dxh_xh = 0.0;
                               for (Index k = 0; k < s.n; ++k) {
                                   const Index j = base + k * s.inner;
                                   const double dxh = static_cast<double>(o.grad[j]) * gd[k];
                                   mean_dxh += dxh;
                                   mean_dxh_xh += dxh * xhat[j];
                                   if (!gg.empty()) gg[k] += o.grad[j] * xhat[j];
                                   if (!gb.empty()) gb[k] += o.grad[j];
                               }
                               if (gx.empty()) continue;
                               mean_dxh /= static_cast<double>(s.n);
                               mean_dxh_xh /= static_cast<double>(s.n);
                               const double istd = inv_std[static_cast<std::size_t>(oo * s.inner + i)];
                               for (Index k = 0; k < s.n; ++k) {
                                   const Index j = base + k * s.inner;
                                   const double dxh = static_cast<double>(o.grad[j]) * gd[k];
                                   gx[j] += static_cast<float>(istd * (dxh - mean_dxh - xhat[j] * mean_dxh_xh));
                               }
                           }
                       }
                   });
    return y;
}

inline Tensor reshape(const Tensor& x, Shape shape) {
    if (numel_of(shape) != x.numel()) {
        throw DimensionError("reshape: cannot view " + shape_str(x.shape()) + " as " + shape_str(shape));
    }
    Tensor y(std::move(shape), std::vector<float>(x.data().begin(), x.data().end()));
    detail::record(y, "reshape", {x}, [x](TensorImpl& o) {
        auto gx = detail::grad_of(x);
        for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += o.grad[i];
    });
    return y;
}

/// Concatenation along `axis`; all other dims must agree.
inline Tensor concat(const std::vector<Tensor>& xs, Index axis) {
    if (xs.empty()) throw DimensionError("concat: no inputs");
    const Shape& ref = xs.front().shape();
    axis = detail::normalize_axis(axis, static_cast<Index>(ref.size()), ref);
    Shape out_shape = ref;
    out_shape[static_cast<std::size_t>(axis)] = 0;
    for (const auto& t : xs) {
        if (t.rank() != static_cast<Index>(ref.size())) throw DimensionError("concat: rank mismatch");
        for (Index d = 0; d < t.rank(); ++d) {
            if (d != axis && t.shape()[static_cast<std::size_t>(d)] != ref[static_cast<std::size_t>(d)]) {
                throw DimensionError("concat: shape mismatch " + shape_str(t.shape()) + " vs " + shape_str(ref));
            }
        }
        out_shape[static_cast<std::size_t>(axis)] += t.dim(axis);
    }
    const auto so = detail::split_at(out_shape, axis);
    std::vector<float> out(static_cast<std::size_t>(numel_of(out_shape)));
    Index offset = 0;
    for (const auto& t : xs) {
        const Index chunk = t.dim(axis) * so.inner;
        auto td = t.data();
        for (Index o = 0; o < so.outer; ++o) {
            std::copy_n(td.begin() + o * chunk, chunk, out.begin() + o * so.n * so.inner + offset);
        }
        offset += chunk;
    }
    Tensor y(std::move(out_shape), std::move(out));
    detail::record(y, "concat", xs, [xs, axis, so](TensorImpl& o) {
        Index offset = 0;
        for (const auto& t : xs) {
            const Index chunk = t.dim(axis) * so.inner;
            if (auto g = detail::grad_of(t); !g.empty()) {
                for (Index oo = 0; oo < so.outer; ++oo) {
                    const float* src = o.grad.data() + oo * so.n * so.inner + offset;
                    float* dst = g.data() + oo * chunk;
                    for (Index k = 0; k < chunk; ++k) dst[k] += src[k];
                }
            }
            offset += chunk;
        }
    });
    return y;
}

/// Slice [start, start+length) along `axis`.
inline Tensor narrow(const Tensor& x, Index axis, Index start, Index length) {
    axis = detail::normalize_axis(axis, x.rank(), x.shape());
    const auto s = detail::split_at(x.shape(), axis);
    if (start < 0 || length < 0 || start + length > s.n) {
        throw DimensionError("narrow: range [" + std::to_string(start) + ", " + std::to_string(start + length) +
                             ") out of bounds for shape " + shape_str(x.shape()));
    }
    Shape out_shape = x.shape();
    out_shape[static_cast<std::size_t>(axis)] = length;
    std::vector<float> out(static_cast<std::size_t>(numel_of(out_shape)));
    const Index chunk = length * s.inner;
    auto xd = x.data();
    for (Index o = 0; o < s.outer; ++o) {
        std::copy_n(xd.begin() + o * s.n * s.inner + start * s.inner, chunk, out.begin() + o * chunk);
    }
    Tensor y(std::move(out_shape), std::move(out));
    detail::record(y, "narrow", {x}, [x, s, start, chunk](TensorImpl& o) {
        auto gx = detail::grad_of(x);
        if (gx.empty()) return;
        for (Index oo = 0; oo < s.outer; ++oo) {
            float* dst = gx.data() + oo * s.n * s.inner + start * s.inner;
            const float* src = o.grad.data() + oo * chunk;
            for (Index k = 0; k < chunk; ++k) dst[k] += src[k];
        }
    });
    return y;
}

namespace detail {

/// Calls visit(image_index, token_index) for every element of the patch
/// permutation [B,C,H,W] <-> [B, g*g, C*ph*pw]. Patch p = pi*g + pj; inside
/// a patch features are ordered (channel, row, col).
template <typename Visit>
void for_each_patch_element(Index B, Index C, Index H, Index W, Index g, Visit visit) {
    const Index ph = H / g, pw = W / g;
    const Index feat = C * ph * pw;
    for (Index b = 0; b < B; ++b) {
        for (Index c = 0; c < C; ++c) {
            for (Index y = 0; y < H; ++y) {
                const Index pi = y / ph, yy = y % ph;
                for (Index x = 0; x < W; ++x) {
                    const Index pj = x / pw, xx = x % pw;
                    const Index src = ((b * C + c) * H + y) * W + x;
                    const Index dst = (b * g * g + pi * g + pj) * feat + (c * ph + yy) * pw + xx;
                    visit(src, dst);
                }
            }
        }
    }
}

inline void check_patch_grid(Index H, Index W, Index g) {
    if (g <= 0 || H % g != 0 || W % g != 0) {
        throw ConfigError("patch grid " + std::to_string(g) + " does not divide feature map " + std::to_string(H) +
                          "x" + std::to_string(W));
    }
}

}  // namespace detail

/// [B,C,H,W] -> [B, g*g, C*(H/g)*(W/g)]
inline Tensor patchify(const Tensor& x, Index grid) {
    if (x.rank() != 4) throw DimensionError("patchify: expected [B,C,H,W], got " + shape_str(x.shape()));
    const Index B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    detail::check_patch_grid(H, W, grid);
    const Index feat = C * (H / grid) * (W / grid);
    std::vector<float> out(x.data().size());
    auto xd = x.data();
    detail::for_each_patch_element(B, C, H, W, grid, [&](Index src, Index dst) { out[dst] = xd[src]; });
    Tensor y({B, grid * grid, feat}, std::move(out));
    detail::record(y, "patchify", {x}, [x, B, C, H, W, grid](TensorImpl& o) {
        auto gx = detail::grad_of(x);
        if (gx.empty()) return;
        detail::for_each_patch_element(B, C, H, W, grid, [&](Index src, Index dst) { gx[src] += o.grad[dst]; });
    });
    return y;
}

/// Inverse of patchify: [B, g*g, C*ph*pw] -> [B,C,H,W].
inline Tensor combine_patches(const Tensor& tokens, Index grid, Index C, Index H, Index W) {
    detail::check_patch_grid(H, W, grid);
    if (tokens.rank() != 3 || tokens.dim(1) != grid * grid || tokens.dim(2) != C * (H / grid) * (W / grid)) {
        throw DimensionError("combine_patches: tokens " + shape_str(tokens.shape()) + " do not fit " +
                             std::to_string(C) + "x" + std::to_string(H) + "x" + std::to_string(W));
    }
    const Index B = tokens.dim(0);
    std::vector<float> out(tokens.data().size());
    auto td = tokens.data();
    detail::for_each_patch_element(B, C, H, W, grid, [&](Index src, Index dst) { out[src] = td[dst]; });
    Tensor y({B, C, H, W}, std::move(out));
    detail::record(y, "combine_patches", {tokens}, [tokens, B, C, H, W, grid](TensorImpl& o) {
        auto gt = detail::grad_of(tokens);
        if (gt.empty()) return;
        detail::for_each_patch_element(B, C, H, W, grid, [&](Index src, Index dst) { gt[dst] += o.grad[src]; });
    });
    return y;
}

inline Tensor sum(const Tensor& x) {
    double acc = 0.0;
    for (float v : x.data()) acc += v;
    Tensor y = Tensor::scalar(static_cast<float>(acc));
    detail::record(y, "sum", {x}, [x](TensorImpl& o) {
        auto gx = detail::grad_of(x);
        for (auto& g : gx) g += o.grad[0];
    });
    return y;
}

inline Tensor mean(const Tensor& x) {
    if (x.numel() == 0) throw DimensionError("mean of empty tensor");
    return scale(sum(x), 1.0f / static_cast<float>(x.numel()));
}

/// Mean absolute error; subgradient 0 where pred == target.
inline Tensor l1_loss(const Tensor& pred, const Tensor& target) {
    detail::require_same_shape(pred, target, "l1_loss");
    if (pred.numel() == 0) throw DimensionError("l1_loss on empty tensors");
    auto pd = pred.data();
    auto td = target.data();
    double acc = 0.0;
    for (std::size_t i = 0; i < pd.size(); ++i) acc += std::abs(static_cast<double>(pd[i]) - td[i]);
    const double n = static_cast<double>(pd.size());
    Tensor y = Tensor::scalar(static_cast<float>(acc / n));
    detail::record(y, "l1_loss", {pred, target}, [pred, target, n](TensorImpl& o) {
        const auto g = static_cast<float>(o.grad[0] / n);
        auto pd = pred.data();
        auto td = target.data();
        auto gp = detail::grad_of(pred);
        auto gt = detail::grad_of(target);
        for (std::size_t i = 0; i < pd.size(); ++i) {
            const float sgn = pd[i] > td[i] ? 1.0f : (pd[i] < td[i] ? -1.0f : 0.0f);
            if (!gp.empty()) gp[i] += g * sgn;
            if (!gt.empty()) gt[i] -= g * sgn;
        }
    });
    return y;
}

/// Mean squared error.
inline Tensor mse_loss(const Tensor& pred, const Tensor& target) {
    detail::require_same_shape(pred, target, "mse_loss");
    if (pred.numel() == 0) throw DimensionError("mse_loss on empty tensors");
    auto pd = pred.data();
    auto td = target.data();
    double acc = 0.0;
    for (std::size_t i = 0; i < pd.size(); ++i) {
        const double d = static_cast<double>(pd[i]) - td[i];
        acc += d * d;
    }
    const double n = static_cast<double>(pd.size());
    Tensor y = Tensor::scalar(static_cast<float>(acc / n));
    detail::record(y, "mse_loss", {pred, target}, [pred, target, n](TensorImpl& o) {
        const auto g = static_cast<float>(2.0 * o.grad[0] / n);
        auto pd = pred.data();
        auto td = target.data();
        auto gp = detail::grad_of(pred);
        auto gt = detail::grad_of(target);
        for (std::size_t i = 0; i < pd.size(); ++i) {
            const float d = pd[i] - td[i];
            if (!gp.empty()) gp[i] += g * d;
            if (!gt.empty()) gt[i] -= g * d;
        }
    });
    return y;
}

}  // namespace radionet
