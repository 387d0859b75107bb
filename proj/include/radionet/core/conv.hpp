// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Spatial ops on NCHW tensors.
//
// conv2d is cross-correlation (no kernel flip):
//   y[b,f,i,j] = bias[f] + sum_{c,u,v} w[f,c,u,v] * x[b,c, i*s-p+u, j*s-p+v]
// with out size floor((H + 2p - k) / s) + 1.
//
// conv_transpose2d is the adjoint of conv2d with respect to its input, with
// weight layout [C_in, C_out, kh, kw] and out size (H - 1)*s - 2p + k. With
// k = s = 2 and p = 0 it exactly doubles H and W, and undoes the shape
// change of conv2d(k = 2, s = 2, p = 0).
//
// maxpool2d routes the gradient to the first maximal element of each window
// in row-major order.
#pragma once

#include <string>
#include <vector>

#include "radionet/core/ops.hpp"

namespace radionet {

struct Conv2dGeometry {
    Index channels, height, width;
    Index kh, kw, stride, padding;
    Index out_h, out_w;
};

namespace detail {

inline Conv2dGeometry conv_geometry(Index C, Index H, Index W, Index kh, Index kw, Index stride, Index padding,
                                    const char* op) {
    if (stride < 1) throw DimensionError(std::string(op) + ": stride must be >= 1");
    if (padding < 0) throw DimensionError(std::string(op) + ": padding must be >= 0");
    if (kh < 1 || kw < 1 || kh > H + 2 * padding || kw > W + 2 * padding) {
        throw DimensionError(std::string(op) + ": kernel " + std::to_string(kh) + "x" + std::to_string(kw) +
                             " larger than padded input " + std::to_string(H + 2 * padding) + "x" +
                             std::to_string(W + 2 * padding));
    }
    return {C, H, W, kh, kw, stride, padding, (H + 2 * padding - kh) / stride + 1,
            (W + 2 * padding - kw) / stride + 1};
}

/// col[(c*kh+u)*kw+v, i*out_w+j] = img[c, i*s-p+u, j*s-p+v] (0 outside).
inline void im2col(const float* img, const Conv2dGeometry& g, float* col) {
    const Index ohw = g.out_h * g.out_w;
    for (Index c = 0; c < g.channels; ++c) {
        for (Index u = 0; u < g.kh; ++u) {
            for (Index v = 0; v < g.kw; ++v) {
                float* row = col + ((c * g.kh + u) * g.kw + v) * ohw;
                for (Index i = 0; i < g.out_h; ++i) {
                    const Index y = i * g.stride - g.padding + u;
                    float* dst = row + i * g.out_w;
                    if (y < 0 || y >= g.height) {
                        std::fill_n(dst, g.out_w, 0.0f);
                        continue;
                    }
                    const float* src = img + (c * g.height + y) * g.width;
                    if (g.stride == 1) {
                        // valid columns form one contiguous run
                        const Index off = v - g.padding;
                        const Index j0 = std::clamp<Index>(-off, 0, g.out_w);
                        const Index j1 = std::clamp<Index>(g.width - off, j0, g.out_w);
                        std::fill(dst, dst + j0, 0.0f);
                        std::copy(src + j0 + off, src + j1 + off, dst + j0);
                        std::fill(dst + j1, dst + g.out_w, 0.0f);
                        continue;
                    }
                    for (Index j = 0; j < g.out_w; ++j) {
                        const Index x = j * g.stride - g.padding + v;
                        dst[j] = (x >= 0 && x < g.width) ? src[x] : 0.0f;
                    }
                }
            }
        }
    }
}

/// Adjoint of im2col: accumulates col entries back into img.
inline void col2im(const float* col, const Conv2dGeometry& g, float* img) {
    const Index ohw = g.out_h * g.out_w;
    for (Index c = 0; c < g.channels; ++c) {
        for (Index u = 0; u < g.kh; ++u) {
            for (Index v = 0; v < g.kw; ++v) {
                const float* row = col + ((c * g.kh + u) * g.kw + v) * ohw;
                for (Index i = 0; i < g.out_h; ++i) {
                    const Index y = i * g.stride - g.padding + u;
                    if (y < 0 || y >= g.height) continue;
                    float* dst = img + (c * g.height + y) * g.width;
                    const float* src = row + i * g.out_w;
                    if (g.stride == 1) {
                        const Index off = v - g.padding;
                        const Index j0 = std::clamp<Index>(-off, 0, g.out_w);
                        const Index j1 = std::clamp<Index>(g.width - off, j0, g.out_w);
                        for (Index j = j0; j < j1; ++j) dst[j + off] += src[j];
                        continue;
                    }
                    for (Index j = 0; j < g.out_w; ++j) {
                        const Index x = j * g.stride - g.padding + v;
                        if (x >= 0 && x < g.width) dst[x] += src[j];
                    }
                }
            }
        }
    }
}

inline bool is_pointwise(const Conv2dGeometry& g) {
    return g.kh == 1 && g.kw == 1 && g.stride == 1 && g.padding == 0;
}

inline void check_bias(const Tensor& bias, Index n, const char* op) {
    if (bias.defined() && (bias.rank() != 1 || bias.dim(0) != n)) {
        throw DimensionError(std::string(op) + ": bias shape " + shape_str(bias.shape()) + " does not match " +
                             std::to_string(n) + " output channels");
    }
}

}  // namespace detail

/// x[B,C,H,W] (*) w[F,C,kh,kw] + bias[F] -> [B,F,H',W']; bias may be undefined.
inline Tensor conv2d(const Tensor& x, const Tensor& w, const Tensor& bias = {}, Index stride = 1,
                     Index padding = 0) {
    if (x.rank() != 4 || w.rank() != 4 || x.dim(1) != w.dim(1)) {
        throw DimensionError("conv2d: incompatible input " + shape_str(x.shape()) + " and weight " +
                             shape_str(w.shape()));
    }
    const Index B = x.dim(0), F = w.dim(0);
    const auto g = detail::conv_geometry(x.dim(1), x.dim(2), x.dim(3), w.dim(2), w.dim(3), stride, padding, "conv2d");
    detail::check_bias(bias, F, "conv2d");
    const Index ckk = g.channels * g.kh * g.kw, ohw = g.out_h * g.out_w, chw = g.channels * g.height * g.width;

    Tensor y = Tensor::zeros({B, F, g.out_h, g.out_w});
    std::vector<float> col(detail::is_pointwise(g) ? 0 : static_cast<std::size_t>(ckk * ohw));
    auto wm = detail::cmat(w.data().data(), F, ckk);
    for (Index b = 0; b < B; ++b) {
        const float* xb = x.data().data() + b * chw;
        if (!detail::is_pointwise(g)) detail::im2col(xb, g, col.data());
        const float* cp = col.empty() ? xb : col.data();
        auto ym = detail::mat(y.data().data() + b * F * ohw, F, ohw);
        ym.noalias() = wm * detail::cmat(cp, ckk, ohw);
        if (bias.defined()) ym.colwise() += detail::cvec(bias.data().data(), F);
    }

    detail::record(y, "conv2d", {x, w, bias}, [x, w, bias, g, B, F, ckk, ohw, chw](TensorImpl& o) {
        auto gx = detail::grad_of(x);
        auto gw = detail::grad_of(w);
        auto gb = detail::grad_of(bias);
        const bool pointwise = detail::is_pointwise(g);
        std::vector<float> col(pointwise ? 0 : static_cast<std::size_t>(ckk * ohw));
        std::vector<float> dcol(!gx.empty() && !pointwise ? static_cast<std::size_t>(ckk * ohw) : 0);
        auto wm = detail::cmat(w.data().data(), F, ckk);
        for (Index b = 0; b < B; ++b) {
            auto dy = detail::cmat(o.grad.data() + b * F * ohw, F, ohw);
            const float* xb = x.data().data() + b * chw;
            if (!gw.empty()) {
                if (!pointwise) detail::im2col(xb, g, col.data());
                const float* cp = pointwise ? xb : col.data();
                detail::mat(gw.data(), F, ckk).noalias() += dy * detail::cmat(cp, ckk, ohw).transpose();
            }
            if (!gb.empty()) detail::add_row_sums(gb.data(), o.grad.data() + b * F * ohw, F, ohw);
            if (!gx.empty()) {
                if (pointwise) {
                    detail::mat(gx.data() + b * chw, ckk, ohw).noalias() += wm.transpose() * dy;
                } else {
                    detail::mat(dcol.data(), ckk, ohw).noalias() = wm.transpose() * dy;
                    detail::col2im(dcol.data(), g, gx.data() + b * chw);
                }
            }
        }
    });
    return y;
}

/// x[B,C,H,W], w[C,F,kh,kw], bias[F] -> [B,F,(H-1)s-2p+kh,(W-1)s-2p+kw].
inline Tensor conv_transpose2d(const Tensor& x, const Tensor& w, const Tensor& bias = {}, Index stride = 1,
                               Index padding = 0) {
    if (x.rank() != 4 || w.rank() != 4 || x.dim(1) != w.dim(0)) {
        throw DimensionError("conv_transpose2d: incompatible input " + shape_str(x.shape()) + " and weight " +
                             shape_str(w.shape()));
    }
    if (stride < 1) throw DimensionError("conv_transpose2d: stride must be >= 1");
    const Index B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    const Index F = w.dim(1), kh = w.dim(2), kw = w.dim(3);
    const Index out_h = (H - 1) * stride - 2 * padding + kh;
    const Index out_w = (W - 1) * stride - 2 * padding + kw;
    if (out_h < 1 || out_w < 1) {
        throw DimensionError("conv_transpose2d: padding " + std::to_string(padding) + " leaves no output");
    }
    // Geometry of the forward conv that maps the output grid back onto x.
    const auto g = detail::conv_geometry(F, out_h, out_w, kh, kw, stride, padding, "conv_transpose2d");
    if (g.out_h != H || g.out_w != W) {
        throw DimensionError("conv_transpose2d: inconsistent geometry for input " + shape_str(x.shape()));
    }
    detail::check_bias(bias, F, "conv_transpose2d");
    const Index fkk = F * kh * kw, hw = H * W, ohw = out_h * out_w;

    Tensor y = Tensor::zeros({B, F, out_h, out_w});
    std::vector<float> col(static_cast<std::size_t>(fkk * hw));
    auto wm = detail::cmat(w.data().data(), C, fkk);
    for (Index b = 0; b < B; ++b) {
        detail::mat(col.data(), fkk, hw).noalias() = wm.transpose() * detail::cmat(x.data().data() + b * C * hw, C, hw);
        float* yb = y.data().data() + b * F * ohw;
        detail::col2im(col.data(), g, yb);
        if (bias.defined()) detail::mat(yb, F, ohw).colwise() += detail::cvec(bias.data().data(), F);
    }

    detail::record(y, "conv_transpose2d", {x, w, bias}, [x, w, bias, g, B, C, F, fkk, hw, ohw](TensorImpl& o) {
        auto gx = detail::grad_of(x);
        auto gw = detail::grad_of(w);
        auto gb = detail::grad_of(bias);
        std::vector<float> col(static_cast<std::size_t>(fkk * hw));
        auto wm = detail::cmat(w.data().data(), C, fkk);
        for (Index b = 0; b < B; ++b) {
            const float* dyb = o.grad.data() + b * F * ohw;
            if (!gb.empty()) detail::add_row_sums(gb.data(), dyb, F, ohw);
            if (gx.empty() && gw.empty()) continue;
            detail::im2col(dyb, g, col.data());
            auto cm = detail::cmat(col.data(), fkk, hw);
            if (!gx.empty()) detail::mat(gx.data() + b * C * hw, C, hw).noalias() += wm * cm;
            if (!gw.empty()) {
                detail::mat(gw.data(), C, fkk).noalias() +=
                    detail::cmat(x.data().data() + b * C * hw, C, hw) * cm.transpose();
            }
        }
    });
    return y;
}

/// Max over k x k windows with the given stride (no padding).
inline Tensor maxpool2d(const Tensor& x, Index k, Index stride) {
    if (x.rank() != 4) throw DimensionError("maxpool2d: expected [B,C,H,W], got " + shape_str(x.shape()));
    if (stride < 1) throw DimensionError("maxpool2d: stride must be >= 1");
    const Index B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    if (k < 1 || k > H || k > W) {
        throw DimensionError("maxpool2d: window " + std::to_string(k) + " exceeds input " + shape_str(x.shape()));
    }
    const Index oh = (H - k) / stride + 1, ow = (W - k) / stride + 1;
    Tensor y = Tensor::zeros({B, C, oh, ow});
    std::vector<Index> argmax(static_cast<std::size_t>(B * C * oh * ow));
    auto xd = x.data();
    auto yd = y.data();
    for (Index bc = 0; bc < B * C; ++bc) {
        const Index base = bc * H * W;
        for (Index i = 0; i < oh; ++i) {
            for (Index j = 0; j < ow; ++j) {
                Index best = base + (i * stride) * W + j * stride;
                for (Index u = 0; u < k; ++u) {
                    for (Index v = 0; v < k; ++v) {
                        const Index idx = base + (i * stride + u) * W + j * stride + v;
                        if (xd[idx] > xd[best]) best = idx;
                    }
                }
                const Index o = (bc * oh + i) * ow + j;
                argmax[static_cast<std::size_t>(o)] = best;
                yd[o] = xd[best];
            }
        }
    }
    if (detail::branch_signature()) {
        for (Index a : argmax) detail::note_branches(static_cast<std::uint64_t>(a));
    }
    detail::record(y, "maxpool2d", {x}, [x, argmax = std::move(argmax)](TensorImpl& o) {
        auto gx = detail::grad_of(x);
        if (gx.empty()) return;
        for (std::size_t i = 0; i < argmax.size(); ++i) gx[argmax[i]] += o.grad[i];
    });
    return y;
}

}  // namespace radionet
