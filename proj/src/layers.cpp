#include "layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace radar_ood {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

void check_conv_shapes(const Tensor& input, const Tensor& kernels, const Tensor& bias,
                       const char* op) {
    require(input.ndim() == 3, "conv input must be (H,W,C)");
    require(kernels.ndim() == 4 && kernels.dim(0) == 3 && kernels.dim(1) == 3,
            "kernels must be (3,3,C_in,C_out)");
    if (kernels.dim(2) != input.dim(2))
        throw std::invalid_argument(std::string(op) + ": kernel C_in " +
                                    std::to_string(kernels.dim(2)) + " != input channels " +
                                    std::to_string(input.dim(2)));
    require(bias.ndim() == 1 && bias.dim(0) == kernels.dim(3), "bias must be (C_out)");
    require(input.dim(0) >= 1 && input.dim(1) >= 1, "spatial dims must be >= 1");
}

// Kernel transposed to (3,3,C_out,C_in); makes the input-gradient inner loops
// run over contiguous memory.
Tensor swap_kernel_channels(const Tensor& kernels) {
    const std::size_t c_in = kernels.dim(2), c_out = kernels.dim(3);
    Tensor out({3, 3, c_out, c_in});
    for (std::size_t k = 0; k < 9; ++k) {
        const double* src = kernels.data.data() + k * c_in * c_out;
        double* dst = out.data.data() + k * c_in * c_out;
        for (std::size_t ci = 0; ci < c_in; ++ci)
            for (std::size_t co = 0; co < c_out; ++co)
                dst[co * c_in + ci] = src[ci * c_out + co];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Specialized hot paths for the channel pairs the autoencoder stacks use.
// Compile-time channel counts let the compiler keep the per-pixel accumulator
// rows in vector registers; interior pixels skip the padding checks and are
// processed two at a time so each kernel-row load feeds two accumulations.
// The per-pixel summation order is identical to the generic loops below, so
// specialized and generic paths produce bit-identical results.

// Shared gather pattern: out(i,j,:) = bias + sum over taps of
// src(i+ki-1, j+kj-1, :) @ ker[ki][kj]   (FLIP = false; conv forward)
// src(i-ki+1, j-kj+1, :) @ ker[ki][kj]   (FLIP = true;  tconv forward)
// The input gradients of tconv/conv are the same two patterns run on the
// channel-swapped kernel with a null bias.
template <std::size_t CI, std::size_t CO, bool FLIP>
void gather3x3(const double* __restrict in, const double* __restrict ker,
               const double* __restrict bias, double* __restrict out, std::size_t h,
               std::size_t w) {
    auto edge_pixel = [&](std::size_t i, std::size_t j) {
        double acc[CO];
        if (bias)
            for (std::size_t co = 0; co < CO; ++co) acc[co] = bias[co];
        else
            for (std::size_t co = 0; co < CO; ++co) acc[co] = 0.0;
        for (std::size_t ki = 0; ki < 3; ++ki) {
            const std::size_t ii = FLIP ? i + 1 - ki : i + ki - 1; // unsigned wrap = invalid
            if (ii >= h) continue;
            for (std::size_t kj = 0; kj < 3; ++kj) {
                const std::size_t jj = FLIP ? j + 1 - kj : j + kj - 1;
                if (jj >= w) continue;
                const double* __restrict irow = in + (ii * w + jj) * CI;
                const double* __restrict krow = ker + (ki * 3 + kj) * CI * CO;
                for (std::size_t ci = 0; ci < CI; ++ci) {
                    const double a = irow[ci];
// without this, gcc fully unrolls narrow channel rows and then fails to
// vectorize them (observed 8x slowdown for the (32,16) pair)
#pragma GCC unroll 1
                    for (std::size_t co = 0; co < CO; ++co) acc[co] += a * krow[ci * CO + co];
                }
            }
        }
        std::memcpy(out + (i * w + j) * CO, acc, sizeof(acc));
    };

    for (std::size_t i = 0; i < h; ++i) {
        if (i == 0 || i + 1 == h) {
            for (std::size_t j = 0; j < w; ++j) edge_pixel(i, j);
            continue;
        }
        edge_pixel(i, 0);
        std::size_t j = 1;
        for (; j + 2 < w; j += 2) {
            double acc0[CO], acc1[CO];
            if (bias)
                for (std::size_t co = 0; co < CO; ++co) acc0[co] = acc1[co] = bias[co];
            else
                for (std::size_t co = 0; co < CO; ++co) acc0[co] = acc1[co] = 0.0;
            const double* __restrict base = in + ((i - 1) * w + (j - 1)) * CI;
            for (std::size_t ki = 0; ki < 3; ++ki)
                for (std::size_t kj = 0; kj < 3; ++kj) {
                    const std::size_t tr = FLIP ? 2 - ki : ki;
                    const std::size_t tc = FLIP ? 2 - kj : kj;
                    const double* __restrict irow = base + (tr * w + tc) * CI;
                    const double* __restrict krow = ker + (ki * 3 + kj) * CI * CO;
                    for (std::size_t ci = 0; ci < CI; ++ci) {
                        const double a0 = irow[ci];
                        const double a1 = irow[ci + CI];
#pragma GCC unroll 1
                        for (std::size_t co = 0; co < CO; ++co) {
                            const double kv = krow[ci * CO + co];
                            acc0[co] += a0 * kv;
                            acc1[co] += a1 * kv;
                        }
                    }
                }
            std::memcpy(out + (i * w + j) * CO, acc0, sizeof(acc0));
            std::memcpy(out + (i * w + j + 1) * CO, acc1, sizeof(acc1));
        }
        for (; j < w; ++j) edge_pixel(i, j);
    }
}

// Kernel-gradient pattern shared by conv (FLIP = false) and tconv (FLIP =
// true) backward passes: gk[ki][kj][ci][co] += x(tap(i,ki), tap(j,kj), ci) *
// go(i, j, co). Each gk row is pulled into registers once per image row and
// swept along that row, so gk traffic stays off the inner loop. Per element
// the additions still run in pixel row-major order.
template <std::size_t CI, std::size_t CO, bool FLIP>
void kernel_grad3x3(const double* __restrict in, const double* __restrict go,
                    double* __restrict gk, std::size_t h, std::size_t w) {
    for (std::size_t i = 0; i < h; ++i) {
        const double* __restrict gorow = go + i * w * CO;
        for (std::size_t ki = 0; ki < 3; ++ki) {
            const std::size_t r = FLIP ? i + 1 - ki : i + ki - 1; // unsigned wrap = invalid
            if (r >= h) continue;
            const double* __restrict xrow = in + r * w * CI;
            for (std::size_t kj = 0; kj < 3; ++kj) {
                // source column j + dc must stay in [0, w)
                const std::ptrdiff_t dc =
                    FLIP ? 1 - std::ptrdiff_t(kj) : std::ptrdiff_t(kj) - 1;
                const std::size_t j_lo = dc < 0 ? std::size_t(-dc) : 0;
                const std::size_t j_hi = dc > 0 ? w - std::size_t(dc) : w;
                double* __restrict kbase = gk + (ki * 3 + kj) * CI * CO;
                if constexpr (CO == 1) {
                    // single output channel: accumulate across ci instead so
                    // the lanes stay independent
                    double acc[CI];
                    for (std::size_t ci = 0; ci < CI; ++ci) acc[ci] = kbase[ci];
                    const double* __restrict xp =
                        xrow + std::size_t(std::ptrdiff_t(j_lo) + dc) * CI;
                    for (std::size_t j = j_lo; j < j_hi; ++j, xp += CI) {
                        const double g = gorow[j];
#pragma GCC unroll 1
                        for (std::size_t ci = 0; ci < CI; ++ci) acc[ci] += xp[ci] * g;
                    }
                    std::memcpy(kbase, acc, sizeof(acc));
                    continue;
                }
                for (std::size_t ci = 0; ci < CI; ++ci) {
                    double* __restrict krow = kbase + ci * CO;
                    double acc[CO];
                    for (std::size_t co = 0; co < CO; ++co) acc[co] = krow[co];
                    const double* __restrict xp =
                        xrow + std::size_t(std::ptrdiff_t(j_lo) + dc) * CI + ci;
                    for (std::size_t j = j_lo; j < j_hi; ++j, xp += CI) {
                        const double a = *xp;
                        const double* __restrict grow = gorow + j * CO;
#pragma GCC unroll 1
                        for (std::size_t co = 0; co < CO; ++co) acc[co] += a * grow[co];
                    }
                    std::memcpy(krow, acc, sizeof(acc));
                }
            }
        }
    }
}

template <bool FLIP>
bool gather_dispatch(std::size_t ci, std::size_t co, const double* in, const double* ker,
                     const double* bias, double* out, std::size_t h, std::size_t w) {
    if (ci == 1 && co == 16) gather3x3<1, 16, FLIP>(in, ker, bias, out, h, w);
    else if (ci == 16 && co == 1) gather3x3<16, 1, FLIP>(in, ker, bias, out, h, w);
    else if (ci == 16 && co == 32) gather3x3<16, 32, FLIP>(in, ker, bias, out, h, w);
    else if (ci == 32 && co == 16) gather3x3<32, 16, FLIP>(in, ker, bias, out, h, w);
    else if (ci == 32 && co == 64) gather3x3<32, 64, FLIP>(in, ker, bias, out, h, w);
    else if (ci == 64 && co == 32) gather3x3<64, 32, FLIP>(in, ker, bias, out, h, w);
    else if (ci == 64 && co == 64) gather3x3<64, 64, FLIP>(in, ker, bias, out, h, w);
    else return false;
    return true;
}

template <bool FLIP>
bool kernel_grad_dispatch(std::size_t ci, std::size_t co, const double* in, const double* go,
                          double* gk, std::size_t h, std::size_t w) {
    if (ci == 1 && co == 16) kernel_grad3x3<1, 16, FLIP>(in, go, gk, h, w);
    else if (ci == 16 && co == 1) kernel_grad3x3<16, 1, FLIP>(in, go, gk, h, w);
    else if (ci == 16 && co == 32) kernel_grad3x3<16, 32, FLIP>(in, go, gk, h, w);
    else if (ci == 32 && co == 16) kernel_grad3x3<32, 16, FLIP>(in, go, gk, h, w);
    else if (ci == 32 && co == 64) kernel_grad3x3<32, 64, FLIP>(in, go, gk, h, w);
    else if (ci == 64 && co == 32) kernel_grad3x3<64, 32, FLIP>(in, go, gk, h, w);
    else if (ci == 64 && co == 64) kernel_grad3x3<64, 64, FLIP>(in, go, gk, h, w);
    else return false;
    return true;
}

} // namespace

Tensor conv2d_forward(const Tensor& input, const Tensor& kernels, const Tensor& bias) {
    check_conv_shapes(input, kernels, bias, "conv2d");
    const std::size_t h = input.dim(0), w = input.dim(1);
    const std::size_t c_in = input.dim(2), c_out = kernels.dim(3);

    Tensor out({h, w, c_out});
    const double* in = input.data.data();
    const double* ker = kernels.data.data();
    double* o = out.data.data();

    if (gather_dispatch<false>(c_in, c_out, in, ker, bias.data.data(), o, h, w)) return out;

    for (std::size_t i = 0; i < h; ++i) {
        for (std::size_t j = 0; j < w; ++j) {
            double* orow = o + (i * w + j) * c_out;
            for (std::size_t co = 0; co < c_out; ++co) orow[co] = bias.data[co];
            for (std::size_t ki = 0; ki < 3; ++ki) {
                const std::size_t ii = i + ki;
                if (ii < 1 || ii > h) continue; // zero padding
                for (std::size_t kj = 0; kj < 3; ++kj) {
                    const std::size_t jj = j + kj;
                    if (jj < 1 || jj > w) continue;
                    const double* irow = in + ((ii - 1) * w + (jj - 1)) * c_in;
                    const double* krow = ker + (ki * 3 + kj) * c_in * c_out;
                    for (std::size_t ci = 0; ci < c_in; ++ci) {
                        const double a = irow[ci];
                        const double* kk = krow + ci * c_out;
                        for (std::size_t co = 0; co < c_out; ++co) orow[co] += a * kk[co];
                    }
                }
            }
        }
    }
    return out;
}

Tensor conv2d_backward(const Tensor& input, const Tensor& kernels, const Tensor& grad_out,
                       Tensor& grad_kernels, Tensor& grad_bias, bool need_input_grad) {
    check_conv_shapes(input, kernels, grad_bias, "conv2d_backward");
    require(grad_out.ndim() == 3 && grad_out.dim(0) == input.dim(0) &&
                grad_out.dim(1) == input.dim(1) && grad_out.dim(2) == kernels.dim(3),
            "grad_out shape mismatch");
    require(grad_kernels.same_shape(kernels), "grad_kernels shape mismatch");

    const std::size_t h = input.dim(0), w = input.dim(1);
    const std::size_t c_in = input.dim(2), c_out = kernels.dim(3);

    const double* in = input.data.data();
    const double* go = grad_out.data.data();
    double* gk = grad_kernels.data.data();
    double* gb = grad_bias.data.data();

    for (std::size_t i = 0; i < h * w; ++i) {
        const double* grow = go + i * c_out;
        for (std::size_t co = 0; co < c_out; ++co) gb[co] += grow[co];
    }

    if (!kernel_grad_dispatch<false>(c_in, c_out, in, go, gk, h, w))
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < w; ++j) {
                const double* grow = go + (i * w + j) * c_out;
                for (std::size_t ki = 0; ki < 3; ++ki) {
                    const std::size_t ii = i + ki;
                    if (ii < 1 || ii > h) continue;
                    for (std::size_t kj = 0; kj < 3; ++kj) {
                        const std::size_t jj = j + kj;
                        if (jj < 1 || jj > w) continue;
                        const double* irow = in + ((ii - 1) * w + (jj - 1)) * c_in;
                        double* krow = gk + (ki * 3 + kj) * c_in * c_out;
                        for (std::size_t ci = 0; ci < c_in; ++ci) {
                            const double a = irow[ci];
                            double* kk = krow + ci * c_out;
                            for (std::size_t co = 0; co < c_out; ++co) kk[co] += a * grow[co];
                        }
                    }
                }
            }

    if (!need_input_grad) return Tensor{};

    // dL/dx[u][v][ci] = sum_{ki,kj,co} dL/dy[u-ki+1][v-kj+1][co] * K[ki][kj][ci][co]
    Tensor grad_input({h, w, c_in});
    const Tensor kt = swap_kernel_channels(kernels); // (3,3,co,ci)
    double* gi = grad_input.data.data();
    const double* ktp = kt.data.data();

    if (gather_dispatch<true>(c_out, c_in, go, ktp, nullptr, gi, h, w)) return grad_input;

    for (std::size_t u = 0; u < h; ++u)
        for (std::size_t v = 0; v < w; ++v) {
            double* girow = gi + (u * w + v) * c_in;
            for (std::size_t ki = 0; ki < 3; ++ki) {
                const std::size_t i = u + 1 - ki; // u - ki + 1, wraps below 0
                if (i >= h) continue;
                for (std::size_t kj = 0; kj < 3; ++kj) {
                    const std::size_t j = v + 1 - kj;
                    if (j >= w) continue;
                    const double* grow = go + (i * w + j) * c_out;
                    const double* ktrow = ktp + (ki * 3 + kj) * c_in * c_out;
                    for (std::size_t co = 0; co < c_out; ++co) {
                        const double b = grow[co];
                        const double* kk = ktrow + co * c_in;
                        for (std::size_t ci = 0; ci < c_in; ++ci) girow[ci] += b * kk[ci];
                    }
                }
            }
        }
    return grad_input;
}

Tensor tconv2d_forward(const Tensor& input, const Tensor& kernels, const Tensor& bias) {
    check_conv_shapes(input, kernels, bias, "tconv2d");
    const std::size_t h = input.dim(0), w = input.dim(1);
    const std::size_t c_in = input.dim(2), c_out = kernels.dim(3);

    Tensor out({h, w, c_out});
    const double* in = input.data.data();
    const double* ker = kernels.data.data();
    double* o = out.data.data();

    // y[i][j][co] = b[co] + sum_{ki,kj,ci} x[i-ki+1][j-kj+1][ci] * K[ki][kj][ci][co]
    if (gather_dispatch<true>(c_in, c_out, in, ker, bias.data.data(), o, h, w)) return out;

    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) {
            double* orow = o + (i * w + j) * c_out;
            for (std::size_t co = 0; co < c_out; ++co) orow[co] = bias.data[co];
            for (std::size_t ki = 0; ki < 3; ++ki) {
                const std::size_t ii = i + 1 - ki;
                if (ii >= h) continue;
                for (std::size_t kj = 0; kj < 3; ++kj) {
                    const std::size_t jj = j + 1 - kj;
                    if (jj >= w) continue;
                    const double* irow = in + (ii * w + jj) * c_in;
                    const double* krow = ker + (ki * 3 + kj) * c_in * c_out;
                    for (std::size_t ci = 0; ci < c_in; ++ci) {
                        const double a = irow[ci];
                        const double* kk = krow + ci * c_out;
                        for (std::size_t co = 0; co < c_out; ++co) orow[co] += a * kk[co];
                    }
                }
            }
        }
    return out;
}

Tensor tconv2d_backward(const Tensor& input, const Tensor& kernels, const Tensor& grad_out,
                        Tensor& grad_kernels, Tensor& grad_bias) {
    require(grad_out.ndim() == 3 && grad_out.dim(0) == input.dim(0) &&
                grad_out.dim(1) == input.dim(1) && grad_out.dim(2) == kernels.dim(3),
            "grad_out shape mismatch");
    require(grad_kernels.same_shape(kernels), "grad_kernels shape mismatch");

    const std::size_t h = input.dim(0), w = input.dim(1);
    const std::size_t c_in = input.dim(2), c_out = kernels.dim(3);

    const double* in = input.data.data();
    const double* go = grad_out.data.data();
    double* gk = grad_kernels.data.data();
    double* gb = grad_bias.data.data();

    for (std::size_t i = 0; i < h * w; ++i) {
        const double* grow = go + i * c_out;
        for (std::size_t co = 0; co < c_out; ++co) gb[co] += grow[co];
    }

    if (!kernel_grad_dispatch<true>(c_in, c_out, in, go, gk, h, w))
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < w; ++j) {
                const double* grow = go + (i * w + j) * c_out;
                for (std::size_t ki = 0; ki < 3; ++ki) {
                    const std::size_t ii = i + 1 - ki;
                    if (ii >= h) continue;
                    for (std::size_t kj = 0; kj < 3; ++kj) {
                        const std::size_t jj = j + 1 - kj;
                        if (jj >= w) continue;
                        const double* irow = in + (ii * w + jj) * c_in;
                        double* krow = gk + (ki * 3 + kj) * c_in * c_out;
                        for (std::size_t ci = 0; ci < c_in; ++ci) {
                            const double a = irow[ci];
                            double* kk = krow + ci * c_out;
                            for (std::size_t co = 0; co < c_out; ++co) kk[co] += a * grow[co];
                        }
                    }
                }
            }

    // dL/dx[u][v][ci] = sum_{ki,kj,co} dL/dy[u+ki-1][v+kj-1][co] * K[ki][kj][ci][co]
    Tensor grad_input({h, w, c_in});
    const Tensor kt = swap_kernel_channels(kernels);
    double* gi = grad_input.data.data();
    const double* ktp = kt.data.data();

    if (gather_dispatch<false>(c_out, c_in, go, ktp, nullptr, gi, h, w)) return grad_input;

    for (std::size_t u = 0; u < h; ++u)
        for (std::size_t v = 0; v < w; ++v) {
            double* girow = gi + (u * w + v) * c_in;
            for (std::size_t ki = 0; ki < 3; ++ki) {
                const std::size_t i = u + ki;
                if (i < 1 || i > h) continue;
                for (std::size_t kj = 0; kj < 3; ++kj) {
                    const std::size_t j = v + kj;
                    if (j < 1 || j > w) continue;
                    const double* grow = go + ((i - 1) * w + (j - 1)) * c_out;
                    const double* ktrow = ktp + (ki * 3 + kj) * c_in * c_out;
                    for (std::size_t co = 0; co < c_out; ++co) {
                        const double b = grow[co];
                        const double* kk = ktrow + co * c_in;
                        for (std::size_t ci = 0; ci < c_in; ++ci) girow[ci] += b * kk[ci];
                    }
                }
            }
        }
    return grad_input;
}

Tensor maxpool2d_forward(const Tensor& input, std::vector<std::uint32_t>& argmax) {
    require(input.ndim() == 3, "maxpool input must be (H,W,C)");
    const std::size_t h = input.dim(0), w = input.dim(1), c = input.dim(2);
    require(h % 2 == 0 && w % 2 == 0, "maxpool requires even spatial dims");

    Tensor out({h / 2, w / 2, c});
    argmax.assign(out.size(), 0);
    for (std::size_t i = 0; i < h / 2; ++i)
        for (std::size_t j = 0; j < w / 2; ++j)
            for (std::size_t ch = 0; ch < c; ++ch) {
                double best = input.at3(2 * i, 2 * j, ch);
                std::size_t best_idx = ((2 * i) * w + 2 * j) * c + ch;
                // row-major scan keeps ties on the first index
                const std::size_t candidates[3][2] = {{2 * i, 2 * j + 1}, {2 * i + 1, 2 * j},
                                                      {2 * i + 1, 2 * j + 1}};
                for (const auto& rc : candidates) {
                    const double v = input.at3(rc[0], rc[1], ch);
                    if (v > best) {
                        best = v;
                        best_idx = (rc[0] * w + rc[1]) * c + ch;
                    }
                }
                out.at3(i, j, ch) = best;
                argmax[(i * (w / 2) + j) * c + ch] = std::uint32_t(best_idx);
            }
    return out;
}

Tensor maxpool2d_backward(const std::vector<std::size_t>& input_shape,
                          const std::vector<std::uint32_t>& argmax, const Tensor& grad_out) {
    require(input_shape.size() == 3, "maxpool input shape must be (H,W,C)");
    require(argmax.size() == grad_out.size(), "argmax/grad size mismatch");
    Tensor grad_input(input_shape);
    for (std::size_t k = 0; k < argmax.size(); ++k) grad_input.data[argmax[k]] += grad_out.data[k];
    return grad_input;
}

Tensor upsample2d_forward(const Tensor& input) {
    require(input.ndim() == 3, "upsample input must be (H,W,C)");
    const std::size_t h = input.dim(0), w = input.dim(1), c = input.dim(2);
    Tensor out({2 * h, 2 * w, c});
    for (std::size_t i = 0; i < 2 * h; ++i)
        for (std::size_t j = 0; j < 2 * w; ++j) {
            const double* src = input.data.data() + ((i / 2) * w + (j / 2)) * c;
            double* dst = out.data.data() + (i * 2 * w + j) * c;
            for (std::size_t ch = 0; ch < c; ++ch) dst[ch] = src[ch];
        }
    return out;
}

Tensor upsample2d_backward(const Tensor& grad_out) {
    require(grad_out.ndim() == 3, "upsample grad must be (H,W,C)");
    const std::size_t h2 = grad_out.dim(0), w2 = grad_out.dim(1), c = grad_out.dim(2);
    require(h2 % 2 == 0 && w2 % 2 == 0, "upsample grad dims must be even");
    Tensor grad_input({h2 / 2, w2 / 2, c});
    for (std::size_t i = 0; i < h2; ++i)
        for (std::size_t j = 0; j < w2; ++j) {
            const double* src = grad_out.data.data() + (i * w2 + j) * c;
            double* dst = grad_input.data.data() + ((i / 2) * (w2 / 2) + (j / 2)) * c;
            for (std::size_t ch = 0; ch < c; ++ch) dst[ch] += src[ch];
        }
    return grad_input;
}

Tensor dense_forward(const Tensor& input, const Tensor& weights, const Tensor& bias) {
    require(input.ndim() == 1, "dense input must be a vector");
    require(weights.ndim() == 2, "dense weights must be (N,M)");
    require(weights.dim(0) == input.dim(0), "dense weight rows != input length");
    require(bias.ndim() == 1 && bias.dim(0) == weights.dim(1), "dense bias must be (M)");

    const std::size_t n = weights.dim(0), m = weights.dim(1);
    Tensor out({m});
    std::copy(bias.data.begin(), bias.data.end(), out.data.begin());
    const double* wp = weights.data.data();
    double* op = out.data.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double a = input.data[i];
        const double* wrow = wp + i * m;
        for (std::size_t j = 0; j < m; ++j) op[j] += a * wrow[j];
    }
    return out;
}

Tensor dense_backward(const Tensor& input, const Tensor& weights, const Tensor& grad_out,
                      Tensor& grad_weights, Tensor& grad_bias) {
    require(grad_out.ndim() == 1 && grad_out.dim(0) == weights.dim(1), "dense grad_out mismatch");
    require(grad_weights.same_shape(weights), "grad_weights shape mismatch");

    const std::size_t n = weights.dim(0), m = weights.dim(1);
    for (std::size_t j = 0; j < m; ++j) grad_bias.data[j] += grad_out.data[j];

    // One pass per weight row: the gw update and the grad_input dot share the
    // go loads. Eight partial sums let the dot vectorize without changing the
    // result across runs.
    Tensor grad_input({n});
    const double* __restrict go = grad_out.data.data();
    const double* __restrict wp = weights.data.data();
    double* __restrict gw = grad_weights.data.data();
    for (std::size_t i = 0; i < n; ++i) {
        const double a = input.data[i];
        const double* __restrict wrow = wp + i * m;
        double* __restrict gwrow = gw + i * m;
        double part[8] = {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        std::size_t j = 0;
        for (; j + 8 <= m; j += 8)
            for (std::size_t k = 0; k < 8; ++k) {
                part[k] += wrow[j + k] * go[j + k];
                gwrow[j + k] += a * go[j + k];
            }
        double tail = 0.0;
        for (; j < m; ++j) {
            tail += wrow[j] * go[j];
            gwrow[j] += a * go[j];
        }
        grad_input.data[i] = (((part[0] + part[1]) + (part[2] + part[3])) +
                              ((part[4] + part[5]) + (part[6] + part[7]))) +
                             tail;
    }
    return grad_input;
}

Tensor relu_forward(const Tensor& input) {
    Tensor out = input;
    for (double& v : out.data) v = v > 0.0 ? v : 0.0;
    return out;
}

Tensor relu_backward(const Tensor& input, const Tensor& grad_out) {
    require(input.same_shape(grad_out), "relu grad shape mismatch");
    Tensor grad_input = grad_out;
    for (std::size_t i = 0; i < input.size(); ++i)
        if (!(input.data[i] > 0.0)) grad_input.data[i] = 0.0;
    return grad_input;
}

Tensor sigmoid_forward(const Tensor& input) {
    Tensor out = input;
    for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
    return out;
}

Tensor sigmoid_backward(const Tensor& output, const Tensor& grad_out) {
    require(output.same_shape(grad_out), "sigmoid grad shape mismatch");
    Tensor grad_input = grad_out;
    for (std::size_t i = 0; i < output.size(); ++i) {
        const double s = output.data[i];
        grad_input.data[i] *= s * (1.0 - s);
    }
    return grad_input;
}

double bce_loss(const Tensor& prediction, const Tensor& target) {
    require(prediction.same_shape(target), "bce shape mismatch");
    require(prediction.size() > 0, "bce on empty tensors");
    double acc = 0.0;
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        const double p = std::clamp(prediction.data[i], kBceClamp, 1.0 - kBceClamp);
        const double t = target.data[i];
        acc -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
    }
    return acc / double(prediction.size());
}

Tensor bce_grad(const Tensor& prediction, const Tensor& target, std::size_t normalizer) {
    require(prediction.same_shape(target), "bce shape mismatch");
    if (normalizer == 0) normalizer = prediction.size();
    Tensor grad(prediction.shape);
    const double inv_n = 1.0 / double(normalizer);
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        const double raw = prediction.data[i];
        if (raw < kBceClamp || raw > 1.0 - kBceClamp) continue; // clamp region: flat
        const double t = target.data[i];
        grad.data[i] = (raw - t) / (raw * (1.0 - raw)) * inv_n;
    }
    return grad;
}

// ---------------------------------------------------------------------------

Layer make_conv2d(std::size_t c_in, std::size_t c_out) {
    Layer l;
    l.kind = LayerKind::Conv2d;
    l.weights = Tensor({3, 3, c_in, c_out});
    l.bias = Tensor({c_out});
    return l;
}

Layer make_tconv2d(std::size_t c_in, std::size_t c_out) {
    Layer l;
    l.kind = LayerKind::TConv2d;
    l.weights = Tensor({3, 3, c_in, c_out});
    l.bias = Tensor({c_out});
    return l;
}

Layer make_maxpool2d() { return Layer{LayerKind::MaxPool2d, {}, {}, {}}; }
Layer make_upsample2d() { return Layer{LayerKind::Upsample2d, {}, {}, {}}; }

Layer make_dense(std::size_t n_in, std::size_t n_out) {
    Layer l;
    l.kind = LayerKind::Dense;
    l.weights = Tensor({n_in, n_out});
    l.bias = Tensor({n_out});
    return l;
}

Layer make_flatten() { return Layer{LayerKind::Flatten, {}, {}, {}}; }

Layer make_reshape(std::vector<std::size_t> target_shape) {
    return Layer{LayerKind::Reshape, {}, {}, std::move(target_shape)};
}

Layer make_relu() { return Layer{LayerKind::Relu, {}, {}, {}}; }
Layer make_sigmoid() { return Layer{LayerKind::Sigmoid, {}, {}, {}}; }

Tensor Network::forward(const Tensor& input) const {
    ForwardTrace trace;
    return forward(input, trace);
}

Tensor Network::forward(const Tensor& input, ForwardTrace& trace) const {
    trace.activations.clear();
    trace.activations.reserve(layers.size() + 1);
    trace.pool_argmax.assign(layers.size(), {});
    trace.activations.push_back(input);

    for (std::size_t li = 0; li < layers.size(); ++li) {
        const Layer& layer = layers[li];
        const Tensor& x = trace.activations.back();
        Tensor y;
        switch (layer.kind) {
            case LayerKind::Conv2d: y = conv2d_forward(x, layer.weights, layer.bias); break;
            case LayerKind::TConv2d: y = tconv2d_forward(x, layer.weights, layer.bias); break;
            case LayerKind::MaxPool2d: y = maxpool2d_forward(x, trace.pool_argmax[li]); break;
            case LayerKind::Upsample2d: y = upsample2d_forward(x); break;
            case LayerKind::Dense: y = dense_forward(x, layer.weights, layer.bias); break;
            case LayerKind::Flatten: y = x.reshaped({x.size()}); break;
            case LayerKind::Reshape: y = x.reshaped(layer.target_shape); break;
            case LayerKind::Relu: y = relu_forward(x); break;
            case LayerKind::Sigmoid: y = sigmoid_forward(x); break;
        }
        trace.activations.push_back(std::move(y));
    }
    return trace.activations.back();
}

Tensor Network::backward(const ForwardTrace& trace, const Tensor& grad_output,
                         std::vector<LayerGrads>& grads, bool need_input_grad) const {
    require(trace.activations.size() == layers.size() + 1, "trace does not match network");
    require(grads.size() == layers.size(), "grads do not match network");

    Tensor g = grad_output;
    for (std::size_t li = layers.size(); li-- > 0;) {
        const Layer& layer = layers[li];
        const Tensor& x = trace.activations[li];
        const Tensor& y = trace.activations[li + 1];
        require(g.same_shape(y), "gradient shape diverged from forward trace");
        switch (layer.kind) {
            case LayerKind::Conv2d:
                g = conv2d_backward(x, layer.weights, g, grads[li].weights, grads[li].bias,
                                    need_input_grad || li != 0);
                break;
            case LayerKind::TConv2d:
                g = tconv2d_backward(x, layer.weights, g, grads[li].weights, grads[li].bias);
                break;
            case LayerKind::MaxPool2d:
                g = maxpool2d_backward(x.shape, trace.pool_argmax[li], g);
                break;
            case LayerKind::Upsample2d: g = upsample2d_backward(g); break;
            case LayerKind::Dense:
                g = dense_backward(x, layer.weights, g, grads[li].weights, grads[li].bias);
                break;
            case LayerKind::Flatten:
            case LayerKind::Reshape: g = g.reshaped(x.shape); break;
            case LayerKind::Relu: g = relu_backward(x, g); break;
            case LayerKind::Sigmoid: g = sigmoid_backward(y, g); break;
        }
    }
    return g;
}

std::vector<LayerGrads> Network::zero_grads() const {
    std::vector<LayerGrads> grads(layers.size());
    for (std::size_t li = 0; li < layers.size(); ++li)
        if (layers[li].has_params()) {
            grads[li].weights = Tensor(layers[li].weights.shape);
            grads[li].bias = Tensor(layers[li].bias.shape);
        }
    return grads;
}

std::vector<Tensor*> Network::parameters() {
    std::vector<Tensor*> out;
    for (auto& layer : layers)
        if (layer.has_params()) {
            out.push_back(&layer.weights);
            out.push_back(&layer.bias);
        }
    return out;
}

std::vector<const Tensor*> Network::parameters() const {
    std::vector<const Tensor*> out;
    for (const auto& layer : layers)
        if (layer.has_params()) {
            out.push_back(&layer.weights);
            out.push_back(&layer.bias);
        }
    return out;
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const auto* t : parameters()) n += t->size();
    return n;
}

// ---------------------------------------------------------------------------

AdamState make_adam_state(const std::vector<Tensor*>& params, double lr) {
    AdamState state;
    state.lr = lr;
    state.first_moment.reserve(params.size());
    state.second_moment.reserve(params.size());
    for (const Tensor* p : params) {
        state.first_moment.emplace_back(p->shape);
        state.second_moment.emplace_back(p->shape);
    }
    return state;
}

void adam_step(std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state) {
    require(params.size() == grads.size() && params.size() == state.first_moment.size(),
            "adam: parameter/gradient/state count mismatch");
    state.step += 1;
    const double b1 = state.beta1, b2 = state.beta2;
    const double bias1 = 1.0 - std::pow(b1, double(state.step));
    const double bias2 = 1.0 - std::pow(b2, double(state.step));

    for (std::size_t t = 0; t < params.size(); ++t) {
        Tensor& p = *params[t];
        const Tensor& g = *grads[t];
        require(p.same_shape(g) && p.same_shape(state.first_moment[t]), "adam: shape mismatch");
        double* m = state.first_moment[t].data.data();
        double* v = state.second_moment[t].data.data();
        double* w = p.data.data();
        const double* gp = g.data.data();
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * gp[i];
            v[i] = b2 * v[i] + (1.0 - b2) * gp[i] * gp[i];
            const double m_hat = m[i] / bias1;
            const double v_hat = v[i] / bias2;
            w[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    }
}

void he_uniform_fill(Tensor& t, std::size_t fan_in, std::mt19937_64& eng) {
    const double limit = std::sqrt(6.0 / double(fan_in));
    for (double& v : t.data) v = (2.0 * double(eng() >> 11) * 0x1.0p-53 - 1.0) * limit;
}

void glorot_uniform_fill(Tensor& t, std::size_t fan_in, std::size_t fan_out, std::mt19937_64& eng) {
    const double limit = std::sqrt(6.0 / double(fan_in + fan_out));
    for (double& v : t.data) v = (2.0 * double(eng() >> 11) * 0x1.0p-53 - 1.0) * limit;
}

} // namespace radar_ood
