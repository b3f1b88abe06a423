#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tensor.hpp"

namespace radar_ood {

// Stateless layer primitives. All forward functions are pure; the backward
// functions ACCUMULATE parameter gradients (+=) so batches sum naturally.
// Conventions fixed project-wide: 3x3 kernels, zero same-padding, stride 1,
// 2x2/stride-2 max pooling, nearest-neighbor 2x upsampling, ReLU subgradient
// 0 at 0, max-pool ties to the first row-major index.

// input (H,W,C_in), kernels (3,3,C_in,C_out), bias (C_out) -> (H,W,C_out)
Tensor conv2d_forward(const Tensor& input, const Tensor& kernels, const Tensor& bias);
// returns grad wrt input; accumulates into grad_kernels / grad_bias. Pass
// need_input_grad = false for a network's first layer to skip the unused
// input gradient (an empty tensor comes back instead).
Tensor conv2d_backward(const Tensor& input, const Tensor& kernels, const Tensor& grad_out,
                       Tensor& grad_kernels, Tensor& grad_bias, bool need_input_grad = true);

// Transposed convolution (adjoint of conv2d in its spatial pattern), same
// shapes as conv2d: input (H,W,C_in), kernels (3,3,C_in,C_out) -> (H,W,C_out).
Tensor tconv2d_forward(const Tensor& input, const Tensor& kernels, const Tensor& bias);
Tensor tconv2d_backward(const Tensor& input, const Tensor& kernels, const Tensor& grad_out,
                        Tensor& grad_kernels, Tensor& grad_bias);

// input (H,W,C), H and W even -> ((H/2,W/2,C), flat argmax index per output)
Tensor maxpool2d_forward(const Tensor& input, std::vector<std::uint32_t>& argmax);
Tensor maxpool2d_backward(const std::vector<std::size_t>& input_shape,
                          const std::vector<std::uint32_t>& argmax, const Tensor& grad_out);

// (H,W,C) -> (2H,2W,C) nearest neighbor
Tensor upsample2d_forward(const Tensor& input);
Tensor upsample2d_backward(const Tensor& grad_out);

// input (N), weights (N,M), bias (M) -> (M)
Tensor dense_forward(const Tensor& input, const Tensor& weights, const Tensor& bias);
Tensor dense_backward(const Tensor& input, const Tensor& weights, const Tensor& grad_out,
                      Tensor& grad_weights, Tensor& grad_bias);

Tensor relu_forward(const Tensor& input);
Tensor relu_backward(const Tensor& input, const Tensor& grad_out);

Tensor sigmoid_forward(const Tensor& input);
// takes the cached sigmoid OUTPUT, not the pre-activation
Tensor sigmoid_backward(const Tensor& output, const Tensor& grad_out);

// Mean over elements of -[t log p + (1-t) log(1-p)], p clamped to
// [1e-7, 1-1e-7] before the logs.
double bce_loss(const Tensor& prediction, const Tensor& target);
// dLoss/dprediction with the mean taken over `normalizer` elements
// (defaults to prediction.size(); patch training divides by the full-image
// pixel count instead). Gradient is 0 where the clamp was active.
Tensor bce_grad(const Tensor& prediction, const Tensor& target, std::size_t normalizer = 0);

inline constexpr double kBceClamp = 1e-7;

// ---------------------------------------------------------------------------

enum class LayerKind : std::uint8_t {
    Conv2d,
    TConv2d,
    MaxPool2d,
    Upsample2d,
    Dense,
    Flatten,
    Reshape,
    Relu,
    Sigmoid,
};

struct Layer {
    LayerKind kind{};
    Tensor weights; // conv/tconv kernels or dense matrix; empty otherwise
    Tensor bias;
    std::vector<std::size_t> target_shape; // Reshape only

    bool has_params() const { return kind == LayerKind::Conv2d || kind == LayerKind::TConv2d ||
                                     kind == LayerKind::Dense; }
};

Layer make_conv2d(std::size_t c_in, std::size_t c_out);
Layer make_tconv2d(std::size_t c_in, std::size_t c_out);
Layer make_maxpool2d();
Layer make_upsample2d();
Layer make_dense(std::size_t n_in, std::size_t n_out);
Layer make_flatten();
Layer make_reshape(std::vector<std::size_t> target_shape);
Layer make_relu();
Layer make_sigmoid();

struct ForwardTrace {
    // activations[0] is the input; activations[i+1] the output of layer i
    std::vector<Tensor> activations;
    std::vector<std::vector<std::uint32_t>> pool_argmax; // per layer; empty unless MaxPool2d
};

struct LayerGrads {
    Tensor weights;
    Tensor bias;
};

struct Network {
    std::vector<Layer> layers;

    Tensor forward(const Tensor& input) const;
    Tensor forward(const Tensor& input, ForwardTrace& trace) const;

    // grad_output = dLoss/d(final activation). Accumulates parameter
    // gradients into grads (shaped by zero_grads()); returns dLoss/d(input),
    // or an empty tensor when need_input_grad is false (skips the first
    // layer's input-gradient work when the caller has no use for it).
    Tensor backward(const ForwardTrace& trace, const Tensor& grad_output,
                    std::vector<LayerGrads>& grads, bool need_input_grad = true) const;

    std::vector<LayerGrads> zero_grads() const;
    std::vector<Tensor*> parameters();
    std::vector<const Tensor*> parameters() const;
    std::size_t parameter_count() const;
};

// ---------------------------------------------------------------------------

struct AdamState {
    std::size_t step = 0;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::vector<Tensor> first_moment;
    std::vector<Tensor> second_moment;
};

AdamState make_adam_state(const std::vector<Tensor*>& params, double lr);

// Standard bias-corrected Adam update, in place on params.
void adam_step(std::vector<Tensor*>& params, const std::vector<const Tensor*>& grads,
               AdamState& state);

// Seeded initializers (uniform in +-limit).
void he_uniform_fill(Tensor& t, std::size_t fan_in, std::mt19937_64& eng);
void glorot_uniform_fill(Tensor& t, std::size_t fan_in, std::size_t fan_out, std::mt19937_64& eng);

} // namespace radar_ood
