#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dsp.hpp"
#include "layers.hpp"
#include "tensor.hpp"

namespace radar_ood {

inline constexpr std::size_t kPatchDim = 32;
inline constexpr std::size_t kLatentDim = 128;
inline constexpr std::size_t kPatchCount = 4;
inline constexpr std::size_t kEncoderParamCount = 154496;

enum class PatchPosition : std::uint8_t { TopLeft = 0, TopRight = 1, BottomLeft = 2, BottomRight = 3 };

struct Patch {
    Tensor pixels; // (32,32,1)
    PatchPosition position = PatchPosition::TopLeft;
};

// (64,64,1) double tensor from the float image
Tensor rdi_to_tensor(const RangeDopplerImage& rdi);

// Quadrant tiling: TL rows 0-31 x cols 0-31, TR rows 0-31 x cols 32-63, ...
std::array<Patch, kPatchCount> split_patches(const Tensor& image);
std::array<Patch, kPatchCount> split_patches(const RangeDopplerImage& rdi);

// Inverse tiling; patches may arrive in any order but each position exactly once.
Tensor reassemble(const std::array<Patch, kPatchCount>& patches);

// Shared-weight convolutional autoencoder. The patch model runs on 32x32
// inputs (flattened bottleneck 4*4*64); the baseline variant applies the same
// layer stack to the full 64x64 image (bottleneck 8*8*64).
struct Autoencoder {
    Network encoder;
    Network decoder;
    bool baseline = false;
    bool has_decoder = true;
    std::uint64_t training_seed = 0;
    std::uint32_t epochs_trained = 0;

    static Autoencoder make_patch_model(std::uint64_t init_seed);
    static Autoencoder make_baseline_model(std::uint64_t init_seed);

    // (32,32,1) [patch] or (64,64,1) [baseline] -> (128)
    Tensor encode(const Tensor& input) const;
    // (128) -> (32,32,1) or (64,64,1); all outputs in (0,1)
    Tensor decode(const Tensor& latent) const;

    std::size_t input_dim() const { return baseline ? 2 * kPatchDim : kPatchDim; }
    std::size_t encoder_parameter_count() const { return encoder.parameter_count(); }
};

struct TrainConfig {
    std::size_t epochs = 30;
    std::size_t batch_frames = 8;
    double lr = 1e-3;
    std::uint64_t seed = 0;
    bool shuffle = true;
};

struct TrainResult {
    Autoencoder model;
    std::vector<double> epoch_mean_loss;
};

// Trains on ID-only RDIs; throws ProtocolError if any OOD label is present.
// Loss is BCE between the full input RDI and the reassembled reconstruction
// (identical to the mean of the four patch BCEs since the patches tile it).
TrainResult train(const std::vector<RangeDopplerImage>& train_rdis, const TrainConfig& cfg);
// Same stack on whole 64x64 images.
TrainResult train_baseline(const std::vector<RangeDopplerImage>& train_rdis, const TrainConfig& cfg);

// Serialization view: named tensors in fixed manifest order.
struct ModelWeights {
    std::map<std::string, Tensor> tensors;
    std::uint64_t training_seed = 0;
};

ModelWeights to_weights(const Autoencoder& model, bool encoder_only = false);
// Validates the manifest (patch or baseline shapes); decoder tensors are
// optional so encoder-only files load for energy scoring.
Autoencoder from_weights(const ModelWeights& weights);

} // namespace radar_ood
