#include "autoencoder.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "errors.hpp"
#include "rng.hpp"

namespace radar_ood {

namespace {

constexpr std::size_t kPatchBottleneck = 4 * 4 * 64;    // after three pools from 32
constexpr std::size_t kBaselineBottleneck = 8 * 8 * 64; // after three pools from 64

Network build_encoder(std::size_t bottleneck) {
    Network net;
    net.layers = {make_conv2d(1, 16),  make_relu(), make_maxpool2d(),
                  make_conv2d(16, 32), make_relu(), make_maxpool2d(),
                  make_conv2d(32, 64), make_relu(), make_maxpool2d(),
                  make_flatten(),      make_dense(bottleneck, kLatentDim)};
    return net;
}

Network build_decoder(std::size_t bottleneck) {
    const std::size_t side = bottleneck == kPatchBottleneck ? 4 : 8;
    Network net;
    net.layers = {make_dense(kLatentDim, bottleneck),
                  make_reshape({side, side, 64}),
                  make_tconv2d(64, 64), make_relu(), make_upsample2d(),
                  make_tconv2d(64, 32), make_relu(), make_upsample2d(),
                  make_tconv2d(32, 16), make_relu(), make_upsample2d(),
                  make_tconv2d(16, 1),  make_sigmoid()};
    return net;
}

Autoencoder build_model(bool baseline, std::uint64_t init_seed) {
    const std::size_t bottleneck = baseline ? kBaselineBottleneck : kPatchBottleneck;
    Autoencoder model;
    model.baseline = baseline;
    model.encoder = build_encoder(bottleneck);
    model.decoder = build_decoder(bottleneck);

    // One stream consumed in manifest order; biases stay zero.
    std::mt19937_64 eng(init_seed);
    auto& enc = model.encoder.layers;
    he_uniform_fill(enc[0].weights, 9 * 1, eng);
    he_uniform_fill(enc[3].weights, 9 * 16, eng);
    he_uniform_fill(enc[6].weights, 9 * 32, eng);
    glorot_uniform_fill(enc[10].weights, bottleneck, kLatentDim, eng);

    auto& dec = model.decoder.layers;
    glorot_uniform_fill(dec[0].weights, kLatentDim, bottleneck, eng);
    he_uniform_fill(dec[2].weights, 9 * 64, eng);
    he_uniform_fill(dec[5].weights, 9 * 64, eng);
    he_uniform_fill(dec[8].weights, 9 * 32, eng);
    glorot_uniform_fill(dec[11].weights, 9 * 16, 9 * 1, eng); // sigmoid head
    return model;
}

// Manifest: name -> (weights layer index, is encoder). Order matters for
// serialization and init.
struct ManifestEntry {
    const char* name;
    bool encoder;
    std::size_t layer;
};

constexpr ManifestEntry kManifest[] = {
    {"enc.conv1", true, 0},  {"enc.conv2", true, 3},  {"enc.conv3", true, 6},
    {"enc.dense", true, 10}, {"dec.dense", false, 0}, {"dec.tconv1", false, 2},
    {"dec.tconv2", false, 5}, {"dec.tconv3", false, 8}, {"dec.tconv4", false, 11},
};

void scale_grads(std::vector<LayerGrads>& grads, double scale) {
    for (auto& lg : grads) {
        for (double& v : lg.weights.data) v *= scale;
        for (double& v : lg.bias.data) v *= scale;
    }
}

void collect_grad_ptrs(const Network& net, const std::vector<LayerGrads>& grads,
                       std::vector<const Tensor*>& out) {
    for (std::size_t li = 0; li < net.layers.size(); ++li)
        if (net.layers[li].has_params()) {
            out.push_back(&grads[li].weights);
            out.push_back(&grads[li].bias);
        }
}

std::vector<std::size_t> frame_order(std::size_t n, bool shuffle, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t(0));
    if (!shuffle) return idx;
    std::mt19937_64 eng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = eng() % (i + 1);
        std::swap(idx[i], idx[j]);
    }
    return idx;
}

TrainResult train_impl(const std::vector<RangeDopplerImage>& rdis, const TrainConfig& cfg,
                       bool baseline) {
    if (rdis.empty()) throw DegenerateDataError("train: training set is empty");
    if (cfg.epochs < 1) throw DegenerateDataError("train: epochs must be >= 1");
    if (cfg.batch_frames < 1) throw DegenerateDataError("train: batch_frames must be >= 1");
    for (const auto& rdi : rdis)
        if (!is_id_label(rdi.label))
            throw ProtocolError("train: OOD-labeled frame " + std::to_string(rdi.frame_id) +
                                " in training set");

    Autoencoder model = build_model(baseline, derive_seed(cfg.seed, 1));
    model.training_seed = cfg.seed;

    std::vector<Tensor*> params = model.encoder.parameters();
    {
        auto dec_params = model.decoder.parameters();
        params.insert(params.end(), dec_params.begin(), dec_params.end());
    }
    AdamState adam = make_adam_state(params, cfg.lr);

    const std::size_t n = rdis.size();
    std::vector<double> history;
    history.reserve(cfg.epochs);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto order = frame_order(n, cfg.shuffle, derive_seed(cfg.seed, 2, epoch));
        double loss_sum = 0.0;

        for (std::size_t start = 0; start < n; start += cfg.batch_frames) {
            const std::size_t end = std::min(n, start + cfg.batch_frames);
            auto enc_grads = model.encoder.zero_grads();
            auto dec_grads = model.decoder.zero_grads();

            for (std::size_t bi = start; bi < end; ++bi) {
                const Tensor image = rdi_to_tensor(rdis[order[bi]]);
                if (baseline) {
                    ForwardTrace te, td;
                    const Tensor latent = model.encoder.forward(image, te);
                    const Tensor pred = model.decoder.forward(latent, td);
                    loss_sum += bce_loss(pred, image);
                    const Tensor g_lat =
                        model.decoder.backward(td, bce_grad(pred, image), dec_grads);
                    model.encoder.backward(te, g_lat, enc_grads, false);
                } else {
                    // loss over the reassembled image == mean of the four
                    // patch losses; gradients are normalized by the full
                    // 64x64 pixel count accordingly
                    const auto patches = split_patches(image);
                    for (const auto& patch : patches) {
                        ForwardTrace te, td;
                        const Tensor latent = model.encoder.forward(patch.pixels, te);
                        const Tensor pred = model.decoder.forward(latent, td);
                        loss_sum += bce_loss(pred, patch.pixels) / double(kPatchCount);
                        const Tensor g_lat = model.decoder.backward(
                            td, bce_grad(pred, patch.pixels, kRdiPixels), dec_grads);
                        model.encoder.backward(te, g_lat, enc_grads, false);
                    }
                }
            }

            const double scale = 1.0 / double(end - start);
            scale_grads(enc_grads, scale);
            scale_grads(dec_grads, scale);
            std::vector<const Tensor*> grad_ptrs;
            grad_ptrs.reserve(params.size());
            collect_grad_ptrs(model.encoder, enc_grads, grad_ptrs);
            collect_grad_ptrs(model.decoder, dec_grads, grad_ptrs);
            adam_step(params, grad_ptrs, adam);
        }
        history.push_back(loss_sum / double(n));
    }

    model.epochs_trained = std::uint32_t(cfg.epochs);
    return {std::move(model), std::move(history)};
}

} // namespace

Tensor rdi_to_tensor(const RangeDopplerImage& rdi) {
    Tensor t({kRdiDim, kRdiDim, 1});
    for (std::size_t i = 0; i < kRdiPixels; ++i) t.data[i] = double(rdi.pixels[i]);
    return t;
}

std::array<Patch, kPatchCount> split_patches(const Tensor& image) {
    if (image.shape != std::vector<std::size_t>{kRdiDim, kRdiDim, 1})
        throw std::invalid_argument("split_patches expects a (64,64,1) tensor");

    std::array<Patch, kPatchCount> out;
    const PatchPosition positions[4] = {PatchPosition::TopLeft, PatchPosition::TopRight,
                                        PatchPosition::BottomLeft, PatchPosition::BottomRight};
    for (std::size_t p = 0; p < kPatchCount; ++p) {
        const std::size_t row0 = (p / 2) * kPatchDim;
        const std::size_t col0 = (p % 2) * kPatchDim;
        Patch patch;
        patch.position = positions[p];
        patch.pixels = Tensor({kPatchDim, kPatchDim, 1});
        for (std::size_t i = 0; i < kPatchDim; ++i)
            for (std::size_t j = 0; j < kPatchDim; ++j)
                patch.pixels.at3(i, j, 0) = image.at3(row0 + i, col0 + j, 0);
        out[p] = std::move(patch);
    }
    return out;
}

std::array<Patch, kPatchCount> split_patches(const RangeDopplerImage& rdi) {
    return split_patches(rdi_to_tensor(rdi));
}

Tensor reassemble(const std::array<Patch, kPatchCount>& patches) {
    bool seen[kPatchCount] = {false, false, false, false};
    Tensor image({kRdiDim, kRdiDim, 1});
    for (const auto& patch : patches) {
        const auto p = std::size_t(patch.position);
        if (p >= kPatchCount || seen[p])
            throw std::invalid_argument("reassemble: duplicate or invalid patch position");
        seen[p] = true;
        if (patch.pixels.shape != std::vector<std::size_t>{kPatchDim, kPatchDim, 1})
            throw std::invalid_argument("reassemble: patch must be (32,32,1)");
        const std::size_t row0 = (p / 2) * kPatchDim;
        const std::size_t col0 = (p % 2) * kPatchDim;
        for (std::size_t i = 0; i < kPatchDim; ++i)
            for (std::size_t j = 0; j < kPatchDim; ++j)
                image.at3(row0 + i, col0 + j, 0) = patch.pixels.at3(i, j, 0);
    }
    return image;
}

Autoencoder Autoencoder::make_patch_model(std::uint64_t init_seed) {
    return build_model(false, init_seed);
}

Autoencoder Autoencoder::make_baseline_model(std::uint64_t init_seed) {
    return build_model(true, init_seed);
}

Tensor Autoencoder::encode(const Tensor& input) const {
    const std::size_t d = input_dim();
    if (input.shape != std::vector<std::size_t>{d, d, 1})
        throw std::invalid_argument("encode: input must be " + shape_string({d, d, 1}));
    return encoder.forward(input);
}

Tensor Autoencoder::decode(const Tensor& latent) const {
    if (!has_decoder) throw ProtocolError("decode: weights contain no decoder tensors");
    if (latent.shape != std::vector<std::size_t>{kLatentDim})
        throw std::invalid_argument("decode: latent must be (128)");
    return decoder.forward(latent);
}

TrainResult train(const std::vector<RangeDopplerImage>& train_rdis, const TrainConfig& cfg) {
    return train_impl(train_rdis, cfg, false);
}

TrainResult train_baseline(const std::vector<RangeDopplerImage>& train_rdis,
                           const TrainConfig& cfg) {
    return train_impl(train_rdis, cfg, true);
}

ModelWeights to_weights(const Autoencoder& model, bool encoder_only) {
    ModelWeights out;
    out.training_seed = model.training_seed;
    for (const auto& entry : kManifest) {
        if (!entry.encoder && (encoder_only || !model.has_decoder)) continue;
        const Network& net = entry.encoder ? model.encoder : model.decoder;
        out.tensors[entry.name] = net.layers[entry.layer].weights;
        out.tensors[std::string(entry.name) + ".bias"] = net.layers[entry.layer].bias;
    }
    return out;
}

Autoencoder from_weights(const ModelWeights& weights) {
    const auto enc_dense = weights.tensors.find("enc.dense");
    if (enc_dense == weights.tensors.end())
        throw FormatError("weights: missing tensor enc.dense");
    if (enc_dense->second.ndim() != 2)
        throw FormatError("weights: enc.dense must be rank 2");

    bool baseline;
    if (enc_dense->second.dim(0) == kPatchBottleneck)
        baseline = false;
    else if (enc_dense->second.dim(0) == kBaselineBottleneck)
        baseline = true;
    else
        throw FormatError("weights: enc.dense rows match neither the patch nor baseline model");

    Autoencoder model = build_model(baseline, 0);
    model.training_seed = weights.training_seed;

    std::size_t dec_found = 0, dec_total = 0;
    std::size_t consumed = 0;
    for (const auto& entry : kManifest) {
        Network& net = entry.encoder ? model.encoder : model.decoder;
        for (int which = 0; which < 2; ++which) {
            const std::string name =
                which == 0 ? entry.name : std::string(entry.name) + ".bias";
            Tensor& dst = which == 0 ? net.layers[entry.layer].weights
                                     : net.layers[entry.layer].bias;
            if (!entry.encoder) ++dec_total;
            const auto it = weights.tensors.find(name);
            if (it == weights.tensors.end()) {
                if (entry.encoder) throw FormatError("weights: missing tensor " + name);
                continue;
            }
            if (it->second.shape != dst.shape)
                throw FormatError("weights: tensor " + name + " has shape " +
                                  shape_string(it->second.shape) + ", expected " +
                                  shape_string(dst.shape));
            dst = it->second;
            ++consumed;
            if (!entry.encoder) ++dec_found;
        }
    }
    if (dec_found != 0 && dec_found != dec_total)
        throw FormatError("weights: decoder tensor set is incomplete");
    if (consumed != weights.tensors.size())
        throw FormatError("weights: file contains tensors outside the manifest");

    model.has_decoder = dec_found == dec_total;
    if (!model.has_decoder) model.decoder = Network{};
    return model;
}

} // namespace radar_ood
