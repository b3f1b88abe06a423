#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "radar_config.hpp"
#include "scene.hpp"

namespace radar_ood {

// Raw real-valued ADC cube for a sequence of frames, laid out
// (frame, rx, chirp, sample) row-major. Samples are stored as float32,
// identical to the on-disk representation.
struct AdcFrameSet {
    RadarConfig config;
    std::size_t n_frames = 0;
    std::vector<float> samples;
    std::vector<SceneLabel> labels;          // per frame
    std::vector<std::uint64_t> scene_seeds;  // per frame
    std::uint64_t seed = 0;                  // dataset-level seed

    std::size_t frame_stride() const { return config.n_rx * config.n_c * config.n_s; }

    std::span<const float> frame(std::size_t idx) const {
        return {samples.data() + idx * frame_stride(), frame_stride()};
    }
    std::span<float> frame(std::size_t idx) {
        return {samples.data() + idx * frame_stride(), frame_stride()};
    }
};

// Noiseless IF signal of one scatterer over one chirp: n_s samples at f_s.
// The in-chirp beat tone sits at 2*B*r/(c*T_active); the starting phase
// advances chirp to chirp by 4*pi*f_min*v*t_c/c (plus any micro-Doppler
// displacement integrated in closed form).
std::vector<double> beat_signal(const Scatterer& scatterer, const RadarConfig& cfg,
                                std::size_t frame_idx, std::size_t chirp_idx);

// Sum of scatterer beat signals plus white Gaussian noise, identical across
// the Rx channels up to independent noise draws. Pure function of
// (scene, cfg, n_frames): per-frame noise streams derive from
// (scene.seed, frame index, rx), so any frame order or thread count
// reproduces the serial output bit for bit.
AdcFrameSet simulate_scene(const Scene& scene, const RadarConfig& cfg, std::size_t n_frames,
                           unsigned n_threads = 1);

struct RecipeEntry {
    Scene scene;
    std::size_t n_frames = 0;
};

// Concatenates the simulated scenes into one labeled frame set.
AdcFrameSet build_dataset(const std::vector<RecipeEntry>& recipe, const RadarConfig& cfg,
                          std::uint64_t dataset_seed, unsigned n_threads = 1);

} // namespace radar_ood
