#include "radar_sim.hpp"

#include <cmath>
#include <thread>

#include "errors.hpp"
#include "rng.hpp"

namespace radar_ood {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// Integrated micro-Doppler velocity: position offset at absolute time t.
double micro_doppler_displacement(const MicroDoppler& md, double t) {
    if (md.frequency_hz == 0.0)
        return 0.0;
    return -md.amplitude_ms / (kTwoPi * md.frequency_hz) *
           std::cos(kTwoPi * md.frequency_hz * t + md.phase_rad);
}

void add_beat_signal(std::vector<double>& acc, const Scatterer& sc, const RadarConfig& cfg,
                     std::size_t frame_idx, std::size_t chirp_idx) {
    const double r_frame = sc.range_at(frame_idx);
    const double v_bulk = sc.velocity_at(frame_idx);
    const double max_range = cfg.max_unambiguous_range();
    if (!(r_frame > 0.1 && r_frame < max_range))
        throw DegenerateDataError("rejected scene: scatterer range out of bounds at frame " +
                                  std::to_string(frame_idx));

    const double t_frame = double(frame_idx) * cfg.t_f;
    const double t_slow = double(chirp_idx) * cfg.t_c;
    double displacement = v_bulk * t_slow;
    if (sc.micro_doppler) {
        displacement += micro_doppler_displacement(*sc.micro_doppler, t_frame + t_slow) -
                        micro_doppler_displacement(*sc.micro_doppler, t_frame);
    }
    const double r = r_frame + displacement;
    const double f_beat = cfg.beat_frequency(r);
    const double slow_phase = kTwoPi * 2.0 * cfg.f_min * r / RadarConfig::kSpeedOfLight;
    const double dphi = kTwoPi * f_beat / cfg.f_s;

    for (std::size_t n = 0; n < cfg.n_s; ++n)
        acc[n] += sc.amplitude * std::cos(dphi * double(n) + slow_phase);
}

void simulate_frame_into(const Scene& scene, const RadarConfig& cfg, std::size_t frame_idx,
                         std::span<float> out) {
    const std::size_t chirp_len = cfg.n_s;
    std::vector<double> chirp(chirp_len);
    std::vector<double> noiseless(cfg.n_c * chirp_len);
    for (std::size_t m = 0; m < cfg.n_c; ++m) {
        std::fill(chirp.begin(), chirp.end(), 0.0);
        for (const Scatterer& sc : scene.scatterers)
            add_beat_signal(chirp, sc, cfg, frame_idx, m);
        std::copy(chirp.begin(), chirp.end(), noiseless.begin() + m * chirp_len);
    }
    for (std::size_t rx = 0; rx < cfg.n_rx; ++rx) {
        float* dst = out.data() + rx * cfg.n_c * chirp_len;
        if (scene.noise_std > 0.0) {
            GaussianRng noise(derive_seed(scene.seed, frame_idx, rx));
            for (std::size_t i = 0; i < cfg.n_c * chirp_len; ++i)
                dst[i] = float(noiseless[i] + scene.noise_std * noise.next());
        } else {
            for (std::size_t i = 0; i < cfg.n_c * chirp_len; ++i)
                dst[i] = float(noiseless[i]);
        }
    }
}

void run_frames(const Scene& scene, const RadarConfig& cfg, AdcFrameSet& set, std::size_t frame_begin,
                std::size_t scene_frame_offset, std::size_t n_frames, unsigned n_threads) {
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k)
            simulate_frame_into(scene, cfg, scene_frame_offset + k, set.frame(frame_begin + k));
    };
    if (n_threads <= 1 || n_frames < 2) {
        work(0, n_frames);
        return;
    }
    const std::size_t n_workers = std::min<std::size_t>(n_threads, n_frames);
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    const std::size_t chunk = (n_frames + n_workers - 1) / n_workers;
    for (std::size_t w = 0; w < n_workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n_frames, lo + chunk);
        if (lo < hi)
            workers.emplace_back(work, lo, hi);
    }
    for (auto& t : workers)
        t.join();
}

} // namespace

std::vector<double> beat_signal(const Scatterer& scatterer, const RadarConfig& cfg,
                                std::size_t frame_idx, std::size_t chirp_idx) {
    std::vector<double> out(cfg.n_s, 0.0);
    add_beat_signal(out, scatterer, cfg, frame_idx, chirp_idx);
    return out;
}

AdcFrameSet simulate_scene(const Scene& scene, const RadarConfig& cfg, std::size_t n_frames,
                           unsigned n_threads) {
    cfg.validate();
    if (n_frames == 0)
        throw DegenerateDataError("simulate_scene: n_frames must be >= 1");
    if (scene.scatterers.empty())
        throw DegenerateDataError("simulate_scene: scene has no scatterers");

    AdcFrameSet set;
    set.config = cfg;
    set.n_frames = n_frames;
    set.seed = scene.seed;
    set.samples.resize(n_frames * set.frame_stride());
    set.labels.assign(n_frames, scene.label);
    set.scene_seeds.assign(n_frames, scene.seed);
    run_frames(scene, cfg, set, 0, 0, n_frames, n_threads);
    return set;
}

AdcFrameSet build_dataset(const std::vector<RecipeEntry>& recipe, const RadarConfig& cfg,
                          std::uint64_t dataset_seed, unsigned n_threads) {
    cfg.validate();
    if (recipe.empty())
        throw DegenerateDataError("build_dataset: recipe is empty");

    std::size_t total = 0;
    for (const RecipeEntry& entry : recipe) {
        if (entry.n_frames == 0)
            throw DegenerateDataError("build_dataset: recipe entry with zero frames");
        if (entry.scene.scatterers.empty())
            throw DegenerateDataError("build_dataset: scene has no scatterers");
        total += entry.n_frames;
    }

    AdcFrameSet set;
    set.config = cfg;
    set.n_frames = total;
    set.seed = dataset_seed;
    set.samples.resize(total * set.frame_stride());
    set.labels.resize(total);
    set.scene_seeds.resize(total);

    std::size_t offset = 0;
    for (const RecipeEntry& entry : recipe) {
        for (std::size_t k = 0; k < entry.n_frames; ++k) {
            set.labels[offset + k] = entry.scene.label;
            set.scene_seeds[offset + k] = entry.scene.seed;
        }
        run_frames(entry.scene, cfg, set, offset, 0, entry.n_frames, n_threads);
        offset += entry.n_frames;
    }
    return set;
}

} // namespace radar_ood
