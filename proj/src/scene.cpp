#include "scene.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "errors.hpp"
#include "rng.hpp"

namespace radar_ood {

const char* label_name(SceneLabel l) {
    switch (l) {
    case SceneLabel::IdWalk: return "ID_WALK";
    case SceneLabel::OodFan: return "OOD_FAN";
    case SceneLabel::OodToyCar: return "OOD_TOY_CAR";
    case SceneLabel::OodPendulum: return "OOD_PENDULUM";
    case SceneLabel::OodRobotVacuum: return "OOD_ROBOT_VACUUM";
    }
    throw FormatError("label_name: unknown scene label");
}

SceneLabel label_from_name(const std::string& name) {
    for (SceneLabel l : kAllLabels)
        if (name == label_name(l))
            return l;
    throw FormatError("unknown scene label name: " + name);
}

SceneLabel label_from_code(std::uint8_t code) {
    if (code > std::uint8_t(SceneLabel::OodRobotVacuum))
        throw FormatError("unknown scene label code: " + std::to_string(int(code)));
    return SceneLabel(code);
}

namespace {

// Shared per-frame trajectory samples, captured by the range/velocity closures.
struct Track {
    std::vector<double> range_m;
    std::vector<double> velocity_ms;
};

Scatterer track_scatterer(const std::shared_ptr<Track>& track, double amplitude,
                          std::optional<MicroDoppler> md = std::nullopt) {
    Scatterer s;
    s.range_at = [track](std::size_t k) { return track->range_m.at(k); };
    s.velocity_at = [track](std::size_t k) { return track->velocity_ms.at(k); };
    s.amplitude = amplitude;
    s.micro_doppler = md;
    return s;
}

// Bounded random walk: velocity integrates uniform acceleration kicks and the
// position reflects off [r_lo, r_hi].
std::shared_ptr<Track> random_walk_track(std::mt19937_64& rng, std::size_t n_frames, double t_f,
                                         double r_lo, double r_hi, double v_max, double accel) {
    auto track = std::make_shared<Track>();
    track->range_m.resize(n_frames);
    track->velocity_ms.resize(n_frames);
    double r = uniform_in(rng, r_lo + 0.2 * (r_hi - r_lo), r_hi - 0.2 * (r_hi - r_lo));
    double v = uniform_in(rng, -0.5 * v_max, 0.5 * v_max);
    for (std::size_t k = 0; k < n_frames; ++k) {
        track->range_m[k] = r;
        track->velocity_ms[k] = v;
        double a = uniform_in(rng, -accel, accel);
        v = std::clamp(v + a * t_f, -v_max, v_max);
        r += v * t_f;
        if (r > r_hi) {
            r = 2.0 * r_hi - r;
            v = -v;
        } else if (r < r_lo) {
            r = 2.0 * r_lo - r;
            v = -v;
        }
    }
    return track;
}

// Pacing trajectory: speed magnitude wanders within [v_lo, v_hi] and only the
// wall bounces flip its sign, so the target never hovers near zero Doppler.
std::shared_ptr<Track> pacing_track(std::mt19937_64& rng, std::size_t n_frames, double t_f,
                                    double r_lo, double r_hi, double v_lo, double v_hi,
                                    double accel) {
    auto track = std::make_shared<Track>();
    track->range_m.resize(n_frames);
    track->velocity_ms.resize(n_frames);
    double r = uniform_in(rng, r_lo + 0.2 * (r_hi - r_lo), r_hi - 0.2 * (r_hi - r_lo));
    double speed = uniform_in(rng, v_lo, v_hi);
    double sign = uniform01(rng) < 0.5 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n_frames; ++k) {
        track->range_m[k] = r;
        track->velocity_ms[k] = sign * speed;
        speed = std::clamp(speed + uniform_in(rng, -accel, accel) * t_f, v_lo, v_hi);
        r += sign * speed * t_f;
        if (r > r_hi) {
            r = 2.0 * r_hi - r;
            sign = -sign;
        } else if (r < r_lo) {
            r = 2.0 * r_lo - r;
            sign = -sign;
        }
    }
    return track;
}

} // namespace

Scene make_walk_scene(std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg, double noise_std) {
    (void)cfg;
    std::mt19937_64 rng(derive_seed(seed, 0x57414c4bull)); // "WALK"
    Scene scene;
    scene.label = SceneLabel::IdWalk;
    scene.seed = seed;
    scene.noise_std = noise_std;

    // pacing keeps the torso clear of the MTI notch; near-zero Doppler stays
    // outside the training distribution
    auto torso = pacing_track(rng, n_frames, cfg.t_f, 1.1, 4.9, 0.6, 1.4, 1.2);
    scene.scatterers.push_back(track_scatterer(torso, uniform_in(rng, 0.8, 1.2)));

    std::size_t n_limbs = 2 + std::size_t(rng() % 3); // 2..4
    for (std::size_t i = 0; i < n_limbs; ++i) {
        MicroDoppler md;
        md.amplitude_ms = uniform_in(rng, 0.5, 1.8);
        md.frequency_hz = uniform_in(rng, 0.5, 2.0);
        md.phase_rad = uniform_in(rng, 0.0, 2.0 * 3.14159265358979323846);
        scene.scatterers.push_back(track_scatterer(torso, uniform_in(rng, 0.3, 0.7), md));
    }
    return scene;
}

Scene make_fan_scene(std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg, double noise_std) {
    (void)cfg;
    std::mt19937_64 rng(derive_seed(seed, 0x46414eull)); // "FAN"
    Scene scene;
    scene.label = SceneLabel::OodFan;
    scene.seed = seed;
    scene.noise_std = noise_std;

    auto spot = std::make_shared<Track>();
    spot->range_m.assign(n_frames, uniform_in(rng, 1.0, 4.0));
    spot->velocity_ms.assign(n_frames, 0.0);

    // hub: weak slow vibration so MTI does not null the whole return
    MicroDoppler hub;
    hub.amplitude_ms = uniform_in(rng, 0.05, 0.15);
    hub.frequency_hz = uniform_in(rng, 8.0, 15.0);
    hub.phase_rad = uniform_in(rng, 0.0, 6.283185307179586);
    scene.scatterers.push_back(track_scatterer(spot, uniform_in(rng, 0.5, 1.0), hub));

    for (int blade = 0; blade < 3; ++blade) {
        MicroDoppler md;
        md.amplitude_ms = uniform_in(rng, 1.6, 2.9);
        md.frequency_hz = uniform_in(rng, 12.0, 24.0);
        md.phase_rad = uniform_in(rng, 0.0, 6.283185307179586);
        scene.scatterers.push_back(track_scatterer(spot, uniform_in(rng, 0.3, 0.7), md));
    }
    return scene;
}

Scene make_toy_car_scene(std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg, double noise_std) {
    std::mt19937_64 rng(derive_seed(seed, 0x434152ull)); // "CAR"
    Scene scene;
    scene.label = SceneLabel::OodToyCar;
    scene.seed = seed;
    scene.noise_std = noise_std;

    const double r_lo = 0.6;
    const double r_hi = std::min(8.8, cfg.max_unambiguous_range() - 0.8);
    auto track = std::make_shared<Track>();
    track->range_m.resize(n_frames);
    track->velocity_ms.resize(n_frames);
    double speed = uniform_in(rng, 1.5, 3.0);
    double v = (uniform01(rng) < 0.5 ? -speed : speed);
    double r = uniform_in(rng, r_lo + 0.5, r_hi - 0.5);
    for (std::size_t k = 0; k < n_frames; ++k) {
        track->range_m[k] = r;
        track->velocity_ms[k] = v;
        r += v * cfg.t_f;
        if (r > r_hi) {
            r = 2.0 * r_hi - r;
            v = -v;
        } else if (r < r_lo) {
            r = 2.0 * r_lo - r;
            v = -v;
        }
    }
    scene.scatterers.push_back(track_scatterer(track, uniform_in(rng, 0.6, 1.2)));
    return scene;
}

Scene make_pendulum_scene(std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg, double noise_std) {
    std::mt19937_64 rng(derive_seed(seed, 0x50454e44ull)); // "PEND"
    Scene scene;
    scene.label = SceneLabel::OodPendulum;
    scene.seed = seed;
    scene.noise_std = noise_std;

    const double two_pi = 6.283185307179586;
    double center = uniform_in(rng, 1.5, 4.5);
    double swing = uniform_in(rng, 0.15, 0.45);
    double freq = uniform_in(rng, 0.25, 0.6);
    double phase = uniform_in(rng, 0.0, two_pi);
    auto track = std::make_shared<Track>();
    track->range_m.resize(n_frames);
    track->velocity_ms.resize(n_frames);
    for (std::size_t k = 0; k < n_frames; ++k) {
        double t = double(k) * cfg.t_f;
        track->range_m[k] = center + swing * std::sin(two_pi * freq * t + phase);
        track->velocity_ms[k] = two_pi * freq * swing * std::cos(two_pi * freq * t + phase);
    }
    scene.scatterers.push_back(track_scatterer(track, uniform_in(rng, 0.4, 0.9)));
    return scene;
}

Scene make_robot_vacuum_scene(std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg,
                              double noise_std) {
    std::mt19937_64 rng(derive_seed(seed, 0x564143ull)); // "VAC"
    Scene scene;
    scene.label = SceneLabel::OodRobotVacuum;
    scene.seed = seed;
    scene.noise_std = noise_std;

    auto track = random_walk_track(rng, n_frames, cfg.t_f, 0.8, 6.5, 0.45, 0.3);
    scene.scatterers.push_back(track_scatterer(track, uniform_in(rng, 0.8, 1.5)));
    return scene;
}

Scene make_scene(SceneLabel label, std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg,
                 double noise_std) {
    switch (label) {
    case SceneLabel::IdWalk: return make_walk_scene(seed, n_frames, cfg, noise_std);
    case SceneLabel::OodFan: return make_fan_scene(seed, n_frames, cfg, noise_std);
    case SceneLabel::OodToyCar: return make_toy_car_scene(seed, n_frames, cfg, noise_std);
    case SceneLabel::OodPendulum: return make_pendulum_scene(seed, n_frames, cfg, noise_std);
    case SceneLabel::OodRobotVacuum: return make_robot_vacuum_scene(seed, n_frames, cfg, noise_std);
    }
    throw FormatError("make_scene: unknown scene label");
}

} // namespace radar_ood
