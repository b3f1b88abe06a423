#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "radar_config.hpp"

namespace radar_ood {

// Frame labels. ID is the single walking human; everything else is OOD.
enum class SceneLabel : std::uint8_t {
    IdWalk = 0,
    OodFan = 1,
    OodToyCar = 2,
    OodPendulum = 3,
    OodRobotVacuum = 4,
};

inline constexpr SceneLabel kAllLabels[] = {
    SceneLabel::IdWalk,     SceneLabel::OodFan,         SceneLabel::OodToyCar,
    SceneLabel::OodPendulum, SceneLabel::OodRobotVacuum,
};

inline bool is_id_label(SceneLabel l) { return l == SceneLabel::IdWalk; }

const char* label_name(SceneLabel l);
SceneLabel label_from_name(const std::string& name);
SceneLabel label_from_code(std::uint8_t code);

// Sinusoidal radial-velocity modulation (limbs, fan blades).
struct MicroDoppler {
    double amplitude_ms = 0.0; // peak velocity offset [m/s]
    double frequency_hz = 0.0;
    double phase_rad = 0.0;
};

// Point reflector with a per-frame trajectory. Trajectories are pure
// functions of the frame index so frames can be generated in any order.
struct Scatterer {
    std::function<double(std::size_t)> range_at;    // frame index -> meters
    std::function<double(std::size_t)> velocity_at; // frame index -> m/s (bulk radial)
    double amplitude = 1.0;
    std::optional<MicroDoppler> micro_doppler;
};

struct Scene {
    SceneLabel label = SceneLabel::IdWalk;
    std::vector<Scatterer> scatterers;
    double noise_std = 0.0;
    std::uint64_t seed = 0;
};

// Deterministic scene factories for the synthetic benchmark. All trajectory
// parameters are drawn from the scene seed; the trajectories cover frames
// 0..n_frames-1 and stay inside the radar's unambiguous range.

// Torso on a bounded random walk in [1,5] m plus 2-4 limb scatterers that
// share the torso trajectory with sinusoidal micro-Doppler offsets.
Scene make_walk_scene(std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg, double noise_std);

// Fixed range, zero bulk velocity, strong fast micro-Doppler from the blades.
Scene make_fan_scene(std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg, double noise_std);

// Fast linear trajectory (up to 3 m/s) bouncing between range walls, no micro-Doppler.
Scene make_toy_car_scene(std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg, double noise_std);

// Sinusoidal range oscillation around a fixed center (blinds/laundry family).
Scene make_pendulum_scene(std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg, double noise_std);

// Slow (< 0.5 m/s) smooth trajectory, no micro-Doppler.
Scene make_robot_vacuum_scene(std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg, double noise_std);

Scene make_scene(SceneLabel label, std::uint64_t seed, std::size_t n_frames, const RadarConfig& cfg,
                 double noise_std);

} // namespace radar_ood
