#pragma once

#include <filesystem>
#include <vector>

#include "dsp.hpp"
#include "radar_sim.hpp"

namespace radar_ood {

// On-disk dataset formats, little endian throughout.
//
// ADC frames ("RADC", version 1):
//   magic, u16 version, u32 n_frames, u16 n_rx, u16 n_c, u16 n_s,
//   u64 dataset seed, then per frame: u8 label, u64 scene seed,
//   n_rx*n_c*n_s float32 samples.
//
// Range-Doppler images ("RDIF", version 1):
//   magic, u16 version, u32 n_images, then per image: u8 label,
//   u32 frame_id, 4096 float32 row-major pixels.

void save_adc(const std::filesystem::path& path, const AdcFrameSet& frames);

// The file carries only the cube geometry, so the caller's radar config
// supplies the rest; mismatched n_rx/n_c/n_s is a FormatError.
AdcFrameSet load_adc(const std::filesystem::path& path, const RadarConfig& config);

void save_rdis(const std::filesystem::path& path, const std::vector<RangeDopplerImage>& rdis);
std::vector<RangeDopplerImage> load_rdis(const std::filesystem::path& path);

} // namespace radar_ood
