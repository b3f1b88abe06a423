#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "radar_config.hpp"
#include "radar_sim.hpp"
#include "scene.hpp"

namespace radar_ood {

inline constexpr std::size_t kRdiDim = 64;
inline constexpr std::size_t kRdiPixels = kRdiDim * kRdiDim;

// Per-frame RDI normalization: log-magnitude clipped to this many dB below
// the frame peak, mapped affinely onto [0,1].
inline constexpr double kRdiDynamicRangeDb = 60.0;
// Guards log(0) on peak-normalized magnitudes; a frame whose peak magnitude
// is at or below this floor is treated as all-zero.
inline constexpr double kMagnitudeEpsilon = 1e-12;

// Fast-time spectra of one frame after Rx averaging: chirps x retained bins.
// Only the non-negative-frequency half of the fast-time FFT is kept.
struct RangeSpectrum {
    std::size_t n_chirps = 0;
    std::size_t n_bins = 0;
    std::vector<std::complex<double>> values; // row-major (chirp, bin)

    std::complex<double>& at(std::size_t chirp, std::size_t bin) { return values[chirp * n_bins + bin]; }
    const std::complex<double>& at(std::size_t chirp, std::size_t bin) const {
        return values[chirp * n_bins + bin];
    }
};

// Normalized range-Doppler image: Doppler rows (zero Doppler centered at row
// n_c/2) by range columns, every pixel in [0,1].
struct RangeDopplerImage {
    std::vector<float> pixels; // row-major (doppler, range), kRdiPixels entries
    SceneLabel label = SceneLabel::IdWalk;
    std::uint32_t frame_id = 0;

    float at(std::size_t doppler_row, std::size_t range_col) const {
        return pixels[doppler_row * kRdiDim + range_col];
    }
};

// Per chirp and per Rx: remove the fast-time mean, apply the window, take the
// n_s-point FFT and keep bins 0..n_s/2-1; then average the Rx spectra into one
// channel.
RangeSpectrum range_fft(std::span<const float> frame, const RadarConfig& cfg,
                        std::span<const double> window);

// Remove the slow-time mean per range bin (frame-wise MTI): static returns
// land exactly on zero Doppler and are nulled.
RangeSpectrum mti_filter(const RangeSpectrum& spectrum);

// Per range bin: window the slow-time series, FFT, and fftshift so zero
// Doppler is the middle row. Output is row-major (doppler row, range bin).
std::vector<std::complex<double>> doppler_fft(const RangeSpectrum& spectrum,
                                              std::span<const double> window);

// Magnitude of the full chain for one frame (no normalization). Row-major
// (doppler, range), n_c x n_s/2 entries.
std::vector<double> rdi_magnitude(std::span<const float> frame, const RadarConfig& cfg,
                                  std::span<const double> range_window,
                                  std::span<const double> doppler_window);

// 60 dB log-magnitude normalization onto [0,1]. The peak pixel maps to 1;
// anything at or below peak-60dB maps to 0; an (effectively) all-zero frame
// maps to the all-zero image.
RangeDopplerImage normalize_rdi(std::span<const double> magnitudes);

// Full preprocessing of a frame set; labels are carried through and frame_id
// is the index within the set. Frames may be processed in parallel; output is
// bit-identical to serial processing.
std::vector<RangeDopplerImage> preprocess(const AdcFrameSet& frames, unsigned n_threads = 1);

} // namespace radar_ood
