#include "dsp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "errors.hpp"
#include "fft.hpp"
#include "window.hpp"

namespace radar_ood {

namespace {

void check_window(std::span<const double> window, std::size_t expected, const char* what) {
    if (window.size() != expected)
        throw std::invalid_argument(std::string(what) + " window length mismatch");
}

} // namespace

RangeSpectrum range_fft(std::span<const float> frame, const RadarConfig& cfg,
                        std::span<const double> window) {
    const std::size_t n_s = cfg.n_s;
    const std::size_t n_c = cfg.n_c;
    const std::size_t n_rx = cfg.n_rx;
    check_window(window, n_s, "range");
    if (frame.size() != n_rx * n_c * n_s)
        throw std::invalid_argument("frame sample count does not match config");

    RangeSpectrum out;
    out.n_chirps = n_c;
    out.n_bins = n_s / 2;
    out.values.assign(n_c * out.n_bins, {0.0, 0.0});

    std::vector<std::complex<double>> buf(n_s);
    for (std::size_t rx = 0; rx < n_rx; ++rx) {
        for (std::size_t chirp = 0; chirp < n_c; ++chirp) {
            const float* samples = frame.data() + (rx * n_c + chirp) * n_s;
            double mean = 0.0;
            for (std::size_t n = 0; n < n_s; ++n) mean += samples[n];
            mean /= double(n_s);
            for (std::size_t n = 0; n < n_s; ++n)
                buf[n] = {(double(samples[n]) - mean) * window[n], 0.0};
            fft_inplace(buf);
            for (std::size_t bin = 0; bin < out.n_bins; ++bin)
                out.at(chirp, bin) += buf[bin];
        }
    }
    const double scale = 1.0 / double(n_rx);
    for (auto& v : out.values) v *= scale;
    return out;
}

RangeSpectrum mti_filter(const RangeSpectrum& spectrum) {
    RangeSpectrum out = spectrum;
    const std::size_t n_c = spectrum.n_chirps;
    const std::size_t n_b = spectrum.n_bins;
    if (n_c == 0 || n_b == 0) throw std::invalid_argument("empty range spectrum");
    for (std::size_t bin = 0; bin < n_b; ++bin) {
        std::complex<double> mean{0.0, 0.0};
        for (std::size_t chirp = 0; chirp < n_c; ++chirp) mean += spectrum.at(chirp, bin);
        mean /= double(n_c);
        for (std::size_t chirp = 0; chirp < n_c; ++chirp) out.at(chirp, bin) -= mean;
    }
    return out;
}

std::vector<std::complex<double>> doppler_fft(const RangeSpectrum& spectrum,
                                              std::span<const double> window) {
    const std::size_t n_c = spectrum.n_chirps;
    const std::size_t n_b = spectrum.n_bins;
    check_window(window, n_c, "doppler");

    std::vector<std::complex<double>> out(n_c * n_b);
    std::vector<std::complex<double>> series(n_c);
    for (std::size_t bin = 0; bin < n_b; ++bin) {
        for (std::size_t chirp = 0; chirp < n_c; ++chirp)
            series[chirp] = spectrum.at(chirp, bin) * window[chirp];
        fft_inplace(series);
        series = fftshift(series);
        for (std::size_t row = 0; row < n_c; ++row) out[row * n_b + bin] = series[row];
    }
    return out;
}

std::vector<double> rdi_magnitude(std::span<const float> frame, const RadarConfig& cfg,
                                  std::span<const double> range_window,
                                  std::span<const double> doppler_window) {
    RangeSpectrum spectrum = range_fft(frame, cfg, range_window);
    spectrum = mti_filter(spectrum);
    std::vector<std::complex<double>> grid = doppler_fft(spectrum, doppler_window);
    std::vector<double> mags(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) mags[i] = std::abs(grid[i]);
    return mags;
}

RangeDopplerImage normalize_rdi(std::span<const double> magnitudes) {
    if (magnitudes.size() != kRdiPixels)
        throw std::invalid_argument("normalize_rdi expects a 64x64 magnitude grid");

    RangeDopplerImage image;
    image.pixels.assign(kRdiPixels, 0.0f);

    double peak = 0.0;
    for (double m : magnitudes) peak = std::max(peak, m);
    if (peak <= kMagnitudeEpsilon) return image; // silent frame stays all-zero

    // Dividing by the peak before the log makes the map exactly invariant to
    // a common scale factor on the magnitudes.
    const double inv_peak = 1.0 / peak;
    for (std::size_t i = 0; i < kRdiPixels; ++i) {
        const double db = 20.0 * std::log10(magnitudes[i] * inv_peak + kMagnitudeEpsilon);
        const double value = std::clamp((db + kRdiDynamicRangeDb) / kRdiDynamicRangeDb, 0.0, 1.0);
        image.pixels[i] = float(value);
    }
    return image;
}

std::vector<RangeDopplerImage> preprocess(const AdcFrameSet& frames, unsigned n_threads) {
    const RadarConfig& cfg = frames.config;
    cfg.validate();
    if (cfg.n_c != kRdiDim || cfg.n_s / 2 != kRdiDim)
        throw ProtocolError("config does not produce 64x64 range-Doppler images");
    if (frames.samples.size() != frames.n_frames * frames.frame_stride())
        throw FormatError("frame set sample count inconsistent with frame count");

    const std::vector<double> range_window = chebyshev_window(cfg.n_s, 100.0);
    const std::vector<double> doppler_window = chebyshev_window(cfg.n_c, 100.0);

    std::vector<RangeDopplerImage> images(frames.n_frames);
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t f = begin; f < end; ++f) {
            std::vector<double> mags =
                rdi_magnitude(frames.frame(f), cfg, range_window, doppler_window);
            images[f] = normalize_rdi(mags);
            images[f].label = frames.labels[f];
            images[f].frame_id = std::uint32_t(f);
        }
    };

    if (n_threads <= 1 || frames.n_frames < 2) {
        work(0, frames.n_frames);
        return images;
    }
    const std::size_t used = std::min<std::size_t>(n_threads, frames.n_frames);
    std::vector<std::thread> pool;
    pool.reserve(used);
    const std::size_t chunk = (frames.n_frames + used - 1) / used;
    for (std::size_t t = 0; t < used; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(frames.n_frames, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
    return images;
}

} // namespace radar_ood
