#pragma once

#include <cstddef>
#include <cstdint>

#include "errors.hpp"

namespace radar_ood {

inline bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

// FMCW front-end configuration. Defaults describe the 60 GHz 1Tx/3Rx profile
// used by the whole pipeline; every dimension downstream derives from here.
struct RadarConfig {
    std::size_t n_tx = 1;
    std::size_t n_rx = 3;
    double f_s = 2.0e6;       // ADC sampling frequency [Hz]
    std::size_t n_c = 64;     // chirps per frame
    std::size_t n_s = 128;    // samples per chirp
    double t_f = 0.050;       // frame period [s]
    double t_c = 391.55e-6;   // chirp-to-chirp time [s]
    double f_min = 60.1e9;    // ramp start frequency [Hz]
    double f_max = 61.1e9;    // ramp stop frequency [Hz]
    double bandwidth = 1.0e9; // sweep bandwidth [Hz]

    static constexpr double kSpeedOfLight = 299792458.0;

    // The sampling window n_s/f_s is the active ramp time; idle time fills t_c.
    double chirp_active_time() const { return double(n_s) / f_s; }

    double range_bin_width() const { return kSpeedOfLight / (2.0 * bandwidth); }

    // Real ADC sampling: beat frequencies are unambiguous up to f_s/2, i.e. n_s/2 bins.
    double max_unambiguous_range() const { return range_bin_width() * double(n_s) / 2.0; }

    double beat_frequency(double range_m) const {
        return 2.0 * bandwidth * range_m / (kSpeedOfLight * chirp_active_time());
    }

    // Fractional fast-time FFT bin for a target at range_m.
    double range_bin(double range_m) const { return beat_frequency(range_m) * double(n_s) / f_s; }

    // Fractional slow-time FFT bin offset from zero Doppler for radial velocity v.
    double doppler_bin(double v) const { return 2.0 * f_min * v * t_c * double(n_c) / kSpeedOfLight; }

    double max_unambiguous_speed() const { return kSpeedOfLight / (4.0 * f_min * t_c); }

    void validate() const {
        if (!(f_s > 0.0 && t_f > 0.0 && t_c > 0.0 && f_min > 0.0 && f_max > 0.0 && bandwidth > 0.0))
            throw FormatError("radar config: frequencies and times must be strictly positive");
        if (n_tx == 0 || n_rx == 0)
            throw FormatError("radar config: antenna counts must be positive");
        if (!is_power_of_two(n_s) || !is_power_of_two(n_c))
            throw FormatError("radar config: n_s and n_c must be powers of two");
        double diff = (f_max - f_min) - bandwidth;
        if (diff < -1.0 || diff > 1.0)
            throw FormatError("radar config: bandwidth must equal f_max - f_min");
    }
};

} // namespace radar_ood
