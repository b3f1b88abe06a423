#include "window.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace radar_ood {

namespace {

constexpr double kPi = 3.14159265358979323846;

// T_{order}(x) extended past |x| <= 1 with the cosh branch.
double cheb_poly(double order, double x) {
    if (x > 1.0)
        return std::cosh(order * std::acosh(x));
    if (x < -1.0)
        return std::cosh(order * std::acosh(-x));
    return std::cos(order * std::acos(x));
}

} // namespace

std::vector<double> chebyshev_window(std::size_t length, double sidelobe_db) {
    if (length < 2)
        throw std::invalid_argument("chebyshev_window: length must be >= 2");
    if (!(sidelobe_db > 0.0))
        throw std::invalid_argument("chebyshev_window: sidelobe attenuation must be positive");

    const std::size_t n = length;
    const double order = double(n - 1);
    const double ripple = std::pow(10.0, sidelobe_db / 20.0);
    const double beta = std::cosh(std::acosh(ripple) / order);
    const bool odd = (n % 2) != 0;

    // Sample the Chebyshev response on the DFT grid, then transform to time domain.
    std::vector<std::complex<double>> p(n);
    for (std::size_t k = 0; k < n; ++k) {
        double x = beta * std::cos(kPi * double(k) / double(n));
        double t;
        if (x > 1.0)
            t = std::cosh(order * std::acosh(x));
        else if (x < -1.0)
            t = (odd ? 1.0 : -1.0) * std::cosh(order * std::acosh(-x));
        else
            t = cheb_poly(order, x);
        p[k] = t;
        if (!odd) {
            double ph = kPi * double(k) / double(n);
            p[k] *= std::complex<double>(std::cos(ph), std::sin(ph));
        }
    }

    // Direct DFT; window lengths are small, O(n^2) is cheap and works for any n.
    std::vector<double> w_raw(n);
    for (std::size_t m = 0; m < n; ++m) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            double ang = -2.0 * kPi * double(k) * double(m) / double(n);
            acc += p[k] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        w_raw[m] = acc.real();
    }

    std::vector<double> w(n);
    if (odd) {
        const std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i < half - 1; ++i)
            w[i] = w_raw[half - 1 - i];
        for (std::size_t i = 0; i < half; ++i)
            w[half - 1 + i] = w_raw[i];
    } else {
        const std::size_t half = n / 2 + 1;
        for (std::size_t i = 0; i < half - 1; ++i)
            w[i] = w_raw[half - 1 - i];
        for (std::size_t i = 1; i < half; ++i)
            w[half - 2 + i] = w_raw[i];
    }

    double peak = w[0];
    for (double v : w)
        if (v > peak)
            peak = v;
    for (double& v : w)
        v /= peak;
    return w;
}

} // namespace radar_ood
