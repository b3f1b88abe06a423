#include <doctest.h>

#include <cstddef>
#include <stdexcept>

#include "window.hpp"
#include "oracles.hpp"

using namespace radar_ood;

TEST_CASE("two-point chebyshev window is rectangular") {
    auto w = chebyshev_window(2, 100.0);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("chebyshev window sidelobes stay at or below the design level") {
    for (std::size_t n : {std::size_t(64), std::size_t(128)}) {
        auto w = chebyshev_window(n, 100.0);
        double psl = oracle::peak_sidelobe_db(w, 8192);
        CAPTURE(n);
        CHECK(psl <= -99.5);
    }
}

TEST_CASE("chebyshev window is symmetric with unit peak") {
    for (std::size_t n : {std::size_t(2), std::size_t(63), std::size_t(64), std::size_t(128)}) {
        auto w = chebyshev_window(n, 100.0);
        REQUIRE(w.size() == n);
        double peak = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(w[i] == w[n - 1 - i]);
            CHECK(w[i] > 0.0);
            peak = std::max(peak, w[i]);
        }
        CHECK(peak == 1.0);
    }
}

// Reference values from an independent implementation of the same window
// definition (frequency-sampled Dolph-Chebyshev at 100 dB).
TEST_CASE("chebyshev window matches frozen reference taps") {
    auto w128 = chebyshev_window(128, 100.0);
    CHECK(w128[0] == doctest::Approx(0.00042329408030306872).epsilon(1e-10));
    CHECK(w128[1] == doctest::Approx(0.00049353920325507204).epsilon(1e-10));
    CHECK(w128[32] == doctest::Approx(0.24756668694199163).epsilon(1e-10));
    CHECK(w128[63] == doctest::Approx(1.0).epsilon(1e-12));

    auto w64 = chebyshev_window(64, 100.0);
    CHECK(w64[0] == doctest::Approx(0.00038074993781060852).epsilon(1e-10));
    CHECK(w64[16] == doctest::Approx(0.25725748708874308).epsilon(1e-10));

    auto w63 = chebyshev_window(63, 100.0);
    CHECK(w63[0] == doctest::Approx(0.00038135102955381132).epsilon(1e-10));
    CHECK(w63[31] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chebyshev window rejects degenerate arguments") {
    CHECK_THROWS_AS(chebyshev_window(1, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(chebyshev_window(0, 100.0), std::invalid_argument);
    CHECK_THROWS_AS(chebyshev_window(64, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(chebyshev_window(64, -3.0), std::invalid_argument);
}
