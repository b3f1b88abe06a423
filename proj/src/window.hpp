#pragma once

#include <cstddef>
#include <vector>

namespace radar_ood {

// Dolph-Chebyshev window, peak-normalized to 1. All DFT sidelobes sit at or
// below -sidelobe_db relative to the mainlobe. length >= 2.
std::vector<double> chebyshev_window(std::size_t length, double sidelobe_db);

} // namespace radar_ood
