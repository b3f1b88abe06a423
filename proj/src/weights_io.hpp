#pragma once

#include <string>

#include "autoencoder.hpp"

namespace radar_ood {

// AEWT container: magic "AEWT", u16 version=1, u64 training seed, u32 tensor
// count, then per tensor (u16 name length, name bytes, u8 ndim, u32 dims...,
// float32 little-endian data). Tensors are stored in lexicographic name order
// so identical weights always produce identical bytes.
void save_weights(const std::string& path, const ModelWeights& weights);

ModelWeights load_weights(const std::string& path);

} // namespace radar_ood
