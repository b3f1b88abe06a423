#include "weights_io.hpp"

#include <fstream>
#include <limits>

#include "binary_io.hpp"
#include "errors.hpp"

namespace radar_ood {

namespace {
constexpr char kMagic[5] = "AEWT";
constexpr std::uint16_t kVersion = 1;
constexpr std::size_t kMaxTensorRank = 8;
} // namespace

void save_weights(const std::string& path, const ModelWeights& weights) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path + " for writing");

    io::write_magic(os, kMagic);
    io::write_u16(os, kVersion);
    io::write_u64(os, weights.training_seed);
    io::write_u32(os, std::uint32_t(weights.tensors.size()));

    for (const auto& [name, tensor] : weights.tensors) {
        if (name.size() > std::numeric_limits<std::uint16_t>::max())
            throw std::invalid_argument("tensor name too long: " + name);
        io::write_u16(os, std::uint16_t(name.size()));
        io::write_bytes(os, name.data(), name.size());
        io::write_u8(os, std::uint8_t(tensor.ndim()));
        for (std::size_t d = 0; d < tensor.ndim(); ++d)
            io::write_u32(os, std::uint32_t(tensor.dim(d)));
        for (double v : tensor.data) io::write_f32(os, float(v));
    }
    os.flush();
    if (!os) throw IoError("write failed: " + path);
}

ModelWeights load_weights(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path + " for reading");

    io::expect_magic(is, kMagic, path);
    io::expect_version(is, kVersion, path);

    ModelWeights out;
    out.training_seed = io::read_u64(is);
    const std::uint32_t count = io::read_u32(is);

    for (std::uint32_t t = 0; t < count; ++t) {
        const std::uint16_t name_len = io::read_u16(is);
        std::string name(name_len, '\0');
        io::read_bytes(is, name.data(), name_len);

        const std::uint8_t ndim = io::read_u8(is);
        if (ndim == 0 || ndim > kMaxTensorRank)
            throw FormatError(path + ": tensor " + name + " has invalid rank " +
                              std::to_string(ndim));
        std::vector<std::size_t> shape(ndim);
        std::size_t elems = 1;
        for (auto& d : shape) {
            d = io::read_u32(is);
            if (d == 0) throw FormatError(path + ": tensor " + name + " has a zero dim");
            elems *= d;
        }

        Tensor tensor(shape);
        for (std::size_t i = 0; i < elems; ++i) tensor.data[i] = double(io::read_f32(is));

        if (!out.tensors.emplace(std::move(name), std::move(tensor)).second)
            throw FormatError(path + ": duplicate tensor name");
    }
    return out;
}

} // namespace radar_ood
