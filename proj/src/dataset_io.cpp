#include "dataset_io.hpp"

#include <fstream>

#include "binary_io.hpp"

namespace radar_ood {

namespace {

constexpr char kAdcMagic[5] = "RADC";
constexpr char kRdiMagic[5] = "RDIF";
constexpr std::uint16_t kVersion = 1;

void expect_eof(std::istream& in, const char* what) {
    if (in.peek() != std::char_traits<char>::eof())
        throw FormatError(std::string(what) + ": trailing bytes after the last record");
}

SceneLabel checked_label(std::uint8_t code, const char* what) {
    if (code > std::uint8_t(SceneLabel::OodRobotVacuum))
        throw FormatError(std::string(what) + ": unknown label code " + std::to_string(code));
    return SceneLabel(code);
}

} // namespace

void save_adc(const std::filesystem::path& path, const AdcFrameSet& frames) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());

    io::write_magic(out, kAdcMagic);
    io::write_u16(out, kVersion);
    io::write_u32(out, std::uint32_t(frames.n_frames));
    io::write_u16(out, std::uint16_t(frames.config.n_rx));
    io::write_u16(out, std::uint16_t(frames.config.n_c));
    io::write_u16(out, std::uint16_t(frames.config.n_s));
    io::write_u64(out, frames.seed);

    for (std::size_t f = 0; f < frames.n_frames; ++f) {
        io::write_u8(out, std::uint8_t(frames.labels[f]));
        io::write_u64(out, frames.scene_seeds[f]);
        for (float v : frames.frame(f)) io::write_f32(out, v);
    }

    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

AdcFrameSet load_adc(const std::filesystem::path& path, const RadarConfig& config) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());

    io::expect_magic(in, kAdcMagic, "ADC file");
    io::expect_version(in, kVersion, "ADC file");

    AdcFrameSet frames;
    frames.config = config;
    frames.n_frames = io::read_u32(in);
    const std::size_t n_rx = io::read_u16(in);
    const std::size_t n_c = io::read_u16(in);
    const std::size_t n_s = io::read_u16(in);
    if (n_rx != config.n_rx || n_c != config.n_c || n_s != config.n_s)
        throw FormatError("ADC file: cube geometry " + std::to_string(n_rx) + "x" +
                          std::to_string(n_c) + "x" + std::to_string(n_s) +
                          " does not match the radar config");
    frames.seed = io::read_u64(in);

    const std::size_t stride = frames.frame_stride();
    frames.samples.resize(frames.n_frames * stride);
    frames.labels.reserve(frames.n_frames);
    frames.scene_seeds.reserve(frames.n_frames);

    for (std::size_t f = 0; f < frames.n_frames; ++f) {
        frames.labels.push_back(checked_label(io::read_u8(in), "ADC file"));
        frames.scene_seeds.push_back(io::read_u64(in));
        float* dst = frames.samples.data() + f * stride;
        for (std::size_t i = 0; i < stride; ++i) dst[i] = io::read_f32(in);
    }
    expect_eof(in, "ADC file");
    return frames;
}

void save_rdis(const std::filesystem::path& path, const std::vector<RangeDopplerImage>& rdis) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());

    io::write_magic(out, kRdiMagic);
    io::write_u16(out, kVersion);
    io::write_u32(out, std::uint32_t(rdis.size()));
    for (const RangeDopplerImage& rdi : rdis) {
        io::write_u8(out, std::uint8_t(rdi.label));
        io::write_u32(out, rdi.frame_id);
        for (float v : rdi.pixels) io::write_f32(out, v);
    }

    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<RangeDopplerImage> load_rdis(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path.string());

    io::expect_magic(in, kRdiMagic, "RDI file");
    io::expect_version(in, kVersion, "RDI file");

    const std::uint32_t n_images = io::read_u32(in);
    std::vector<RangeDopplerImage> rdis(n_images);
    for (RangeDopplerImage& rdi : rdis) {
        rdi.label = checked_label(io::read_u8(in), "RDI file");
        rdi.frame_id = io::read_u32(in);
        rdi.pixels.resize(kRdiPixels);
        for (float& v : rdi.pixels) v = io::read_f32(in);
    }
    expect_eof(in, "RDI file");
    return rdis;
}

} // namespace radar_ood
