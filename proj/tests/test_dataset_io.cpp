#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "dataset_io.hpp"
#include "errors.hpp"
#include "radar_config.hpp"
#include "rng.hpp"

using namespace radar_ood;

namespace {

std::vector<char> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::vector<char>(std::istreambuf_iterator<char>(in),
                             std::istreambuf_iterator<char>());
}

const RadarConfig kCfg{};

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("radar_ood_test_" + name);
}

AdcFrameSet make_frame_set(std::uint64_t seed, std::size_t n_frames) {
    AdcFrameSet frames;
    frames.config = kCfg;
    frames.n_frames = n_frames;
    frames.seed = seed;
    frames.samples.resize(n_frames * frames.frame_stride());
    std::mt19937_64 eng(seed);
    for (float& v : frames.samples) v = float(uniform_in(eng, -1.0, 1.0));
    for (std::size_t f = 0; f < n_frames; ++f) {
        frames.labels.push_back(SceneLabel(f % 5));
        frames.scene_seeds.push_back(seed * 1000 + f);
    }
    return frames;
}

std::vector<RangeDopplerImage> make_rdis(std::uint64_t seed, std::size_t n) {
    std::vector<RangeDopplerImage> rdis(n);
    std::mt19937_64 eng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        rdis[i].label = SceneLabel((i + 1) % 5);
        rdis[i].frame_id = std::uint32_t(100 + i);
        rdis[i].pixels.resize(kRdiPixels);
        for (float& v : rdis[i].pixels) v = float(uniform01(eng));
    }
    return rdis;
}

void corrupt_byte(const std::filesystem::path& path, std::size_t offset, char value) {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    REQUIRE(f.good());
    f.seekp(std::streamoff(offset));
    f.write(&value, 1);
}

} // namespace

TEST_CASE("ADC file: round trip preserves every field bit for bit") {
    AdcFrameSet frames = make_frame_set(17, 7);
    const auto path = temp_path("frames.radc");
    save_adc(path, frames);

    AdcFrameSet back = load_adc(path, kCfg);
    CHECK(back.n_frames == frames.n_frames);
    CHECK(back.seed == frames.seed);
    CHECK(back.labels == frames.labels);
    CHECK(back.scene_seeds == frames.scene_seeds);
    REQUIRE(back.samples.size() == frames.samples.size());
    CHECK(back.samples == frames.samples);
    CHECK(back.config.n_rx == kCfg.n_rx);

    std::filesystem::remove(path);
}

TEST_CASE("ADC file: header layout and deterministic bytes") {
    AdcFrameSet frames = make_frame_set(5, 2);
    const auto path = temp_path("header.radc");
    save_adc(path, frames);

    const auto bytes = read_file_bytes(path);
    REQUIRE(bytes.size() >= 20);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "RADC");
    CHECK(bytes[4] == 1); // version u16 = 1, little endian
    CHECK(bytes[5] == 0);
    CHECK(std::uint8_t(bytes[6]) == 2); // n_frames u32
    CHECK(bytes[7] == 0);
    CHECK(std::uint8_t(bytes[10]) == 3);  // n_rx
    CHECK(std::uint8_t(bytes[12]) == 64); // n_c
    CHECK(std::uint8_t(bytes[14]) == 128); // n_s
    const std::size_t stride = std::size_t(3) * 64 * 128;
    CHECK(bytes.size() == 4 + 2 + 4 + 6 + 8 + 2 * (1 + 8 + 4 * stride));

    const auto path2 = temp_path("header2.radc");
    save_adc(path2, frames);
    CHECK(read_file_bytes(path2) == bytes);

    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("ADC file: empty set round trips") {
    AdcFrameSet frames = make_frame_set(1, 0);
    const auto path = temp_path("empty.radc");
    save_adc(path, frames);
    AdcFrameSet back = load_adc(path, kCfg);
    CHECK(back.n_frames == 0);
    CHECK(back.samples.empty());
    std::filesystem::remove(path);
}

TEST_CASE("ADC file: malformed input is rejected") {
    CHECK_THROWS_AS((void)load_adc(temp_path("missing.radc"), kCfg), IoError);

    AdcFrameSet frames = make_frame_set(3, 2);
    const auto path = temp_path("bad.radc");

    save_adc(path, frames);
    corrupt_byte(path, 0, 'X');
    CHECK_THROWS_AS((void)load_adc(path, kCfg), FormatError);

    save_adc(path, frames);
    corrupt_byte(path, 4, 9); // version
    CHECK_THROWS_AS((void)load_adc(path, kCfg), FormatError);

    save_adc(path, frames);
    corrupt_byte(path, 24, 77); // first label code, right after the u64 seed
    CHECK_THROWS_AS((void)load_adc(path, kCfg), FormatError);

    // geometry mismatch against the consuming config
    save_adc(path, frames);
    RadarConfig other = kCfg;
    other.n_s = 64;
    CHECK_THROWS_AS((void)load_adc(path, other), FormatError);

    // truncation and trailing garbage
    save_adc(path, frames);
    const auto bytes = read_file_bytes(path);
    std::ofstream(path, std::ios::binary | std::ios::trunc)
        .write(bytes.data(), std::streamsize(bytes.size() - 5));
    CHECK_THROWS_AS((void)load_adc(path, kCfg), FormatError);

    std::ofstream(path, std::ios::binary | std::ios::trunc)
        .write(bytes.data(), std::streamsize(bytes.size()));
    std::ofstream(path, std::ios::binary | std::ios::app).write("zz", 2);
    CHECK_THROWS_AS((void)load_adc(path, kCfg), FormatError);

    std::filesystem::remove(path);
}

TEST_CASE("RDI file: round trip preserves pixels, labels, and frame ids") {
    auto rdis = make_rdis(23, 5);
    const auto path = temp_path("images.rdif");
    save_rdis(path, rdis);

    auto back = load_rdis(path);
    REQUIRE(back.size() == rdis.size());
    for (std::size_t i = 0; i < rdis.size(); ++i) {
        CHECK(back[i].label == rdis[i].label);
        CHECK(back[i].frame_id == rdis[i].frame_id);
        CHECK(back[i].pixels == rdis[i].pixels);
    }
    std::filesystem::remove(path);
}

TEST_CASE("RDI file: header layout, empty file, deterministic bytes") {
    auto rdis = make_rdis(29, 3);
    const auto path = temp_path("layout.rdif");
    save_rdis(path, rdis);

    const auto bytes = read_file_bytes(path);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "RDIF");
    CHECK(bytes[4] == 1);
    CHECK(std::uint8_t(bytes[6]) == 3);
    CHECK(bytes.size() == 4 + 2 + 4 + 3 * (1 + 4 + 4 * kRdiPixels));

    const auto path2 = temp_path("layout2.rdif");
    save_rdis(path2, rdis);
    CHECK(read_file_bytes(path2) == bytes);

    save_rdis(path, {});
    CHECK(load_rdis(path).empty());

    std::filesystem::remove(path);
    std::filesystem::remove(path2);
}

TEST_CASE("RDI file: malformed input is rejected") {
    CHECK_THROWS_AS((void)load_rdis(temp_path("missing.rdif")), IoError);

    auto rdis = make_rdis(31, 2);
    const auto path = temp_path("bad.rdif");

    save_rdis(path, rdis);
    corrupt_byte(path, 1, 'x');
    CHECK_THROWS_AS((void)load_rdis(path), FormatError);

    save_rdis(path, rdis);
    corrupt_byte(path, 10, 99); // first image label
    CHECK_THROWS_AS((void)load_rdis(path), FormatError);

    save_rdis(path, rdis);
    const auto bytes = read_file_bytes(path);
    std::ofstream(path, std::ios::binary | std::ios::trunc)
        .write(bytes.data(), std::streamsize(bytes.size() - 1));
    CHECK_THROWS_AS((void)load_rdis(path), FormatError);

    std::ofstream(path, std::ios::binary | std::ios::trunc)
        .write(bytes.data(), std::streamsize(bytes.size()));
    std::ofstream(path, std::ios::binary | std::ios::app).write("q", 1);
    CHECK_THROWS_AS((void)load_rdis(path), FormatError);

    std::filesystem::remove(path);
}

TEST_CASE("simulated dataset survives the ADC round trip") {
    RadarConfig cfg = kCfg;
    std::vector<RecipeEntry> recipe;
    recipe.push_back({make_walk_scene(11, 2, cfg, 0.05), 2});
    recipe.push_back({make_fan_scene(12, 1, cfg, 0.05), 1});
    AdcFrameSet frames = build_dataset(recipe, cfg, 99);

    const auto path = temp_path("sim.radc");
    save_adc(path, frames);
    AdcFrameSet back = load_adc(path, cfg);
    CHECK(back.samples == frames.samples);
    CHECK(back.labels == frames.labels);
    CHECK(back.scene_seeds == frames.scene_seeds);
    CHECK(back.seed == 99);
    std::filesystem::remove(path);
}
