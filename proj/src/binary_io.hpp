#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "errors.hpp"

// Little-endian primitives shared by the RADC / RDIF / AEWT file formats.
// Truncation while reading is a FormatError (malformed file); stream failures
// while writing are IoErrors.
namespace radar_ood::io {

inline void write_bytes(std::ostream& os, const void* data, std::size_t n) {
    os.write(static_cast<const char*>(data), std::streamsize(n));
    if (!os) throw IoError("write failed");
}

inline void read_bytes(std::istream& is, void* data, std::size_t n) {
    is.read(static_cast<char*>(data), std::streamsize(n));
    if (std::size_t(is.gcount()) != n)
        throw FormatError("unexpected end of file");
}

inline void write_u8(std::ostream& os, std::uint8_t v) { write_bytes(os, &v, 1); }

inline void write_u16(std::ostream& os, std::uint16_t v) {
    const unsigned char buf[2] = {static_cast<unsigned char>(v & 0xff),
                                  static_cast<unsigned char>(v >> 8)};
    write_bytes(os, buf, 2);
}

inline void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    write_bytes(os, buf, 4);
}

inline void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    write_bytes(os, buf, 8);
}

inline void write_f32(std::ostream& os, float v) {
    write_u32(os, std::bit_cast<std::uint32_t>(v));
}

inline std::uint8_t read_u8(std::istream& is) {
    std::uint8_t v = 0;
    read_bytes(is, &v, 1);
    return v;
}

inline std::uint16_t read_u16(std::istream& is) {
    unsigned char buf[2];
    read_bytes(is, buf, 2);
    return std::uint16_t(buf[0] | (std::uint16_t(buf[1]) << 8));
}

inline std::uint32_t read_u32(std::istream& is) {
    unsigned char buf[4];
    read_bytes(is, buf, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(buf[i]) << (8 * i);
    return v;
}

inline std::uint64_t read_u64(std::istream& is) {
    unsigned char buf[8];
    read_bytes(is, buf, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[i]) << (8 * i);
    return v;
}

inline float read_f32(std::istream& is) {
    return std::bit_cast<float>(read_u32(is));
}

inline void write_magic(std::ostream& os, const char (&magic)[5]) {
    write_bytes(os, magic, 4);
}

inline void expect_magic(std::istream& is, const char (&magic)[5],
                         const std::string& what) {
    char buf[4];
    read_bytes(is, buf, 4);
    for (int i = 0; i < 4; ++i)
        if (buf[i] != magic[i])
            throw FormatError(what + ": bad magic, expected \"" + magic + "\"");
}

inline void expect_version(std::istream& is, std::uint16_t expected,
                           const std::string& what) {
    const std::uint16_t v = read_u16(is);
    if (v != expected)
        throw FormatError(what + ": unsupported version " + std::to_string(v));
}

} // namespace radar_ood::io
