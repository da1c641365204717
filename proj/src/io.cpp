#include "warplm/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace warplm {

namespace {

constexpr std::size_t kMaxVoxels = std::size_t{1} << 31;

void put_u32(std::ostream& os, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                                static_cast<unsigned char>((v >> 8) & 0xff),
                                static_cast<unsigned char>((v >> 16) & 0xff),
                                static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is, const std::string& path) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw io_error(path + ": truncated header");
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f32(std::ostream& os, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(os, bits);
}

Dims3 read_header(std::istream& is, const char* magic, const std::string& path) {
    char m[4];
    if (!is.read(m, 4) || std::memcmp(m, magic, 4) != 0) {
        throw io_error(path + ": bad magic (expected " + magic + ")");
    }
    Dims3 d;
    d.nx = static_cast<int>(get_u32(is, path));
    d.ny = static_cast<int>(get_u32(is, path));
    d.nz = static_cast<int>(get_u32(is, path));
    if (d.nx <= 0 || d.ny <= 0 || d.nz <= 0) throw io_error(path + ": non-positive dims");
    if (d.voxels() > kMaxVoxels) throw io_error(path + ": dims too large");
    return d;
}

void read_payload(std::istream& is, std::size_t count, std::vector<double>& out,
                  const std::string& path) {
    std::vector<unsigned char> buf(4 * count);
    if (!is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
        throw io_error(path + ": truncated payload");
    }
    out.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t bits = static_cast<std::uint32_t>(buf[4 * i]) |
                                   (static_cast<std::uint32_t>(buf[4 * i + 1]) << 8) |
                                   (static_cast<std::uint32_t>(buf[4 * i + 2]) << 16) |
                                   (static_cast<std::uint32_t>(buf[4 * i + 3]) << 24);
        float f;
        std::memcpy(&f, &bits, 4);
        if (!std::isfinite(f)) throw io_error(path + ": non-finite value in payload");
        out[i] = static_cast<double>(f);
    }
}

}  // namespace

Volume3 read_vol3(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error(path + ": cannot open");
    Volume3 vol;
    vol.dims = read_header(is, "VOL3", path);
    read_payload(is, vol.dims.voxels(), vol.data, path);
    return vol;
}

void write_vol3(const std::string& path, const Volume3& vol) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error(path + ": cannot open for writing");
    os.write("VOL3", 4);
    put_u32(os, static_cast<std::uint32_t>(vol.dims.nx));
    put_u32(os, static_cast<std::uint32_t>(vol.dims.ny));
    put_u32(os, static_cast<std::uint32_t>(vol.dims.nz));
    for (double v : vol.data) put_f32(os, static_cast<float>(v));
    if (!os) throw io_error(path + ": write failed");
}

DispField3 read_dsp3(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error(path + ": cannot open");
    DispField3 field;
    field.dims = read_header(is, "DSP3", path);
    read_payload(is, 3 * field.dims.voxels(), field.data, path);
    return field;
}

void write_dsp3(const std::string& path, const DispField3& field) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error(path + ": cannot open for writing");
    os.write("DSP3", 4);
    put_u32(os, static_cast<std::uint32_t>(field.dims.nx));
    put_u32(os, static_cast<std::uint32_t>(field.dims.ny));
    put_u32(os, static_cast<std::uint32_t>(field.dims.nz));
    for (double v : field.data) put_f32(os, static_cast<float>(v));
    if (!os) throw io_error(path + ": write failed");
}

}  // namespace warplm
