#pragma once

#include <stdexcept>
#include <string>

#include "warplm/field.hpp"

namespace warplm {

/// Malformed or unreadable VOL3/DSP3 input.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Binary formats, little-endian throughout:
//   VOL3: magic "VOL3", nx ny nz as u32, then nx*ny*nz float32 values, x-fastest.
//   DSP3: magic "DSP3", same header, then 3*n float32 values, component-innermost.
Volume3 read_vol3(const std::string& path);
void write_vol3(const std::string& path, const Volume3& vol);
DispField3 read_dsp3(const std::string& path);
void write_dsp3(const std::string& path, const DispField3& field);

}  // namespace warplm
