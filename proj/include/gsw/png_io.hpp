#pragma once

#include <string>

#include "gsw/renderer.hpp"

namespace gsw {

// 8-bit RGB PNG with round-half-up quantization of the [0,1] image values.
// Deterministic bytes for identical images. Throws gsw::Error with path
// context on I/O or encoding failure.
void write_png(const FrameImage& img, const std::string& path);

// Reads the subset of PNG this project writes (8-bit RGB, non-interlaced;
// any standard scanline filter). Values returned as byte/255.
FrameImage read_png(const std::string& path);

}  // namespace gsw
