#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "courtaug/image.hpp"

namespace courtaug {

// Minimal PNG codec (8-bit, no interlace). Encodes gray / RGB exactly as
// stored; decodes gray, gray+alpha, RGB and RGBA (alpha is dropped).
// DEFLATE and CRC32 come from zlib, so identical pixels always produce
// identical bytes.
std::vector<std::uint8_t> png_encode(const ImageBuffer& img);
ImageBuffer png_decode(const std::uint8_t* bytes, std::size_t size);
ImageBuffer png_decode(const std::vector<std::uint8_t>& bytes);

ImageBuffer load_png(const std::string& path);
void save_png(const std::string& path, const ImageBuffer& img);

} // namespace courtaug
