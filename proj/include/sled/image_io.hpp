#pragma once

#include <string>

#include "sled/image.hpp"

namespace sled {

/// Decodes an 8-bit PNG or JPEG file into an RgbImage with channels scaled to
/// [0,1]. Grayscale, palette, and alpha variants are expanded/stripped to RGB.
/// Throws IoError if the file cannot be read, DecodeError on corrupt or
/// unsupported content.
RgbImage load_image(const std::string& path);

void save_png(const std::string& path, const RgbImage& img);
/// Mask PNGs are 8-bit grayscale with values {0,255}.
void save_png(const std::string& path, const Mask& mask);
/// Score maps export as 8-bit grayscale, round(score*255).
void save_png(const std::string& path, const ScoreMap& map);

void save_jpeg(const std::string& path, const RgbImage& img, int quality = 95);

} // namespace sled
