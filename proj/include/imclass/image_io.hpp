#pragma once

#include <string>

#include "imclass/image.hpp"

namespace imclass {

// Decodes an 8-bit RGB image from a PNG or JPEG file (chosen by content,
// falling back to the extension). Alpha is stripped, other depths rejected.
RasterImage load_image(const std::string& path);

void save_png(const std::string& path, const RasterImage& img);

void save_jpeg(const std::string& path, const RasterImage& img, int quality = 92);

}  // namespace imclass
