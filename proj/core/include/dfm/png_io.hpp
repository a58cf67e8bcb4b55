#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dfm/raster.hpp"

namespace dfm {

// 8-bit single-channel PNG, no palette. Throws IoError with the path on
// any failure.
void write_png_gray(const std::string& path, int width, int height,
                    const std::vector<uint8_t>& pixels);
std::vector<uint8_t> read_png_gray(const std::string& path, int& width, int& height);

void write_raster_png(const std::string& path, const Raster& raster);
Raster read_raster_png(const std::string& path);

}  // namespace dfm
