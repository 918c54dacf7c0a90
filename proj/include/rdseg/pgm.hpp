#pragma once

#include <cstdint>
#include <filesystem>

#include "rdseg/grid.hpp"

namespace rdseg {

using GrayImage = Field<std::uint8_t>;

/// Reads binary (P5) or ASCII (P2) PGM with maxval <= 255.
GrayImage read_pgm(const std::filesystem::path& path);

/// Writes binary P5 with maxval 255.
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

/// raw / 255 into [0, 1].
ScalarField to_unit(const GrayImage& img);

/// round(255 * clamp(x, 0, 1)).
GrayImage from_unit(const ScalarField& x);

/// 0/1 mask to 0/255 image, and back (nonzero -> 1).
GrayImage mask_to_image(const Field<std::uint8_t>& mask);
Field<std::uint8_t> image_to_mask(const GrayImage& img);

}  // namespace rdseg
