#pragma once

#include <array>

#include "courtaug/geometry.hpp"
#include "courtaug/image.hpp"

namespace courtaug {

// Small raster helpers for synthetic inputs and the CLI overlay.

void fill_rect(ImageBuffer& img, const CropRect& rect,
               const std::array<std::uint8_t, 3>& color);

void draw_rect_outline(ImageBuffer& img, const CropRect& rect,
                       const std::array<std::uint8_t, 3>& color,
                       int thickness = 1);

// Bresenham with a square brush of the given thickness.
void draw_line(ImageBuffer& img, PointI p0, PointI p1,
               const std::array<std::uint8_t, 3>& color, int thickness = 1);

} // namespace courtaug
