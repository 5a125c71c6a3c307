#include "courtaug/draw.hpp"

#include <algorithm>
#include <cmath>

namespace courtaug {

namespace {

void put(ImageBuffer& img, int x, int y, const std::array<std::uint8_t, 3>& color) {
    if (!img.in_bounds(x, y)) return;
    for (int c = 0; c < img.channels; ++c) img.at(x, y, c) = color[std::size_t(c) % 3];
}

void put_brush(ImageBuffer& img, int x, int y,
               const std::array<std::uint8_t, 3>& color, int thickness) {
    const int r = thickness / 2;
    for (int dy = -r; dy <= thickness - 1 - r; ++dy)
        for (int dx = -r; dx <= thickness - 1 - r; ++dx)
            put(img, x + dx, y + dy, color);
}

} // namespace

void fill_rect(ImageBuffer& img, const CropRect& rect,
               const std::array<std::uint8_t, 3>& color) {
    const int x0 = std::max(0, rect.x), y0 = std::max(0, rect.y);
    const int x1 = std::min(img.width, rect.x + rect.w);
    const int y1 = std::min(img.height, rect.y + rect.h);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) put(img, x, y, color);
}

void draw_rect_outline(ImageBuffer& img, const CropRect& rect,
                       const std::array<std::uint8_t, 3>& color, int thickness) {
    draw_line(img, {rect.x, rect.y}, {rect.x + rect.w - 1, rect.y}, color, thickness);
    draw_line(img, {rect.x + rect.w - 1, rect.y},
              {rect.x + rect.w - 1, rect.y + rect.h - 1}, color, thickness);
    draw_line(img, {rect.x + rect.w - 1, rect.y + rect.h - 1},
              {rect.x, rect.y + rect.h - 1}, color, thickness);
    draw_line(img, {rect.x, rect.y + rect.h - 1}, {rect.x, rect.y}, color, thickness);
}

void draw_line(ImageBuffer& img, PointI p0, PointI p1,
               const std::array<std::uint8_t, 3>& color, int thickness) {
    int dx = std::abs(p1.x - p0.x), sx = p0.x < p1.x ? 1 : -1;
    int dy = -std::abs(p1.y - p0.y), sy = p0.y < p1.y ? 1 : -1;
    int err = dx + dy;
    int x = p0.x, y = p0.y;
    for (;;) {
        put_brush(img, x, y, color, thickness);
        if (x == p1.x && y == p1.y) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
}

} // namespace courtaug
