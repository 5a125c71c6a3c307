#pragma once

#include <cstdint>
#include <vector>

namespace courtaug {

// Row-major interleaved 8-bit raster, 1 (gray) or 3 (RGB) channels.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    ImageBuffer() = default;
    ImageBuffer(int w, int h, int c, std::uint8_t fill = 0)
        : width(w), height(h), channels(c),
          data(std::size_t(w) * h * c, fill) {}

    std::uint8_t& at(int x, int y, int c = 0) {
        return data[(std::size_t(y) * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return data[(std::size_t(y) * width + x) * channels + c];
    }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
    std::size_t pixel_count() const { return std::size_t(width) * height; }

    friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;
};

// Per-pixel binary flags (one byte per pixel, values 0/1).
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(std::size_t(w) * h, fill) {}

    std::uint8_t get(int x, int y) const { return data[std::size_t(y) * width + x]; }
    void set(int x, int y, std::uint8_t v = 1) { data[std::size_t(y) * width + x] = v; }
    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }

    std::int64_t count() const {
        std::int64_t n = 0;
        for (auto v : data) n += v != 0;
        return n;
    }

    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

} // namespace courtaug
