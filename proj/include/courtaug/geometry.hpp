#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace courtaug {

struct PointI {
    int x = 0;
    int y = 0;
    friend bool operator==(const PointI&, const PointI&) = default;
};

struct PointD {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const PointD&, const PointD&) = default;
};

// Axis-aligned rectangle, top-left origin, y grows downward.
// Pipeline rects always have w,h >= 1; a w==0 or h==0 rect is the
// empty region (used for the degenerate court interior).
struct CropRect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    friend bool operator==(const CropRect&, const CropRect&) = default;

    bool empty() const { return w <= 0 || h <= 0; }
    std::int64_t area() const { return empty() ? 0 : std::int64_t(w) * h; }

    // Closed containment: boundary points belong to the rect.
    bool contains(PointD p) const {
        return !empty() && p.x >= x && p.x <= x + w && p.y >= y && p.y <= y + h;
    }
    // Open containment: boundary points do not count (the court band
    // claims the shared interior boundary).
    bool contains_open(PointD p) const {
        return !empty() && p.x > x && p.x < x + w && p.y > y && p.y < y + h;
    }

    bool contains_rect(const CropRect& r) const {
        return !empty() && !r.empty() && r.x >= x && r.y >= y &&
               r.x + r.w <= x + w && r.y + r.h <= y + h;
    }
};

// Exact rational fraction for the static crop bounds. Keeping these
// rational makes floor(frac * dim) exact (1/9 * 900 must be 100, not 99).
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    std::int64_t floor_scaled(std::int64_t v) const { return v * num / den; }
    double value() const { return double(num) / double(den); }
};

// Accepts "a/b" or a plain decimal ("0.2", "1").
Fraction parse_fraction(const std::string& text);

} // namespace courtaug
