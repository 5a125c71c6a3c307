#pragma once

#include <numbers>

#include "courtaug/geometry.hpp"
#include "courtaug/image.hpp"
#include "courtaug/imgproc.hpp"

namespace courtaug {

enum class CropMode { AsWritten, HullUnion };

// Full parameterization of the court detector: the static bound
// fractions, the crop-formula vertical offset, and the Canny/Hough
// bundle feeding the hull.
struct CropParams {
    Fraction h_min_frac{1, 9};
    Fraction h_max_frac{8, 9};
    Fraction w_min_frac{1, 15};
    Fraction w_max_frac{14, 15};
    int y_offset = 50;
    CropMode mode = CropMode::AsWritten;

    double canny_sigma = 1.4;
    double canny_low = 50.0;
    double canny_high = 150.0;
    double rho_res = 1.0;
    double theta_res = std::numbers::pi / 180.0;
    int votes_min = 80;
    double min_len_frac = 0.1;  // of min(W, H)
    int max_gap = 10;
};

struct StaticBounds {
    int min_h = 0;
    int max_h = 0;
    int min_w = 0;
    int max_w = 0;
    friend bool operator==(const StaticBounds&, const StaticBounds&) = default;
};

// Detected court rect split into an interior core and the outer band
// covering band_frac of the rect's area (uniform inset, quadratic root).
struct CourtRegion {
    CropRect rect;
    double band_frac = 0.0;
    int inset = 0;
    CropRect interior;

    std::int64_t band_area() const { return rect.area() - interior.area(); }
    // The band owns the shared interior boundary, so interior membership
    // is open and band membership is its complement within the rect.
    bool in_interior(PointD p) const { return interior.contains_open(p); }
    bool in_band(PointD p) const { return rect.contains(p) && !in_interior(p); }
};

// floor(frac * dim) for the four bounds. Throws when the image is too
// small for the bounds to be ordered and positive.
StaticBounds static_bounds(int width, int height, const CropParams& params);

// Algorithm: gray -> canny -> hough segments -> hull of all endpoints ->
// bbox -> crop formula, clamped to the image. Falls back to the static
// bounds rect when fewer than 2 segments are found or the hull is
// degenerate.
CropRect detect_court(const ImageBuffer& img, const CropParams& params);

// Same, but also exposes the detected segments and hull bbox (CLI
// overlay and tests).
struct CourtDetection {
    CropRect rect;
    std::vector<LineSegment> segments;
    bool used_fallback = false;
    int hull_x = 0, hull_y = 0, hull_w = 0, hull_h = 0;
};
CourtDetection detect_court_debug(const ImageBuffer& img, const CropParams& params);

CourtRegion split_regions(const CropRect& rect, double band_frac);

ImageBuffer crop_image(const ImageBuffer& img, const CropRect& rect);

} // namespace courtaug
