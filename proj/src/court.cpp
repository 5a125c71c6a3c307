#include "courtaug/court.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace courtaug {

Fraction parse_fraction(const std::string& text) {
    auto bad = [&] { throw std::invalid_argument("bad fraction: '" + text + "'"); };
    if (text.empty()) bad();
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            std::int64_t num = std::stoll(text.substr(0, slash));
            std::int64_t den = std::stoll(text.substr(slash + 1));
            if (den <= 0 || num < 0) bad();
            return {num, den};
        }
        // Decimal: scale by 10^digits so 0.2 stays exactly 2/10.
        auto dot = text.find('.');
        if (dot == std::string::npos) return {std::stoll(text), 1};
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::int64_t den = 1;
        for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
        if (den == 0) bad();
        std::int64_t num = std::stoll(digits);
        if (num < 0) bad();
        return {num, den};
    } catch (const std::logic_error&) {
        bad();
    }
    return {};  // unreachable
}

StaticBounds static_bounds(int width, int height, const CropParams& params) {
    StaticBounds b;
    b.min_h = int(params.h_min_frac.floor_scaled(height));
    b.max_h = int(params.h_max_frac.floor_scaled(height));
    b.min_w = int(params.w_min_frac.floor_scaled(width));
    b.max_w = int(params.w_max_frac.floor_scaled(width));
    if (b.min_h < 1 || b.min_w < 1 || b.min_h >= b.max_h || b.min_w >= b.max_w)
        throw std::invalid_argument("static_bounds: image below minimum size");
    return b;
}

namespace {

CropRect clamp_to_image(int x, int y, int w, int h, int img_w, int img_h) {
    x = std::clamp(x, 0, img_w - 1);
    y = std::clamp(y, 0, img_h - 1);
    w = std::clamp(w, 1, img_w - x);
    h = std::clamp(h, 1, img_h - y);
    return {x, y, w, h};
}

} // namespace

CourtDetection detect_court_debug(const ImageBuffer& img, const CropParams& params) {
    const int W = img.width, H = img.height;
    const StaticBounds sb = static_bounds(W, H, params);

    CourtDetection det;
    const ImageBuffer gray = img.channels == 3 ? to_grayscale(img) : img;
    const EdgeMap edges = canny(gray, params.canny_low, params.canny_high,
                                params.canny_sigma);
    const double min_len = params.min_len_frac * std::min(W, H);
    det.segments = hough_segments(edges, params.rho_res, params.theta_res,
                                  params.votes_min, min_len, params.max_gap);

    const CropRect fallback{sb.min_w, sb.min_h, sb.max_w - sb.min_w,
                            sb.max_h - sb.min_h};
    if (det.segments.size() < 2) {
        det.used_fallback = true;
        det.rect = fallback;
        return det;
    }

    std::vector<PointI> endpoints;
    endpoints.reserve(det.segments.size() * 2);
    for (const auto& s : det.segments) {
        endpoints.push_back(s.p0);
        endpoints.push_back(s.p1);
    }
    const ConvexHull hull = convex_hull(endpoints);
    if (hull.degenerate()) {
        det.used_fallback = true;
        det.rect = fallback;
        return det;
    }

    auto [dx, dy, dw, dh] = hull_bbox(hull);
    det.hull_x = dx;
    det.hull_y = dy;
    det.hull_w = dw;
    det.hull_h = dh;

    // The crop formula, verbatim: x = min(min_w, dx), y = max(min_h, dy) - 50,
    // w = max(min_w, dw), h = min(max_h, dh).
    const int ax = std::min(sb.min_w, dx);
    const int ay = std::max(sb.min_h, dy) - params.y_offset;
    const int aw = std::max(sb.min_w, dw);
    const int ah = std::min(sb.max_h, dh);

    if (params.mode == CropMode::AsWritten) {
        det.rect = clamp_to_image(ax, ay, aw, ah, W, H);
    } else {
        // Union with the hull bbox so the detected court is never cut off.
        const int ux = std::min(ax, dx);
        const int uy = std::min(ay, dy);
        const int ux1 = std::max(ax + aw, dx + dw);
        const int uy1 = std::max(ay + ah, dy + dh);
        det.rect = clamp_to_image(ux, uy, ux1 - ux, uy1 - uy, W, H);
    }
    return det;
}

CropRect detect_court(const ImageBuffer& img, const CropParams& params) {
    return detect_court_debug(img, params).rect;
}

CourtRegion split_regions(const CropRect& rect, double band_frac) {
    if (band_frac < 0.0 || band_frac > 1.0)
        throw std::invalid_argument("split_regions: band_frac outside [0,1]");

    CourtRegion region;
    region.rect = rect;
    region.band_frac = band_frac;

    // (w-2t)(h-2t) = (1-f)wh  =>  t = ((w+h) - sqrt((w+h)^2 - 4 f w h)) / 4
    const double w = rect.w, h = rect.h;
    const double disc = (w + h) * (w + h) - 4.0 * band_frac * w * h;
    const double t_real = ((w + h) - std::sqrt(std::max(0.0, disc))) / 4.0;
    int t = int(std::lround(t_real));
    t = std::min({t, rect.w / 2, rect.h / 2});
    t = std::max(t, 0);

    region.inset = t;
    region.interior = CropRect{rect.x + t, rect.y + t, rect.w - 2 * t, rect.h - 2 * t};
    if (band_frac >= 1.0)
        region.interior = CropRect{rect.x, rect.y, 0, 0};
    if (region.interior.empty())
        region.interior = CropRect{rect.x, rect.y, 0, 0};
    return region;
}

ImageBuffer crop_image(const ImageBuffer& img, const CropRect& rect) {
    if (rect.empty() || rect.x < 0 || rect.y < 0 ||
        rect.x + rect.w > img.width || rect.y + rect.h > img.height)
        throw std::invalid_argument("crop_image: rect out of bounds");

    ImageBuffer out(rect.w, rect.h, img.channels);
    const std::size_t row_bytes = std::size_t(rect.w) * img.channels;
    for (int v = 0; v < rect.h; ++v) {
        const std::uint8_t* src =
            img.data.data() +
            (std::size_t(rect.y + v) * img.width + rect.x) * img.channels;
        std::copy(src, src + row_bytes,
                  out.data.begin() + std::size_t(v) * row_bytes);
    }
    return out;
}

} // namespace courtaug
