#include "courtaug/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "courtaug/rng.hpp"

namespace courtaug {

namespace {

std::uint8_t clamp_byte(double v) {
    return std::uint8_t(std::clamp(std::lround(v), 0L, 255L));
}

} // namespace

double LineSegment::length() const {
    return std::hypot(double(p1.x - p0.x), double(p1.y - p0.y));
}

bool ConvexHull::contains(PointD p) const {
    if (vertices.empty()) return false;
    if (vertices.size() == 1)
        return p.x == vertices[0].x && p.y == vertices[0].y;
    if (vertices.size() == 2) {
        // Degenerate hull: point must lie on the segment.
        double cross = (vertices[1].x - vertices[0].x) * (p.y - vertices[0].y) -
                       (vertices[1].y - vertices[0].y) * (p.x - vertices[0].x);
        if (std::abs(cross) > 1e-9) return false;
        double dot = (p.x - vertices[0].x) * (vertices[1].x - vertices[0].x) +
                     (p.y - vertices[0].y) * (vertices[1].y - vertices[0].y);
        double len2 = double(vertices[1].x - vertices[0].x) * (vertices[1].x - vertices[0].x) +
                      double(vertices[1].y - vertices[0].y) * (vertices[1].y - vertices[0].y);
        return dot >= 0 && dot <= len2;
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const PointI& a = vertices[i];
        const PointI& b = vertices[(i + 1) % vertices.size()];
        double cross = double(b.x - a.x) * (p.y - a.y) - double(b.y - a.y) * (p.x - a.x);
        if (cross < -1e-9) return false;
    }
    return true;
}

ImageBuffer to_grayscale(const ImageBuffer& img) {
    if (img.channels != 3)
        throw std::invalid_argument("to_grayscale: expected 3-channel image");
    ImageBuffer out(img.width, img.height, 1);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double luma = 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) +
                          0.114 * img.at(x, y, 2);
            out.at(x, y) = clamp_byte(luma);
        }
    return out;
}

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
    if (sigma <= 0.0)
        throw std::invalid_argument("gaussian_blur: sigma must be > 0");
    if (img.channels != 1)
        throw std::invalid_argument("gaussian_blur: expected 1-channel image");

    const int radius = int(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-double(i) * i / (2.0 * sigma * sigma));
        sum += kernel[i + radius];
    }
    for (auto& k : kernel) k /= sum;

    const int w = img.width, h = img.height;
    auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi); };

    // Horizontal pass in float, vertical pass, one rounding at the end.
    std::vector<float> tmp(std::size_t(w) * h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * img.at(clampi(x + i, w - 1), y);
            tmp[std::size_t(y) * w + x] = float(acc);
        }
    ImageBuffer out(w, h, 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * tmp[std::size_t(clampi(y + i, h - 1)) * w + x];
            out.at(x, y) = clamp_byte(acc);
        }
    return out;
}

std::vector<float> sobel_magnitude(const ImageBuffer& gray) {
    const int w = gray.width, h = gray.height;
    std::vector<float> mag(std::size_t(w) * h, 0.0f);
    for (int y = 1; y + 1 < h; ++y)
        for (int x = 1; x + 1 < w; ++x) {
            int gx = -gray.at(x - 1, y - 1) + gray.at(x + 1, y - 1)
                     - 2 * gray.at(x - 1, y) + 2 * gray.at(x + 1, y)
                     - gray.at(x - 1, y + 1) + gray.at(x + 1, y + 1);
            int gy = -gray.at(x - 1, y - 1) - 2 * gray.at(x, y - 1) - gray.at(x + 1, y - 1)
                     + gray.at(x - 1, y + 1) + 2 * gray.at(x, y + 1) + gray.at(x + 1, y + 1);
            mag[std::size_t(y) * w + x] = float(std::hypot(double(gx), double(gy)));
        }
    return mag;
}

EdgeMap canny(const ImageBuffer& gray, double low, double high, double sigma) {
    if (gray.channels != 1)
        throw std::invalid_argument("canny: expected 1-channel image");
    if (!(low > 0.0) || low >= high)
        throw std::invalid_argument("canny: need 0 < low < high");
    if (gray.width < 3 || gray.height < 3)
        throw std::invalid_argument("canny: image smaller than 3x3");

    const ImageBuffer smoothed = sigma > 0.0 ? gaussian_blur(gray, sigma) : gray;
    const int w = gray.width, h = gray.height;

    std::vector<float> gxv(std::size_t(w) * h, 0.0f), gyv(std::size_t(w) * h, 0.0f);
    std::vector<float> mag(std::size_t(w) * h, 0.0f);
    for (int y = 1; y + 1 < h; ++y)
        for (int x = 1; x + 1 < w; ++x) {
            int gx = -smoothed.at(x - 1, y - 1) + smoothed.at(x + 1, y - 1)
                     - 2 * smoothed.at(x - 1, y) + 2 * smoothed.at(x + 1, y)
                     - smoothed.at(x - 1, y + 1) + smoothed.at(x + 1, y + 1);
            int gy = -smoothed.at(x - 1, y - 1) - 2 * smoothed.at(x, y - 1) - smoothed.at(x + 1, y - 1)
                     + smoothed.at(x - 1, y + 1) + 2 * smoothed.at(x, y + 1) + smoothed.at(x + 1, y + 1);
            std::size_t i = std::size_t(y) * w + x;
            gxv[i] = float(gx);
            gyv[i] = float(gy);
            mag[i] = float(std::hypot(double(gx), double(gy)));
        }

    // Non-maximum suppression along the quantized gradient direction.
    // Ties keep the pixel on the negative side of the axis, so a
    // perfectly symmetric step still yields a 1-px edge.
    BinaryMask candidate(w, h);
    for (int y = 1; y + 1 < h; ++y)
        for (int x = 1; x + 1 < w; ++x) {
            std::size_t i = std::size_t(y) * w + x;
            float m = mag[i];
            if (m < float(low)) continue;
            double ang = std::atan2(double(gyv[i]), double(gxv[i])) * 180.0 / std::numbers::pi;
            if (ang < 0) ang += 180.0;
            // bins: 0 = horizontal gradient, 45 = down-right, 90 = vertical,
            // 135 = down-left (y grows downward)
            float before, after;
            if (ang < 22.5 || ang >= 157.5) {
                before = mag[i - 1];
                after = mag[i + 1];
            } else if (ang < 67.5) {
                before = mag[i - std::size_t(w) - 1];
                after = mag[i + std::size_t(w) + 1];
            } else if (ang < 112.5) {
                before = mag[i - std::size_t(w)];
                after = mag[i + std::size_t(w)];
            } else {
                before = mag[i - std::size_t(w) + 1];
                after = mag[i + std::size_t(w) - 1];
            }
            if (m > before && m >= after) candidate.set(x, y);
        }

    // Hysteresis: flood from strong seeds across weak candidates.
    EdgeMap out(w, h);
    std::vector<PointI> stack;
    for (int y = 1; y + 1 < h; ++y)
        for (int x = 1; x + 1 < w; ++x) {
            std::size_t i = std::size_t(y) * w + x;
            if (!candidate.get(x, y) || mag[i] < float(high) || out.get(x, y))
                continue;
            out.set(x, y);
            stack.push_back({x, y});
            while (!stack.empty()) {
                PointI p = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = p.x + dx, ny = p.y + dy;
                        if (!out.in_bounds(nx, ny) || out.get(nx, ny)) continue;
                        if (!candidate.get(nx, ny)) continue;
                        out.set(nx, ny);
                        stack.push_back({nx, ny});
                    }
            }
        }
    return out;
}

namespace {

LineSegment make_segment(PointI p0, PointI p1) {
    LineSegment s;
    s.p0 = p0;
    s.p1 = p1;
    double theta = std::atan2(double(p1.y - p0.y), double(p1.x - p0.x)) +
                   std::numbers::pi / 2.0;
    while (theta < 0) theta += std::numbers::pi;
    while (theta >= std::numbers::pi) theta -= std::numbers::pi;
    s.theta = theta;
    s.rho = p0.x * std::cos(theta) + p0.y * std::sin(theta);
    return s;
}

} // namespace

std::vector<LineSegment> hough_segments(const EdgeMap& edges, double rho_res,
                                        double theta_res, int votes_min,
                                        double min_len, int max_gap) {
    if (rho_res <= 0.0 || theta_res <= 0.0)
        throw std::invalid_argument("hough_segments: resolutions must be > 0");
    if (votes_min < 1)
        throw std::invalid_argument("hough_segments: votes_min must be >= 1");

    std::vector<LineSegment> out;
    const int w = edges.width, h = edges.height;
    if (w <= 0 || h <= 0) return out;

    const int numangle = std::max(1, int(std::lround(std::numbers::pi / theta_res)));
    const int numrho = int(std::lround(((w + h) * 2 + 1) / rho_res));

    std::vector<float> ttab(std::size_t(numangle) * 2);
    for (int n = 0; n < numangle; ++n) {
        ttab[n * 2] = float(std::cos(n * theta_res) / rho_res);
        ttab[n * 2 + 1] = float(std::sin(n * theta_res) / rho_res);
    }

    std::vector<int> accum(std::size_t(numangle) * numrho, 0);
    BinaryMask mask(w, h);
    std::vector<PointI> points;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (edges.get(x, y)) {
                mask.set(x, y);
                points.push_back({x, y});
            }

    // Fixed-seed stream keeps the op pure while preserving the
    // randomized processing order the progressive variant relies on.
    Rng rng(0xC0FFEEULL);

    for (std::size_t remaining = points.size(); remaining > 0; --remaining) {
        std::size_t idx = rng.uniform_u32(std::uint32_t(remaining));
        PointI seed = points[idx];
        points[idx] = points[remaining - 1];

        if (!mask.get(seed.x, seed.y)) continue;  // consumed by an earlier line

        // Vote, tracking the best angle for this point.
        int max_val = votes_min - 1, max_n = 0;
        for (int n = 0; n < numangle; ++n) {
            int r = int(std::lround(seed.x * ttab[n * 2] + seed.y * ttab[n * 2 + 1]));
            r += (numrho - 1) / 2;
            int val = ++accum[std::size_t(n) * numrho + r];
            if (val > max_val) {
                max_val = val;
                max_n = n;
            }
        }
        if (max_val < votes_min) continue;

        // Walk both directions along the winning angle with fixed-point
        // stepping, tolerating gaps up to max_gap.
        const int shift = 16;
        float a = -ttab[max_n * 2 + 1] * float(rho_res);  // -sin(theta)
        float b = ttab[max_n * 2] * float(rho_res);       //  cos(theta)
        int x0 = seed.x, y0 = seed.y, dx0, dy0;
        bool xflag = std::fabs(a) > std::fabs(b);
        if (xflag) {
            dx0 = a > 0 ? 1 : -1;
            dy0 = int(std::lround(b * (1 << shift) / std::fabs(a)));
            y0 = (y0 << shift) + (1 << (shift - 1));
        } else {
            dy0 = b > 0 ? 1 : -1;
            dx0 = int(std::lround(a * (1 << shift) / std::fabs(b)));
            x0 = (x0 << shift) + (1 << (shift - 1));
        }

        PointI line_end[2] = {seed, seed};
        for (int k = 0; k < 2; ++k) {
            int gap = 0, x = x0, y = y0;
            int dx = k ? -dx0 : dx0, dy = k ? -dy0 : dy0;
            for (;; x += dx, y += dy) {
                int px = xflag ? x : (x >> shift);
                int py = xflag ? (y >> shift) : y;
                if (px < 0 || px >= w || py < 0 || py >= h) break;
                if (mask.get(px, py)) {
                    gap = 0;
                    line_end[k] = {px, py};
                } else if (++gap > max_gap) {
                    break;
                }
            }
        }

        double len = std::hypot(double(line_end[1].x - line_end[0].x),
                                double(line_end[1].y - line_end[0].y));
        bool good = len >= min_len && line_end[0] != line_end[1];

        // Second pass: consume walked pixels; un-vote them for good lines.
        for (int k = 0; k < 2; ++k) {
            int x = x0, y = y0;
            int dx = k ? -dx0 : dx0, dy = k ? -dy0 : dy0;
            for (;; x += dx, y += dy) {
                int px = xflag ? x : (x >> shift);
                int py = xflag ? (y >> shift) : y;
                if (px < 0 || px >= w || py < 0 || py >= h) break;
                if (mask.get(px, py)) {
                    if (good) {
                        for (int n = 0; n < numangle; ++n) {
                            int r = int(std::lround(px * ttab[n * 2] + py * ttab[n * 2 + 1]));
                            r += (numrho - 1) / 2;
                            --accum[std::size_t(n) * numrho + r];
                        }
                    }
                    mask.set(px, py, 0);
                }
                if (px == line_end[k].x && py == line_end[k].y) break;
            }
        }

        if (good) out.push_back(make_segment(line_end[0], line_end[1]));
    }
    return out;
}

namespace {

std::int64_t cross(PointI o, PointI a, PointI b) {
    return std::int64_t(a.x - o.x) * (b.y - o.y) -
           std::int64_t(a.y - o.y) * (b.x - o.x);
}

} // namespace

ConvexHull convex_hull(std::vector<PointI> points) {
    if (points.empty())
        throw std::invalid_argument("convex_hull: empty point set");

    std::sort(points.begin(), points.end(), [](PointI a, PointI b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());

    ConvexHull hull;
    const std::size_t n = points.size();
    if (n <= 2) {
        hull.vertices = points;
        return hull;
    }

    // Monotone chain; strict turns only, so collinear points drop out.
    std::vector<PointI> ring(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(ring[k - 2], ring[k - 1], points[i]) <= 0) --k;
        ring[k++] = points[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(ring[k - 2], ring[k - 1], points[i]) <= 0) --k;
        ring[k++] = points[i];
    }
    ring.resize(k - 1);
    hull.vertices = std::move(ring);
    return hull;
}

std::tuple<int, int, int, int> hull_bbox(const ConvexHull& hull) {
    if (hull.degenerate())
        throw std::invalid_argument("hull_bbox: degenerate hull");
    int min_x = hull.vertices[0].x, max_x = min_x;
    int min_y = hull.vertices[0].y, max_y = min_y;
    for (const auto& p : hull.vertices) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    return {min_x, min_y, max_x - min_x, max_y - min_y};
}

} // namespace courtaug
