#pragma once

#include <tuple>
#include <vector>

#include "courtaug/geometry.hpp"
#include "courtaug/image.hpp"

namespace courtaug {

using EdgeMap = BinaryMask;

// Hough segment with its endpoints and the normal form of the carrying
// line: rho = x*cos(theta) + y*sin(theta), theta in [0, pi), rho signed.
struct LineSegment {
    PointI p0;
    PointI p1;
    double theta = 0.0;
    double rho = 0.0;

    double length() const;
};

struct ConvexHull {
    // Counter-clockwise in the Cartesian sense, strictly convex
    // (collinear boundary points excluded).
    std::vector<PointI> vertices;

    bool degenerate() const { return vertices.size() < 3; }
    bool contains(PointD p) const;
};

// BT.601 luma, round-to-nearest. Input must be 3-channel.
ImageBuffer to_grayscale(const ImageBuffer& img);

// Separable Gaussian, kernel radius ceil(3*sigma), replicated borders,
// float accumulation with a single final rounding. Input must be gray.
ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma);

// Raw Sobel 3x3 L2 magnitude. The 1-px frame is set to 0.
std::vector<float> sobel_magnitude(const ImageBuffer& gray);

// Blur (if sigma > 0), Sobel, 4-bin non-maximum suppression, hysteresis
// (seeds >= high, 8-connected growth over pixels >= low).
EdgeMap canny(const ImageBuffer& gray, double low, double high, double sigma);

// Progressive probabilistic Hough transform. Pixels consumed by an
// emitted or rejected candidate stop voting; segments shorter than
// min_len (Euclidean) are dropped; runs split at gaps > max_gap.
// Deterministic: the point-processing order comes from a fixed-seed
// internal stream, so equal inputs give byte-equal outputs.
std::vector<LineSegment> hough_segments(const EdgeMap& edges, double rho_res,
                                        double theta_res, int votes_min,
                                        double min_len, int max_gap);

// Monotone-chain hull over the distinct input points.
ConvexHull convex_hull(std::vector<PointI> points);

// Tightest axis-aligned box: (min_x, min_y, max_x - min_x, max_y - min_y).
// Throws for hulls with fewer than 2 distinct points.
std::tuple<int, int, int, int> hull_bbox(const ConvexHull& hull);

} // namespace courtaug
