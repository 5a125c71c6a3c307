#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "courtaug/geometry.hpp"
#include "courtaug/image.hpp"

namespace courtaug::coco {

// COCO-convention RLE: column-major runs, first run counts zeros.
struct RleMask {
    int height = 0;
    int width = 0;
    std::vector<std::int64_t> counts;
    friend bool operator==(const RleMask&, const RleMask&) = default;
};

// Either a list of flat [x0,y0,x1,y1,...] polygons or an RLE mask.
struct Segmentation {
    std::vector<std::vector<double>> polygons;
    std::optional<RleMask> rle;

    bool is_rle() const { return rle.has_value(); }
    friend bool operator==(const Segmentation&, const Segmentation&) = default;
};

struct CocoImage {
    std::int64_t id = 0;
    std::string file_name;
    int width = 0;
    int height = 0;
    friend bool operator==(const CocoImage&, const CocoImage&) = default;
};

struct CocoCategory {
    int id = 0;
    std::string name;
    friend bool operator==(const CocoCategory&, const CocoCategory&) = default;
};

struct CocoAnnotation {
    std::int64_t id = 0;
    std::int64_t image_id = 0;
    int category_id = 0;
    Segmentation segmentation;
    std::array<double, 4> bbox{0, 0, 0, 0};
    double area = 0.0;
    int iscrowd = 0;
    // Set on pasted instances: "player" | "official" | "ball".
    std::optional<std::string> sub_identity;
    friend bool operator==(const CocoAnnotation&, const CocoAnnotation&) = default;
};

struct CocoDataset {
    std::vector<CocoImage> images;
    std::vector<CocoAnnotation> annotations;
    std::vector<CocoCategory> categories;

    const CocoImage* find_image(std::int64_t id) const;
    const CocoCategory* find_category(int id) const;
    friend bool operator==(const CocoDataset&, const CocoDataset&) = default;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses a COCO detection-format document and checks referential
// integrity (unique ids, resolvable image_id/category_id, even polygon
// lengths). Accepts both integer-list and compressed-string RLE counts.
CocoDataset parse_coco(const std::string& text);

// Deterministic serialization: fixed field order, bbox/area/polygon
// floats rounded to 2 decimals, RLE always as integer counts.
std::string serialize_coco(const CocoDataset& ds);

struct Finding {
    std::string code;
    std::string message;
};

// Runs every dataset invariant and reports findings instead of throwing.
std::vector<Finding> validate_dataset(const CocoDataset& ds);

// |shoelace| / 2. Throws for fewer than 3 points.
double polygon_area(const std::vector<double>& poly);

// Sutherland-Hodgman against the rect's four half-planes. Returns an
// empty list when disjoint, else a single clipped ring.
std::vector<std::vector<double>> clip_polygon(const std::vector<double>& poly,
                                              const CropRect& rect);

// Clips to rect, translates into the crop frame, recomputes bbox/area.
// Returns nothing when the clipped area falls below min_area. RLE
// segmentations are cropped via rasterize -> window -> re-encode.
std::optional<CocoAnnotation> transform_under_crop(const CocoAnnotation& ann,
                                                   const CropRect& rect,
                                                   double min_area);

// Inverse of the crop translation for ROI-frame geometry. Throws when
// the geometry exceeds [0,rect.w] x [0,rect.h].
std::array<double, 4> project_back_bbox(const std::array<double, 4>& bbox,
                                        const CropRect& rect);
std::vector<double> project_back_polygon(const std::vector<double>& poly,
                                         const CropRect& rect);
CocoAnnotation project_back_annotation(const CocoAnnotation& ann,
                                       const CropRect& rect, int orig_width,
                                       int orig_height);

RleMask rle_encode(const BinaryMask& mask);
BinaryMask rle_decode(const RleMask& rle);

// Even-odd scanline fill sampled at pixel centers; multiple polygons OR
// together (COCO union semantics).
BinaryMask rasterize_polygons(const std::vector<std::vector<double>>& polygons,
                              int width, int height);
BinaryMask rasterize_segmentation(const Segmentation& seg, int width, int height);

// Tight axis-aligned box of a polygon list as (x, y, w, h).
std::array<double, 4> tight_bbox(const std::vector<std::vector<double>>& polygons);

} // namespace courtaug::coco
