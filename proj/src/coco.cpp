#include "courtaug/coco.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace courtaug::coco {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

// cocoapi compressed RLE string: 5-bit groups, LSB first, delta-coded
// from the count two positions back.
std::vector<std::int64_t> decode_rle_string(const std::string& s) {
    std::vector<std::int64_t> counts;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::int64_t x = 0;
        int k = 0;
        bool more = true;
        while (more) {
            if (pos >= s.size()) throw ParseError("truncated RLE counts string");
            int c = s[pos++] - 48;
            x |= std::int64_t(c & 0x1f) << (5 * k);
            more = (c & 0x20) != 0;
            ++k;
        }
        if (k * 5 < 64 && (x >> (5 * k - 1)) & 1)
            x |= -1LL << (5 * k);  // sign-extend
        if (counts.size() > 2) x += counts[counts.size() - 2];
        counts.push_back(x);
    }
    return counts;
}

const json& require(const json& obj, const char* key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(ctx + ": missing field '" + key + "'");
    return *it;
}

} // namespace

const CocoImage* CocoDataset::find_image(std::int64_t id) const {
    for (const auto& im : images)
        if (im.id == id) return &im;
    return nullptr;
}

const CocoCategory* CocoDataset::find_category(int id) const {
    for (const auto& c : categories)
        if (c.id == id) return &c;
    return nullptr;
}

CocoDataset parse_coco(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object())
        throw ParseError("malformed document: top level is not an object");

    CocoDataset ds;
    for (const auto& j : doc.value("images", json::array())) {
        CocoImage im;
        im.id = require(j, "id", "image").get<std::int64_t>();
        const std::string ctx = "image " + std::to_string(im.id);
        im.file_name = require(j, "file_name", ctx).get<std::string>();
        im.width = require(j, "width", ctx).get<int>();
        im.height = require(j, "height", ctx).get<int>();
        if (im.width < 1 || im.height < 1)
            throw ParseError(ctx + ": non-positive dimensions");
        ds.images.push_back(std::move(im));
    }
    for (const auto& j : doc.value("categories", json::array())) {
        CocoCategory cat;
        cat.id = require(j, "id", "category").get<int>();
        cat.name = require(j, "name", "category " + std::to_string(cat.id)).get<std::string>();
        ds.categories.push_back(std::move(cat));
    }
    for (const auto& j : doc.value("annotations", json::array())) {
        CocoAnnotation ann;
        ann.id = require(j, "id", "annotation").get<std::int64_t>();
        const std::string ctx = "annotation " + std::to_string(ann.id);
        ann.image_id = require(j, "image_id", ctx).get<std::int64_t>();
        ann.category_id = require(j, "category_id", ctx).get<int>();
        const json& bbox = require(j, "bbox", ctx);
        if (!bbox.is_array() || bbox.size() != 4)
            throw ParseError(ctx + ": bbox must have 4 entries");
        for (int i = 0; i < 4; ++i) ann.bbox[i] = bbox[i].get<double>();
        ann.area = require(j, "area", ctx).get<double>();
        if (auto it = j.find("iscrowd"); it != j.end())
            ann.iscrowd = it->is_boolean() ? int(it->get<bool>()) : it->get<int>();
        if (auto it = j.find("sub_identity"); it != j.end())
            ann.sub_identity = it->get<std::string>();

        const json& seg = require(j, "segmentation", ctx);
        if (seg.is_array()) {
            for (const auto& poly : seg) {
                if (!poly.is_array())
                    throw ParseError(ctx + ": polygon is not an array");
                std::vector<double> flat;
                flat.reserve(poly.size());
                for (const auto& v : poly) flat.push_back(v.get<double>());
                if (flat.size() < 6 || flat.size() % 2 != 0)
                    throw ParseError(ctx + ": polygon needs an even count of >= 6 values");
                ann.segmentation.polygons.push_back(std::move(flat));
            }
        } else if (seg.is_object()) {
            RleMask rle;
            const json& size = require(seg, "size", ctx + " RLE");
            if (!size.is_array() || size.size() != 2)
                throw ParseError(ctx + ": RLE size must be [h, w]");
            rle.height = size[0].get<int>();
            rle.width = size[1].get<int>();
            const json& counts = require(seg, "counts", ctx + " RLE");
            if (counts.is_string()) {
                rle.counts = decode_rle_string(counts.get<std::string>());
            } else if (counts.is_array()) {
                for (const auto& c : counts) rle.counts.push_back(c.get<std::int64_t>());
            } else {
                throw ParseError(ctx + ": RLE counts must be a list or string");
            }
            std::int64_t sum = 0;
            for (auto c : rle.counts) {
                if (c < 0) throw ParseError(ctx + ": negative RLE count");
                sum += c;
            }
            if (sum != std::int64_t(rle.height) * rle.width)
                throw ParseError(ctx + ": RLE counts do not sum to height*width");
            ann.segmentation.rle = std::move(rle);
        } else {
            throw ParseError(ctx + ": segmentation must be polygons or RLE");
        }
        ds.annotations.push_back(std::move(ann));
    }

    // Referential integrity.
    std::unordered_set<std::int64_t> image_ids;
    for (const auto& im : ds.images)
        if (!image_ids.insert(im.id).second)
            throw ParseError("duplicate image id " + std::to_string(im.id));
    std::unordered_set<int> category_ids;
    for (const auto& c : ds.categories)
        if (!category_ids.insert(c.id).second)
            throw ParseError("duplicate category id " + std::to_string(c.id));
    std::unordered_set<std::int64_t> ann_ids;
    for (const auto& a : ds.annotations) {
        if (!ann_ids.insert(a.id).second)
            throw ParseError("duplicate annotation id " + std::to_string(a.id));
        if (!image_ids.count(a.image_id))
            throw ParseError("annotation " + std::to_string(a.id) +
                             ": image_id " + std::to_string(a.image_id) +
                             " not found");
        if (!category_ids.count(a.category_id))
            throw ParseError("annotation " + std::to_string(a.id) +
                             ": category_id " + std::to_string(a.category_id) +
                             " not found");
    }
    return ds;
}

std::string serialize_coco(const CocoDataset& ds) {
    ordered_json doc;
    doc["images"] = ordered_json::array();
    for (const auto& im : ds.images) {
        ordered_json j;
        j["id"] = im.id;
        j["file_name"] = im.file_name;
        j["width"] = im.width;
        j["height"] = im.height;
        doc["images"].push_back(std::move(j));
    }
    doc["annotations"] = ordered_json::array();
    for (const auto& a : ds.annotations) {
        ordered_json j;
        j["id"] = a.id;
        j["image_id"] = a.image_id;
        j["category_id"] = a.category_id;
        if (a.segmentation.is_rle()) {
            const RleMask& rle = *a.segmentation.rle;
            j["segmentation"] = {{"size", {rle.height, rle.width}},
                                 {"counts", rle.counts}};
        } else {
            ordered_json polys = ordered_json::array();
            for (const auto& poly : a.segmentation.polygons) {
                ordered_json flat = ordered_json::array();
                for (double v : poly) flat.push_back(round2(v));
                polys.push_back(std::move(flat));
            }
            j["segmentation"] = std::move(polys);
        }
        j["bbox"] = {round2(a.bbox[0]), round2(a.bbox[1]), round2(a.bbox[2]),
                     round2(a.bbox[3])};
        j["area"] = round2(a.area);
        j["iscrowd"] = a.iscrowd;
        if (a.sub_identity) j["sub_identity"] = *a.sub_identity;
        doc["annotations"].push_back(std::move(j));
    }
    doc["categories"] = ordered_json::array();
    for (const auto& c : ds.categories) {
        ordered_json j;
        j["id"] = c.id;
        j["name"] = c.name;
        doc["categories"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

double polygon_area(const std::vector<double>& poly) {
    if (poly.size() < 6 || poly.size() % 2 != 0)
        throw std::invalid_argument("polygon_area: need >= 3 (x,y) points");
    const std::size_t n = poly.size() / 2;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = (i + 1) % n;
        sum += poly[2 * i] * poly[2 * k + 1] - poly[2 * k] * poly[2 * i + 1];
    }
    return std::abs(sum) / 2.0;
}

std::vector<std::vector<double>> clip_polygon(const std::vector<double>& poly,
                                              const CropRect& rect) {
    if (poly.size() < 6 || poly.size() % 2 != 0)
        throw std::invalid_argument("clip_polygon: need >= 3 (x,y) points");

    struct Pt {
        double x, y;
    };
    std::vector<Pt> ring;
    for (std::size_t i = 0; i < poly.size(); i += 2)
        ring.push_back({poly[i], poly[i + 1]});

    // inside(p) per half-plane; 0: x>=x0, 1: x<=x1, 2: y>=y0, 3: y<=y1
    const double x0 = rect.x, x1 = rect.x + rect.w;
    const double y0 = rect.y, y1 = rect.y + rect.h;
    for (int side = 0; side < 4 && !ring.empty(); ++side) {
        auto inside = [&](Pt p) {
            switch (side) {
                case 0: return p.x >= x0;
                case 1: return p.x <= x1;
                case 2: return p.y >= y0;
                default: return p.y <= y1;
            }
        };
        auto intersect = [&](Pt a, Pt b) -> Pt {
            double t;
            switch (side) {
                case 0: t = (x0 - a.x) / (b.x - a.x); return {x0, a.y + t * (b.y - a.y)};
                case 1: t = (x1 - a.x) / (b.x - a.x); return {x1, a.y + t * (b.y - a.y)};
                case 2: t = (y0 - a.y) / (b.y - a.y); return {a.x + t * (b.x - a.x), y0};
                default: t = (y1 - a.y) / (b.y - a.y); return {a.x + t * (b.x - a.x), y1};
            }
        };
        std::vector<Pt> next;
        for (std::size_t i = 0; i < ring.size(); ++i) {
            Pt cur = ring[i];
            Pt prev = ring[(i + ring.size() - 1) % ring.size()];
            bool cur_in = inside(cur), prev_in = inside(prev);
            if (cur_in) {
                if (!prev_in) next.push_back(intersect(prev, cur));
                next.push_back(cur);
            } else if (prev_in) {
                next.push_back(intersect(prev, cur));
            }
        }
        ring = std::move(next);
    }

    // Drop consecutive duplicates and degenerate output.
    std::vector<double> flat;
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Pt& p = ring[i];
        const Pt& q = ring[(i + 1) % ring.size()];
        if (std::abs(p.x - q.x) < 1e-12 && std::abs(p.y - q.y) < 1e-12) continue;
        flat.push_back(p.x);
        flat.push_back(p.y);
    }
    if (flat.size() < 6 || polygon_area(flat) < 1e-9) return {};
    return {flat};
}

std::array<double, 4> tight_bbox(const std::vector<std::vector<double>>& polygons) {
    double min_x = std::numeric_limits<double>::max(), min_y = min_x;
    double max_x = std::numeric_limits<double>::lowest(), max_y = max_x;
    for (const auto& poly : polygons)
        for (std::size_t i = 0; i + 1 < poly.size(); i += 2) {
            min_x = std::min(min_x, poly[i]);
            max_x = std::max(max_x, poly[i]);
            min_y = std::min(min_y, poly[i + 1]);
            max_y = std::max(max_y, poly[i + 1]);
        }
    if (min_x > max_x) return {0, 0, 0, 0};
    return {min_x, min_y, max_x - min_x, max_y - min_y};
}

namespace {

std::array<double, 4> mask_tight_bbox(const BinaryMask& mask) {
    int min_x = mask.width, min_y = mask.height, max_x = -1, max_y = -1;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.get(x, y)) {
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
            }
    if (max_x < 0) return {0, 0, 0, 0};
    return {double(min_x), double(min_y), double(max_x + 1 - min_x),
            double(max_y + 1 - min_y)};
}

} // namespace

std::optional<CocoAnnotation> transform_under_crop(const CocoAnnotation& ann,
                                                   const CropRect& rect,
                                                   double min_area) {
    CocoAnnotation out = ann;
    if (ann.segmentation.is_rle()) {
        const RleMask& rle = *ann.segmentation.rle;
        BinaryMask full = rle_decode(rle);
        BinaryMask cropped(rect.w, rect.h);
        for (int y = 0; y < rect.h; ++y)
            for (int x = 0; x < rect.w; ++x) {
                int sx = rect.x + x, sy = rect.y + y;
                if (sx < full.width && sy < full.height && full.get(sx, sy))
                    cropped.set(x, y);
            }
        const double area = double(cropped.count());
        if (area <= 0.0 || area < min_area) return std::nullopt;
        out.segmentation.rle = rle_encode(cropped);
        out.area = area;
        out.bbox = mask_tight_bbox(cropped);
        return out;
    }

    std::vector<std::vector<double>> clipped;
    for (const auto& poly : ann.segmentation.polygons)
        for (auto& piece : clip_polygon(poly, rect))
            clipped.push_back(std::move(piece));
    if (clipped.empty()) return std::nullopt;

    double area = 0.0;
    for (auto& poly : clipped) {
        for (std::size_t i = 0; i < poly.size(); i += 2) {
            poly[i] -= rect.x;
            poly[i + 1] -= rect.y;
        }
        area += polygon_area(poly);
    }
    if (area < min_area) return std::nullopt;
    out.segmentation.polygons = std::move(clipped);
    out.segmentation.rle.reset();
    out.area = area;
    out.bbox = tight_bbox(out.segmentation.polygons);
    return out;
}

std::array<double, 4> project_back_bbox(const std::array<double, 4>& bbox,
                                        const CropRect& rect) {
    if (bbox[0] < 0 || bbox[1] < 0 || bbox[0] + bbox[2] > rect.w ||
        bbox[1] + bbox[3] > rect.h)
        throw std::invalid_argument("project_back: bbox exceeds ROI bounds");
    return {bbox[0] + rect.x, bbox[1] + rect.y, bbox[2], bbox[3]};
}

std::vector<double> project_back_polygon(const std::vector<double>& poly,
                                         const CropRect& rect) {
    std::vector<double> out = poly;
    for (std::size_t i = 0; i + 1 < out.size(); i += 2) {
        if (out[i] < 0 || out[i] > rect.w || out[i + 1] < 0 || out[i + 1] > rect.h)
            throw std::invalid_argument("project_back: polygon exceeds ROI bounds");
        out[i] += rect.x;
        out[i + 1] += rect.y;
    }
    return out;
}

CocoAnnotation project_back_annotation(const CocoAnnotation& ann,
                                       const CropRect& rect, int orig_width,
                                       int orig_height) {
    CocoAnnotation out = ann;
    out.bbox = project_back_bbox(ann.bbox, rect);
    if (ann.segmentation.is_rle()) {
        BinaryMask roi = rle_decode(*ann.segmentation.rle);
        BinaryMask full(orig_width, orig_height);
        for (int y = 0; y < roi.height; ++y)
            for (int x = 0; x < roi.width; ++x)
                if (roi.get(x, y)) full.set(rect.x + x, rect.y + y);
        out.segmentation.rle = rle_encode(full);
    } else {
        out.segmentation.polygons.clear();
        for (const auto& poly : ann.segmentation.polygons)
            out.segmentation.polygons.push_back(project_back_polygon(poly, rect));
    }
    return out;
}

RleMask rle_encode(const BinaryMask& mask) {
    if (mask.width < 1 || mask.height < 1)
        throw std::invalid_argument("rle_encode: empty mask");
    RleMask rle;
    rle.height = mask.height;
    rle.width = mask.width;
    std::uint8_t expect = 0;
    std::int64_t run = 0;
    for (int x = 0; x < mask.width; ++x)
        for (int y = 0; y < mask.height; ++y) {
            std::uint8_t v = mask.get(x, y) ? 1 : 0;
            if (v == expect) {
                ++run;
            } else {
                rle.counts.push_back(run);
                expect = v;
                run = 1;
            }
        }
    rle.counts.push_back(run);
    return rle;
}

BinaryMask rle_decode(const RleMask& rle) {
    std::int64_t total = 0;
    for (auto c : rle.counts) {
        if (c < 0) throw std::invalid_argument("rle_decode: negative count");
        total += c;
    }
    if (total != std::int64_t(rle.height) * rle.width)
        throw std::invalid_argument("rle_decode: counts do not sum to height*width");

    BinaryMask mask(rle.width, rle.height);
    std::int64_t pos = 0;
    std::uint8_t value = 0;
    for (auto c : rle.counts) {
        if (value)
            for (std::int64_t i = pos; i < pos + c; ++i)
                mask.set(int(i / rle.height), int(i % rle.height));
        pos += c;
        value ^= 1;
    }
    return mask;
}

BinaryMask rasterize_polygons(const std::vector<std::vector<double>>& polygons,
                              int width, int height) {
    BinaryMask mask(width, height);
    std::vector<double> xs;
    for (const auto& poly : polygons) {
        const std::size_t n = poly.size() / 2;
        if (n < 3) continue;
        double min_y = poly[1], max_y = poly[1];
        for (std::size_t i = 0; i < n; ++i) {
            min_y = std::min(min_y, poly[2 * i + 1]);
            max_y = std::max(max_y, poly[2 * i + 1]);
        }
        int y_lo = std::max(0, int(std::floor(min_y - 0.5)));
        int y_hi = std::min(height - 1, int(std::ceil(max_y)));
        for (int y = y_lo; y <= y_hi; ++y) {
            const double py = y + 0.5;
            xs.clear();
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t k = (i + 1) % n;
                double ya = poly[2 * i + 1], yb = poly[2 * k + 1];
                if ((ya <= py && yb > py) || (yb <= py && ya > py)) {
                    double t = (py - ya) / (yb - ya);
                    xs.push_back(poly[2 * i] + t * (poly[2 * k] - poly[2 * i]));
                }
            }
            std::sort(xs.begin(), xs.end());
            for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
                // pixels whose center x+0.5 lies in [xs[i], xs[i+1])
                int x_lo = std::max(0, int(std::ceil(xs[i] - 0.5)));
                int x_hi = std::min(width, int(std::ceil(xs[i + 1] - 0.5)));
                for (int x = x_lo; x < x_hi; ++x) mask.set(x, y);
            }
        }
    }
    return mask;
}

BinaryMask rasterize_segmentation(const Segmentation& seg, int width, int height) {
    if (seg.is_rle()) {
        BinaryMask full = rle_decode(*seg.rle);
        if (full.width == width && full.height == height) return full;
        BinaryMask out(width, height);
        for (int y = 0; y < std::min(height, full.height); ++y)
            for (int x = 0; x < std::min(width, full.width); ++x)
                if (full.get(x, y)) out.set(x, y);
        return out;
    }
    return rasterize_polygons(seg.polygons, width, height);
}

std::vector<Finding> validate_dataset(const CocoDataset& ds) {
    std::vector<Finding> findings;
    auto add = [&](std::string code, std::string msg) {
        findings.push_back({std::move(code), std::move(msg)});
    };

    std::unordered_map<std::int64_t, const CocoImage*> images;
    for (const auto& im : ds.images) {
        if (!images.emplace(im.id, &im).second)
            add("duplicate-image-id", "image id " + std::to_string(im.id) + " appears twice");
        if (im.width < 1 || im.height < 1)
            add("bad-image-dims", "image " + std::to_string(im.id) + " has non-positive dims");
    }
    std::unordered_set<int> categories;
    for (const auto& c : ds.categories)
        if (!categories.insert(c.id).second)
            add("duplicate-category-id", "category id " + std::to_string(c.id) + " appears twice");

    std::unordered_set<std::int64_t> ann_ids;
    for (const auto& a : ds.annotations) {
        const std::string ctx = "annotation " + std::to_string(a.id);
        if (!ann_ids.insert(a.id).second)
            add("duplicate-annotation-id", ctx + " id appears twice");
        if (!images.count(a.image_id))
            add("dangling-image-id", ctx + " references missing image_id " +
                                         std::to_string(a.image_id));
        if (!categories.count(a.category_id))
            add("dangling-category-id", ctx + " references missing category_id " +
                                            std::to_string(a.category_id));
        if (a.area <= 0.0) add("non-positive-area", ctx + " has area <= 0");

        double measured = 0.0;
        bool have_measure = false;
        if (a.segmentation.is_rle()) {
            const RleMask& rle = *a.segmentation.rle;
            std::int64_t sum = 0;
            bool neg = false, zero_interior = false;
            for (std::size_t i = 0; i < rle.counts.size(); ++i) {
                if (rle.counts[i] < 0) neg = true;
                if (i > 0 && rle.counts[i] == 0 && i + 1 < rle.counts.size())
                    zero_interior = true;
                sum += rle.counts[i];
                if (i % 2 == 1) measured += double(rle.counts[i]);
            }
            have_measure = true;
            if (neg) add("rle-negative-count", ctx + " RLE has a negative count");
            if (zero_interior) add("rle-non-canonical", ctx + " RLE has zero-length interior runs");
            if (sum != std::int64_t(rle.height) * rle.width)
                add("rle-sum-mismatch", ctx + " RLE counts do not sum to height*width");
        } else {
            if (a.segmentation.polygons.empty())
                add("empty-segmentation", ctx + " has no polygons");
            for (const auto& poly : a.segmentation.polygons) {
                if (poly.size() < 6 || poly.size() % 2 != 0) {
                    add("bad-polygon", ctx + " has a polygon with an odd or short value list");
                } else {
                    measured += polygon_area(poly);
                    have_measure = true;
                }
            }
        }

        // bbox must enclose the segmentation (serialization rounds to 2
        // decimals, hence the 0.011 slack).
        const double tol = 0.011;
        if (!a.segmentation.is_rle()) {
            bool outside = false;
            for (const auto& poly : a.segmentation.polygons)
                for (std::size_t i = 0; i + 1 < poly.size(); i += 2)
                    outside = outside ||
                              poly[i] < a.bbox[0] - tol ||
                              poly[i] > a.bbox[0] + a.bbox[2] + tol ||
                              poly[i + 1] < a.bbox[1] - tol ||
                              poly[i + 1] > a.bbox[1] + a.bbox[3] + tol;
            if (outside)
                add("bbox-mismatch", ctx + " bbox does not enclose its segmentation");
        } else if (a.segmentation.rle->counts.size() > 1) {
            BinaryMask mask = rle_decode(*a.segmentation.rle);
            auto mb = mask_tight_bbox(mask);
            if (mb[0] < a.bbox[0] - tol || mb[1] < a.bbox[1] - tol ||
                mb[0] + mb[2] > a.bbox[0] + a.bbox[2] + tol + 1.0 ||
                mb[1] + mb[3] > a.bbox[1] + a.bbox[3] + tol + 1.0)
                add("bbox-mismatch", ctx + " bbox does not enclose its RLE mask");
        }
        if (have_measure && a.area > 0.0) {
            double slack = std::max(0.05 * measured, 5.0);
            if (std::abs(a.area - measured) > slack)
                add("area-mismatch", ctx + " recorded area " + std::to_string(a.area) +
                                         " deviates from measured " + std::to_string(measured));
        }
    }
    return findings;
}

} // namespace courtaug::coco
