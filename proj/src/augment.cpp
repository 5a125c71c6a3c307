#include "courtaug/augment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace courtaug {

namespace {

std::uint8_t clamp_byte(double v) {
    return std::uint8_t(std::clamp(std::lround(v), 0L, 255L));
}

std::string lower(std::string s) {
    for (auto& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool is_ball_category(const std::string& name) {
    return name.find("ball") != std::string::npos;
}

bool is_person_category(const std::string& name) {
    return name == "person" || name == "people" || name == "player" ||
           name == "players" || name == "human";
}

} // namespace

const char* identity_label(Identity id) {
    switch (id) {
        case Identity::Player: return "player";
        case Identity::Official: return "official";
        default: return "ball";
    }
}

Identity assign_identity(const coco::CocoAnnotation& ann,
                         const CourtRegion& region,
                         const std::string& category_name) {
    const std::string name = lower(category_name);
    if (is_ball_category(name)) return Identity::Ball;
    if (!is_person_category(name))
        throw std::invalid_argument("assign_identity: unknown category '" +
                                    category_name + "'");
    const PointD anchor{ann.bbox[0] + ann.bbox[2] / 2.0, ann.bbox[1] + ann.bbox[3]};
    return region.in_interior(anchor) ? Identity::Player : Identity::Official;
}

namespace {

std::array<std::uint8_t, 256> build_lut(const CurvePoints& curve) {
    if (curve.size() < 2)
        throw std::invalid_argument("rgb_curve: need at least 2 control points");
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (curve[i].first <= curve[i - 1].first)
            throw std::invalid_argument("rgb_curve: control inputs must increase");
        if (curve[i].second < curve[i - 1].second)
            throw std::invalid_argument("rgb_curve: curve must be monotone");
    }
    std::array<std::uint8_t, 256> lut{};
    for (int v = 0; v < 256; ++v) {
        double out;
        if (v <= curve.front().first) {
            out = curve.front().second;
        } else if (v >= curve.back().first) {
            out = curve.back().second;
        } else {
            std::size_t k = 1;
            while (curve[k].first < v) ++k;
            const auto& [xa, ya] = curve[k - 1];
            const auto& [xb, yb] = curve[k];
            out = ya + (yb - ya) * (v - xa) / (xb - xa);
        }
        lut[v] = clamp_byte(out);
    }
    return lut;
}

} // namespace

ImageBuffer rgb_curve(const ImageBuffer& img,
                      const std::array<CurvePoints, 3>& curves) {
    std::array<std::array<std::uint8_t, 256>, 3> luts;
    for (int c = 0; c < img.channels; ++c) luts[c] = build_lut(curves[c]);

    ImageBuffer out = img;
    std::size_t i = 0;
    for (std::size_t p = 0; p < img.pixel_count(); ++p)
        for (int c = 0; c < img.channels; ++c, ++i)
            out.data[i] = luts[c][img.data[i]];
    return out;
}

namespace {

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
    double mx = std::max({r, g, b}), mn = std::min({r, g, b});
    v = mx;
    double d = mx - mn;
    s = mx == 0.0 ? 0.0 : d / mx;
    if (d == 0.0) {
        h = 0.0;
    } else if (mx == r) {
        h = 60.0 * std::fmod((g - b) / d + 6.0, 6.0);
    } else if (mx == g) {
        h = 60.0 * ((b - r) / d + 2.0);
    } else {
        h = 60.0 * ((r - g) / d + 4.0);
    }
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
    double hh = std::fmod(std::fmod(h, 360.0) + 360.0, 360.0) / 60.0;
    int i = int(hh) % 6;
    double f = hh - std::floor(hh);
    double p = v * (1.0 - s);
    double q = v * (1.0 - s * f);
    double t = v * (1.0 - s * (1.0 - f));
    switch (i) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
}

} // namespace

ImageBuffer hue_shift(const ImageBuffer& img, double degrees) {
    if (img.channels != 3)
        throw std::invalid_argument("hue_shift: expected 3-channel image");
    ImageBuffer out = img;
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        std::size_t i = p * 3;
        double h, s, v, r, g, b;
        rgb_to_hsv(img.data[i], img.data[i + 1], img.data[i + 2], h, s, v);
        hsv_to_rgb(h + degrees, s, v, r, g, b);
        out.data[i] = clamp_byte(r);
        out.data[i + 1] = clamp_byte(g);
        out.data[i + 2] = clamp_byte(b);
    }
    return out;
}

ImageBuffer salt_pepper(const ImageBuffer& img, double density, Rng& rng) {
    if (density < 0.0 || density > 1.0)
        throw std::invalid_argument("salt_pepper: density outside [0,1]");
    ImageBuffer out = img;
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        if (rng.next_double() >= density) continue;
        std::uint8_t v = rng.next_double() < 0.5 ? 0 : 255;
        for (int c = 0; c < img.channels; ++c) out.data[p * img.channels + c] = v;
    }
    return out;
}

ImageBuffer brightness(const ImageBuffer& img, double factor) {
    if (factor <= 0.0)
        throw std::invalid_argument("brightness: factor must be > 0");
    std::array<std::uint8_t, 256> lut;
    for (int v = 0; v < 256; ++v) lut[v] = clamp_byte(v * factor);
    ImageBuffer out = img;
    for (auto& v : out.data) v = lut[v];
    return out;
}

ImageBuffer grid_mask(const ImageBuffer& img, int unit, double ratio, Rng& rng) {
    if (unit < 2) throw std::invalid_argument("grid_mask: unit must be >= 2");
    if (ratio < 0.0 || ratio >= 1.0)
        throw std::invalid_argument("grid_mask: ratio outside [0,1)");
    const int side = int(std::lround(unit * ratio));
    const int ox = int(rng.uniform_u32(std::uint32_t(unit)));
    const int oy = int(rng.uniform_u32(std::uint32_t(unit)));
    ImageBuffer out = img;
    if (side == 0) return out;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if ((x + ox) % unit < side && (y + oy) % unit < side)
                for (int c = 0; c < img.channels; ++c) out.at(x, y, c) = 114;
    return out;
}

namespace {

std::array<CurvePoints, 3> sample_curves(Rng& rng, const StyleParams& params) {
    const int k = std::max(2, params.curve_points);
    std::array<CurvePoints, 3> curves;
    for (auto& curve : curves) {
        std::vector<double> outs(k);
        curve.resize(k);
        for (int i = 0; i < k; ++i) {
            double in = 255.0 * i / (k - 1);
            curve[i].first = in;
            outs[i] = std::clamp(
                in + rng.uniform_real(-params.curve_jitter, params.curve_jitter),
                0.0, 255.0);
        }
        std::sort(outs.begin(), outs.end());  // enforce monotone
        for (int i = 0; i < k; ++i) curve[i].second = outs[i];
    }
    return curves;
}

} // namespace

InstancePatch apply_style(const InstancePatch& patch, Rng& rng,
                          const StyleParams& params) {
    ImageBuffer styled;
    if (patch.identity == Identity::Player) {
        styled = rgb_curve(patch.pixels, sample_curves(rng, params));
        double deg = rng.uniform_real(-params.hue_max_deg, params.hue_max_deg);
        if (patch.pixels.channels == 3) styled = hue_shift(styled, deg);
    } else {
        double density = rng.uniform_real(params.sp_density_min, params.sp_density_max);
        double factor = rng.uniform_real(params.brightness_min, params.brightness_max);
        styled = brightness(salt_pepper(patch.pixels, density, rng), factor);
    }

    InstancePatch out = patch;
    for (int y = 0; y < patch.pixels.height; ++y)
        for (int x = 0; x < patch.pixels.width; ++x)
            if (patch.mask.get(x, y))
                for (int c = 0; c < patch.pixels.channels; ++c)
                    out.pixels.at(x, y, c) = styled.at(x, y, c);
    return out;
}

InstancePatch scale_patch(const InstancePatch& patch, double factor) {
    if (factor <= 0.0)
        throw std::invalid_argument("scale_patch: factor must be > 0");
    const int sw = patch.pixels.width, sh = patch.pixels.height;
    const int dw = std::max(1, int(std::lround(sw * factor)));
    const int dh = std::max(1, int(std::lround(sh * factor)));
    const double fx = double(sw) / dw, fy = double(sh) / dh;

    InstancePatch out = patch;
    out.pixels = ImageBuffer(dw, dh, patch.pixels.channels);
    out.mask = BinaryMask(dw, dh);
    for (int y = 0; y < dh; ++y)
        for (int x = 0; x < dw; ++x) {
            int sx = std::min(sw - 1, int((x + 0.5) * fx));
            int sy = std::min(sh - 1, int((y + 0.5) * fy));
            for (int c = 0; c < patch.pixels.channels; ++c)
                out.pixels.at(x, y, c) = patch.pixels.at(sx, sy, c);
            if (patch.mask.get(sx, sy)) out.mask.set(x, y);
        }

    const double rx = double(dw) / sw, ry = double(dh) / sh;
    if (out.seg_local.is_rle()) {
        out.seg_local.rle = coco::rle_encode(out.mask);
    } else {
        for (auto& poly : out.seg_local.polygons)
            for (std::size_t i = 0; i + 1 < poly.size(); i += 2) {
                poly[i] *= rx;
                poly[i + 1] *= ry;
            }
    }
    return out;
}

std::vector<InstancePatch> extract_instances(
    const coco::CocoDataset& ds, const ImageLoader& loader,
    const std::unordered_map<std::int64_t, CourtRegion>& regions,
    double min_area) {
    std::vector<InstancePatch> pool;

    for (const auto& im : ds.images) {
        auto region_it = regions.find(im.id);
        if (region_it == regions.end()) continue;

        std::vector<const coco::CocoAnnotation*> anns;
        for (const auto& a : ds.annotations)
            if (a.image_id == im.id && !a.iscrowd) anns.push_back(&a);
        if (anns.empty()) continue;
        std::sort(anns.begin(), anns.end(),
                  [](auto* a, auto* b) { return a->id < b->id; });

        const ImageBuffer img = loader(im);

        for (const auto* ann : anns) {
            int pw = std::max(1, int(std::lround(ann->bbox[2])));
            int ph = std::max(1, int(std::lround(ann->bbox[3])));
            pw = std::min(pw, img.width);
            ph = std::min(ph, img.height);
            int px = std::clamp(int(std::lround(ann->bbox[0])), 0, img.width - pw);
            int py = std::clamp(int(std::lround(ann->bbox[1])), 0, img.height - ph);

            InstancePatch patch;
            patch.pixels = crop_image(img, {px, py, pw, ph});
            if (ann->segmentation.is_rle()) {
                BinaryMask full = coco::rle_decode(*ann->segmentation.rle);
                patch.mask = BinaryMask(pw, ph);
                for (int y = 0; y < ph; ++y)
                    for (int x = 0; x < pw; ++x)
                        if (full.in_bounds(px + x, py + y) && full.get(px + x, py + y))
                            patch.mask.set(x, y);
                patch.seg_local.rle = coco::rle_encode(patch.mask);
            } else {
                // Clip into the patch window so pasted polygons can never
                // leave the destination image.
                for (const auto& poly : ann->segmentation.polygons) {
                    std::vector<double> local = poly;
                    for (std::size_t i = 0; i + 1 < local.size(); i += 2) {
                        local[i] -= px;
                        local[i + 1] -= py;
                    }
                    for (auto& piece : coco::clip_polygon(local, {0, 0, pw, ph}))
                        patch.seg_local.polygons.push_back(std::move(piece));
                }
                if (patch.seg_local.polygons.empty()) continue;
                patch.mask = coco::rasterize_polygons(patch.seg_local.polygons, pw, ph);
            }
            if (double(patch.mask.count()) < std::max(1.0, min_area)) continue;

            const auto* cat = ds.find_category(ann->category_id);
            patch.identity = assign_identity(*ann, region_it->second,
                                             cat ? cat->name : "");
            patch.source_image_id = im.id;
            patch.source_annotation_id = ann->id;
            patch.category_id = ann->category_id;
            pool.push_back(std::move(patch));
        }
    }
    return pool;
}

namespace {

PointD sample_in_rect(const CropRect& r, Rng& rng) {
    return {rng.uniform_real(r.x, r.x + r.w), rng.uniform_real(r.y, r.y + r.h)};
}

// Area-weighted draw over the band's four strips.
PointD sample_in_band(const CourtRegion& region, Rng& rng) {
    const CropRect& r = region.rect;
    const CropRect& in = region.interior;
    if (in.empty()) return sample_in_rect(r, rng);

    const int top_h = in.y - r.y;
    const int bot_h = (r.y + r.h) - (in.y + in.h);
    CropRect strips[4] = {
        {r.x, r.y, r.w, top_h},                       // top
        {r.x, in.y + in.h, r.w, bot_h},               // bottom
        {r.x, in.y, in.x - r.x, in.h},                // left
        {in.x + in.w, in.y, (r.x + r.w) - (in.x + in.w), in.h},  // right
    };
    double total = 0.0;
    for (const auto& s : strips) total += double(s.area());
    if (total <= 0.0) return sample_in_rect(r, rng);
    double pick = rng.next_double() * total;
    for (const auto& s : strips) {
        if (s.area() <= 0) continue;
        if (pick < double(s.area())) return sample_in_rect(s, rng);
        pick -= double(s.area());
    }
    return sample_in_rect(strips[3].area() > 0 ? strips[3] : r, rng);
}

} // namespace

std::optional<PointI> sample_paste_location(Identity identity,
                                            const CourtRegion& region,
                                            int patch_w, int patch_h,
                                            int img_w, int img_h, Rng& rng) {
    const bool wants_interior = identity != Identity::Official;
    if (wants_interior && region.interior.empty()) return std::nullopt;
    if (!wants_interior && region.band_area() <= 0) return std::nullopt;

    for (int attempt = 0; attempt < 50; ++attempt) {
        PointD anchor = wants_interior ? sample_in_rect(region.interior, rng)
                                       : sample_in_band(region, rng);
        PointI loc{int(std::lround(anchor.x - patch_w / 2.0)),
                   int(std::lround(anchor.y - patch_h))};
        if (loc.x < 0 || loc.y < 0 || loc.x + patch_w > img_w ||
            loc.y + patch_h > img_h)
            continue;
        // The integer placement shifts the anchor by up to half a pixel;
        // re-check membership so the recorded annotation stays legal.
        PointD placed{loc.x + patch_w / 2.0, double(loc.y + patch_h)};
        if (wants_interior ? region.in_interior(placed) : region.in_band(placed))
            return loc;
    }
    return std::nullopt;
}

namespace {

std::array<double, 4> mask_bbox(const BinaryMask& mask) {
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

void paste_instance(ImageBuffer& img, std::vector<coco::CocoAnnotation>& anns,
                    const InstancePatch& patch, PointI loc,
                    std::int64_t image_id, const PasteOptions& opts) {
    const int pw = patch.pixels.width, ph = patch.pixels.height;
    if (loc.x < 0 || loc.y < 0 || loc.x + pw > img.width || loc.y + ph > img.height)
        throw std::invalid_argument("paste_instance: patch out of bounds");
    if (patch.pixels.channels != img.channels)
        throw std::invalid_argument("paste_instance: channel mismatch");

    // Masked pixels overwrite; with feathering the mask border blends 50/50.
    for (int y = 0; y < ph; ++y)
        for (int x = 0; x < pw; ++x) {
            if (!patch.mask.get(x, y)) continue;
            bool border = false;
            if (opts.feather) {
                border = x == 0 || y == 0 || x == pw - 1 || y == ph - 1 ||
                         !patch.mask.get(x - 1, y) || !patch.mask.get(x + 1, y) ||
                         !patch.mask.get(x, y - 1) || !patch.mask.get(x, y + 1);
            }
            for (int c = 0; c < img.channels; ++c) {
                std::uint8_t src = patch.pixels.at(x, y, c);
                std::uint8_t& dst = img.at(loc.x + x, loc.y + y, c);
                dst = border ? std::uint8_t((int(src) + int(dst) + 1) / 2) : src;
            }
        }

    // Subtract the pasted mask from everything underneath.
    std::vector<coco::CocoAnnotation> survivors;
    survivors.reserve(anns.size() + 1);
    std::int64_t max_id = 0;
    for (auto& ann : anns) {
        max_id = std::max(max_id, ann.id);
        const bool bbox_overlap =
            ann.bbox[0] < loc.x + pw && ann.bbox[0] + ann.bbox[2] > loc.x &&
            ann.bbox[1] < loc.y + ph && ann.bbox[1] + ann.bbox[3] > loc.y;
        if (!bbox_overlap) {
            survivors.push_back(std::move(ann));
            continue;
        }
        BinaryMask mask = coco::rasterize_segmentation(ann.segmentation,
                                                       img.width, img.height);
        std::int64_t overlap = 0;
        for (int y = 0; y < ph; ++y)
            for (int x = 0; x < pw; ++x)
                if (patch.mask.get(x, y) && mask.get(loc.x + x, loc.y + y)) {
                    mask.set(loc.x + x, loc.y + y, 0);
                    ++overlap;
                }
        if (overlap == 0) {
            survivors.push_back(std::move(ann));
            continue;
        }
        const std::int64_t visible = mask.count();
        if (double(visible) < opts.visibility_min * ann.area || visible == 0)
            continue;  // fully or almost fully occluded
        coco::CocoAnnotation updated = std::move(ann);
        updated.segmentation.polygons.clear();
        updated.segmentation.rle = coco::rle_encode(mask);
        updated.area = double(visible);
        updated.bbox = mask_bbox(mask);
        survivors.push_back(std::move(updated));
    }

    // Append the pasted instance, frontmost by construction.
    coco::CocoAnnotation pasted;
    pasted.id = max_id + 1;
    pasted.image_id = image_id;
    pasted.category_id = patch.category_id;
    pasted.iscrowd = 0;
    pasted.sub_identity = identity_label(patch.identity);
    if (patch.seg_local.is_rle()) {
        BinaryMask full(img.width, img.height);
        for (int y = 0; y < ph; ++y)
            for (int x = 0; x < pw; ++x)
                if (patch.mask.get(x, y)) full.set(loc.x + x, loc.y + y);
        pasted.segmentation.rle = coco::rle_encode(full);
        pasted.area = double(patch.mask.count());
        pasted.bbox = mask_bbox(full);
    } else {
        double area = 0.0;
        for (const auto& poly : patch.seg_local.polygons) {
            std::vector<double> moved = poly;
            for (std::size_t i = 0; i + 1 < moved.size(); i += 2) {
                moved[i] += loc.x;
                moved[i + 1] += loc.y;
            }
            area += coco::polygon_area(moved);
            pasted.segmentation.polygons.push_back(std::move(moved));
        }
        pasted.area = area;
        pasted.bbox = coco::tight_bbox(pasted.segmentation.polygons);
    }
    survivors.push_back(std::move(pasted));
    anns = std::move(survivors);
}

int augment_image(ImageBuffer& img, std::vector<coco::CocoAnnotation>& anns,
                  const CourtRegion& region,
                  const std::vector<InstancePatch>& pool,
                  const AugmentOptions& opts, std::int64_t image_id, Rng& rng) {
    const int n = rng.uniform_int(opts.paste_min, opts.paste_max);
    if (n > 0 && pool.empty())
        throw std::invalid_argument("augment_image: empty instance pool");

    int pasted = 0;
    for (int i = 0; i < n; ++i) {
        const InstancePatch& source = pool[rng.uniform_u32(std::uint32_t(pool.size()))];
        InstancePatch styled = apply_style(source, rng, opts.style);
        if (opts.scale_jitter)
            styled = scale_patch(styled, rng.uniform_real(opts.scale_min, opts.scale_max));
        auto loc = sample_paste_location(styled.identity, region,
                                         styled.pixels.width, styled.pixels.height,
                                         img.width, img.height, rng);
        if (!loc) continue;
        // The recorded bbox is the tight box of the segmentation, which can
        // sit sub-pixel inside the patch window; check the anchor the output
        // annotation will actually carry.
        const auto tight = styled.seg_local.is_rle()
                               ? mask_bbox(styled.mask)
                               : coco::tight_bbox(styled.seg_local.polygons);
        const PointD final_anchor{loc->x + tight[0] + tight[2] / 2.0,
                                  loc->y + tight[1] + tight[3]};
        const bool legal = styled.identity == Identity::Official
                               ? region.in_band(final_anchor)
                               : region.in_interior(final_anchor);
        if (!legal) continue;
        paste_instance(img, anns, styled, *loc, image_id, opts.paste);
        ++pasted;
    }
    return pasted;
}

} // namespace courtaug
