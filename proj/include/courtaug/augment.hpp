#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "courtaug/coco.hpp"
#include "courtaug/court.hpp"
#include "courtaug/image.hpp"
#include "courtaug/rng.hpp"

namespace courtaug {

// Court-geometry sub-identity. Referees and coaches get the same
// treatment everywhere, so they share one class.
enum class Identity { Player, Official, Ball };

const char* identity_label(Identity id);

// Cut-out object instance: bbox-sized pixels, its binary mask, and the
// segmentation in patch-local coordinates for the pasted annotation.
struct InstancePatch {
    ImageBuffer pixels;
    BinaryMask mask;
    Identity identity = Identity::Player;
    std::int64_t source_image_id = 0;
    std::int64_t source_annotation_id = 0;
    int category_id = 0;
    coco::Segmentation seg_local;
};

// Sampling ranges for the per-patch style draw. Collapsed ranges
// (jitter 0, hue 0, density 0..0, brightness 1..1) make apply_style the
// identity, which the tests rely on.
struct StyleParams {
    int curve_points = 4;
    double curve_jitter = 30.0;
    double hue_max_deg = 30.0;
    double sp_density_min = 0.001;
    double sp_density_max = 0.02;
    double brightness_min = 0.8;
    double brightness_max = 1.2;
};

using CurvePoints = std::vector<std::pair<double, double>>;

// Maps a category name + anchor position to a sub-identity. The anchor
// is the bbox bottom-center (foot point). Throws for unknown categories.
Identity assign_identity(const coco::CocoAnnotation& ann,
                         const CourtRegion& region,
                         const std::string& category_name);

// Per-channel piecewise-linear lookup. Control inputs must be strictly
// increasing and outputs nondecreasing.
ImageBuffer rgb_curve(const ImageBuffer& img,
                      const std::array<CurvePoints, 3>& curves);

// RGB -> HSV -> rotate hue -> RGB, per-channel rounding. 3-channel only.
ImageBuffer hue_shift(const ImageBuffer& img, double degrees);

// Each pixel independently replaced with probability density; the
// replacement is 0 or 255 (all channels together).
ImageBuffer salt_pepper(const ImageBuffer& img, double density, Rng& rng);

ImageBuffer brightness(const ImageBuffer& img, double factor);

// Periodic grid of square holes (side round(unit*ratio), random phase),
// filled with dataset-mean gray 114.
ImageBuffer grid_mask(const ImageBuffer& img, int unit, double ratio, Rng& rng);

// Identity-dispatched style composition. Players get an RGB curve plus a
// hue rotation; officials and balls get salt-and-pepper plus brightness.
// Only masked pixels change; the mask itself never does.
InstancePatch apply_style(const InstancePatch& patch, Rng& rng,
                          const StyleParams& params);

// Nearest-neighbor rescale of pixels, mask and local segmentation.
InstancePatch scale_patch(const InstancePatch& patch, double factor);

using ImageLoader = std::function<ImageBuffer(const coco::CocoImage&)>;

// Builds the copy-paste source pool: one patch per non-crowd annotation
// whose rasterized mask area reaches min_area.
std::vector<InstancePatch> extract_instances(
    const coco::CocoDataset& ds, const ImageLoader& loader,
    const std::unordered_map<std::int64_t, CourtRegion>& regions,
    double min_area);

// Uniform anchor over the identity's legal region (interior for players
// and balls, band for officials), rejection-sampled until the patch fits
// the image and the integer placement keeps the anchor legal. Gives up
// after 50 rejections.
std::optional<PointI> sample_paste_location(Identity identity,
                                            const CourtRegion& region,
                                            int patch_w, int patch_h,
                                            int img_w, int img_h, Rng& rng);

struct PasteOptions {
    double visibility_min = 0.1;  // of the pre-paste annotation area
    bool feather = false;         // 50% blend on the 1-px mask border
};

// Pastes the patch frontmost: masked pixels overwrite the image, the new
// annotation is appended with its sub-identity recorded, every occluded
// annotation loses the pasted mask, and annotations whose visible share
// drops below visibility_min are removed.
void paste_instance(ImageBuffer& img, std::vector<coco::CocoAnnotation>& anns,
                    const InstancePatch& patch, PointI loc,
                    std::int64_t image_id, const PasteOptions& opts);

struct AugmentOptions {
    int paste_min = 1;
    int paste_max = 4;
    StyleParams style;
    PasteOptions paste;
    bool scale_jitter = false;
    double scale_min = 0.8;
    double scale_max = 1.2;
};

// Draws n ~ uniform[paste_min, paste_max] pool patches, styles each and
// pastes at sampled legal locations (skipping failed draws). Returns the
// number actually pasted.
int augment_image(ImageBuffer& img, std::vector<coco::CocoAnnotation>& anns,
                  const CourtRegion& region,
                  const std::vector<InstancePatch>& pool,
                  const AugmentOptions& opts, std::int64_t image_id, Rng& rng);

} // namespace courtaug
