#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "courtaug/coco.hpp"
#include "courtaug/config.hpp"

namespace courtaug {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ManifestRecord {
    std::int64_t source_image_id = 0;
    std::string source_file;
    int variant = 0;
    std::uint64_t seed = 0;
    CropRect rect;
    double crop_area_ratio = 0.0;
    int paste_count = 0;
    std::string output_file;
    std::int64_t output_image_id = 0;
    std::int64_t players = 0, officials = 0, balls = 0;
    bool skipped = false;
    std::string skip_reason;
};

struct RunManifest {
    std::string tool_version;
    AugmentConfig config;
    double wall_time_seconds = 0.0;
    std::vector<ManifestRecord> records;
};

std::string manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);
RunManifest load_manifest(const std::string& path);

// Full Fig-2 run: per source image detect the court once, emit
// duplication_factor styled/pasted crops with per-variant derived seeds,
// write images + dataset.json + manifest.json under out_dir. Unreadable
// images are recorded and skipped; unwritable output throws IoError.
RunManifest run_pipeline(const AugmentConfig& config,
                         const coco::CocoDataset& dataset,
                         const std::string& img_dir,
                         const std::string& out_dir);

struct GroupStats {
    std::string key;
    int image_count = 0;
    double mean_crop_area_ratio = 0.0;
};

struct StatsReport {
    std::vector<GroupStats> groups;  // sorted by key
    std::vector<std::pair<std::string, double>> per_image;  // output file -> ratio
    std::int64_t players = 0, officials = 0, balls = 0;
};

// Group key: first capture of group_regex applied to the source file
// name, else the whole match; no regex -> single group "all".
StatsReport compute_stats(const RunManifest& manifest,
                          const std::optional<std::string>& group_regex);
std::string stats_to_json(const StatsReport& report);

struct RoiRect {
    std::int64_t image_id = 0;
    std::string file_name;
    CropRect rect;
    int width = 0, height = 0;  // original frame
    std::string output_file;
};

// Inference-time export: crop only (no duplication, no augmentation),
// writing cropped images + dataset + the rect table for project_back.
std::vector<RoiRect> export_roi(const AugmentConfig& config,
                                const coco::CocoDataset& dataset,
                                const std::string& img_dir,
                                const std::string& out_dir);

std::string rects_to_json(const std::vector<RoiRect>& rects);
std::vector<RoiRect> rects_from_json(const std::string& text);

// Translates ROI-frame predictions (a COCO dataset or a bare results
// array) back to original-frame coordinates using the rect table.
std::string project_back_document(const std::string& predictions_json,
                                  const std::vector<RoiRect>& rects);

} // namespace courtaug
