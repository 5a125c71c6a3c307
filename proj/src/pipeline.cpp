#include "courtaug/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <regex>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "courtaug/augment.hpp"
#include "courtaug/png.hpp"

namespace fs = std::filesystem;

namespace courtaug {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::string frac_str(const Fraction& f) {
    return std::to_string(f.num) + "/" + std::to_string(f.den);
}

ordered_json config_to_json(const AugmentConfig& c) {
    ordered_json j;
    j["crop"] = {{"sigma", c.crop.canny_sigma},
                 {"low", c.crop.canny_low},
                 {"high", c.crop.canny_high},
                 {"rho_res", c.crop.rho_res},
                 {"theta_res_deg", c.crop.theta_res * 180.0 / std::numbers::pi},
                 {"votes_min", c.crop.votes_min},
                 {"min_len_frac", c.crop.min_len_frac},
                 {"max_gap", c.crop.max_gap},
                 {"y_offset", c.crop.y_offset},
                 {"h_min_frac", frac_str(c.crop.h_min_frac)},
                 {"h_max_frac", frac_str(c.crop.h_max_frac)},
                 {"w_min_frac", frac_str(c.crop.w_min_frac)},
                 {"w_max_frac", frac_str(c.crop.w_max_frac)},
                 {"mode", c.crop.mode == CropMode::AsWritten ? "as-written"
                                                             : "hull-union"}};
    j["regions"] = {{"band_frac", c.band_frac}};
    j["style"] = {{"curve_points", c.style.curve_points},
                  {"curve_jitter", c.style.curve_jitter},
                  {"hue_max_deg", c.style.hue_max_deg},
                  {"sp_density_min", c.style.sp_density_min},
                  {"sp_density_max", c.style.sp_density_max},
                  {"brightness_min", c.style.brightness_min},
                  {"brightness_max", c.style.brightness_max},
                  {"feather", c.feather}};
    j["paste"] = {{"paste_min", c.paste_min},
                  {"paste_max", c.paste_max},
                  {"visibility_min", c.visibility_min},
                  {"min_area", c.min_area},
                  {"scale_jitter", c.scale_jitter},
                  {"scale_min", c.scale_min},
                  {"scale_max", c.scale_max}};
    j["run"] = {{"duplication_factor", c.duplication_factor},
                {"seed", c.seed},
                {"workers", c.workers}};
    return j;
}

AugmentConfig config_from_json(const json& j) {
    AugmentConfig c;
    const json& crop = j.at("crop");
    c.crop.canny_sigma = crop.at("sigma").get<double>();
    c.crop.canny_low = crop.at("low").get<double>();
    c.crop.canny_high = crop.at("high").get<double>();
    c.crop.rho_res = crop.at("rho_res").get<double>();
    c.crop.theta_res = crop.at("theta_res_deg").get<double>() * std::numbers::pi / 180.0;
    c.crop.votes_min = crop.at("votes_min").get<int>();
    c.crop.min_len_frac = crop.at("min_len_frac").get<double>();
    c.crop.max_gap = crop.at("max_gap").get<int>();
    c.crop.y_offset = crop.at("y_offset").get<int>();
    c.crop.h_min_frac = parse_fraction(crop.at("h_min_frac").get<std::string>());
    c.crop.h_max_frac = parse_fraction(crop.at("h_max_frac").get<std::string>());
    c.crop.w_min_frac = parse_fraction(crop.at("w_min_frac").get<std::string>());
    c.crop.w_max_frac = parse_fraction(crop.at("w_max_frac").get<std::string>());
    c.crop.mode = crop.at("mode").get<std::string>() == "hull-union"
                      ? CropMode::HullUnion
                      : CropMode::AsWritten;
    c.band_frac = j.at("regions").at("band_frac").get<double>();
    const json& style = j.at("style");
    c.style.curve_points = style.at("curve_points").get<int>();
    c.style.curve_jitter = style.at("curve_jitter").get<double>();
    c.style.hue_max_deg = style.at("hue_max_deg").get<double>();
    c.style.sp_density_min = style.at("sp_density_min").get<double>();
    c.style.sp_density_max = style.at("sp_density_max").get<double>();
    c.style.brightness_min = style.at("brightness_min").get<double>();
    c.style.brightness_max = style.at("brightness_max").get<double>();
    c.feather = style.at("feather").get<bool>();
    const json& paste = j.at("paste");
    c.paste_min = paste.at("paste_min").get<int>();
    c.paste_max = paste.at("paste_max").get<int>();
    c.visibility_min = paste.at("visibility_min").get<double>();
    c.min_area = paste.at("min_area").get<double>();
    c.scale_jitter = paste.at("scale_jitter").get<bool>();
    c.scale_min = paste.at("scale_min").get<double>();
    c.scale_max = paste.at("scale_max").get<double>();
    const json& run = j.at("run");
    c.duplication_factor = run.at("duplication_factor").get<int>();
    c.seed = run.at("seed").get<std::uint64_t>();
    c.workers = run.at("workers").get<int>();
    return c;
}

ordered_json rect_to_json(const CropRect& r) {
    return ordered_json{r.x, r.y, r.w, r.h};
}

CropRect rect_from_json(const json& j) {
    return {j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>(),
            j.at(3).get<int>()};
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path);
    f << text;
    if (!f) throw IoError("cannot write " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(f)),
                       std::istreambuf_iterator<char>());
}

int resolve_workers(int configured) {
    if (configured > 0) return configured;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
}

// Runs fn(i) for i in [0, n) on a small worker pool. Exceptions are
// rethrown on the caller thread after the pool joins.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const int count = std::max(1, std::min<int>(workers, int(n)));
    if (count == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(count));
    for (int t = 0; t < count; ++t)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

struct SourceState {
    const coco::CocoImage* image = nullptr;
    std::vector<const coco::CocoAnnotation*> annotations;  // sorted by id
    CropRect rect;
    CourtRegion region_in_crop;
    bool ok = false;
    std::string fail_reason;
};

std::string output_image_name(std::int64_t image_id, int variant) {
    return "img_" + std::to_string(image_id) + "_v" + std::to_string(variant) +
           ".png";
}

} // namespace

std::string manifest_to_json(const RunManifest& m) {
    ordered_json doc;
    doc["tool_version"] = m.tool_version;
    doc["config"] = config_to_json(m.config);
    doc["wall_time_seconds"] = m.wall_time_seconds;
    doc["records"] = ordered_json::array();
    for (const auto& r : m.records) {
        ordered_json j;
        j["source_image_id"] = r.source_image_id;
        j["source_file"] = r.source_file;
        j["variant"] = r.variant;
        j["seed"] = r.seed;
        if (r.skipped) {
            j["skipped"] = true;
            j["skip_reason"] = r.skip_reason;
        } else {
            j["rect"] = rect_to_json(r.rect);
            j["crop_area_ratio"] = r.crop_area_ratio;
            j["paste_count"] = r.paste_count;
            j["output_file"] = r.output_file;
            j["output_image_id"] = r.output_image_id;
            j["identity_counts"] = {{"player", r.players},
                                    {"official", r.officials},
                                    {"ball", r.balls}};
        }
        doc["records"].push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
    json doc = json::parse(text);
    RunManifest m;
    m.tool_version = doc.at("tool_version").get<std::string>();
    m.config = config_from_json(doc.at("config"));
    m.wall_time_seconds = doc.at("wall_time_seconds").get<double>();
    for (const auto& j : doc.at("records")) {
        ManifestRecord r;
        r.source_image_id = j.at("source_image_id").get<std::int64_t>();
        r.source_file = j.at("source_file").get<std::string>();
        r.variant = j.at("variant").get<int>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.skipped = j.value("skipped", false);
        if (r.skipped) {
            r.skip_reason = j.value("skip_reason", "");
        } else {
            r.rect = rect_from_json(j.at("rect"));
            r.crop_area_ratio = j.at("crop_area_ratio").get<double>();
            r.paste_count = j.at("paste_count").get<int>();
            r.output_file = j.at("output_file").get<std::string>();
            r.output_image_id = j.at("output_image_id").get<std::int64_t>();
            const json& ic = j.at("identity_counts");
            r.players = ic.at("player").get<std::int64_t>();
            r.officials = ic.at("official").get<std::int64_t>();
            r.balls = ic.at("ball").get<std::int64_t>();
        }
        m.records.push_back(std::move(r));
    }
    return m;
}

RunManifest load_manifest(const std::string& path) {
    try {
        return manifest_from_json(read_text_file(path));
    } catch (const json::exception& e) {
        throw IoError("bad manifest " + path + ": " + e.what());
    }
}

RunManifest run_pipeline(const AugmentConfig& config,
                         const coco::CocoDataset& dataset,
                         const std::string& img_dir,
                         const std::string& out_dir) {
    config.check();
    const auto t_start = std::chrono::steady_clock::now();

    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "images", ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    std::unordered_map<int, std::string> category_names;
    for (const auto& c : dataset.categories) category_names[c.id] = c.name;

    // Detection pass: one court rect per source image, shared by all
    // of its variants.
    std::vector<SourceState> sources(dataset.images.size());
    for (std::size_t i = 0; i < dataset.images.size(); ++i)
        sources[i].image = &dataset.images[i];
    for (const auto& ann : dataset.annotations) {
        for (auto& src : sources)
            if (src.image->id == ann.image_id) {
                src.annotations.push_back(&ann);
                break;
            }
    }
    for (auto& src : sources)
        std::sort(src.annotations.begin(), src.annotations.end(),
                  [](auto* a, auto* b) { return a->id < b->id; });

    const int workers = resolve_workers(config.workers);
    std::unordered_map<std::int64_t, CourtRegion> regions;
    {
        std::mutex regions_mutex;
        parallel_for(sources.size(), workers, [&](std::size_t i) {
            SourceState& src = sources[i];
            try {
                const ImageBuffer img =
                    load_png((fs::path(img_dir) / src.image->file_name).string());
                src.rect = detect_court(img, config.crop);
                src.region_in_crop =
                    split_regions({0, 0, src.rect.w, src.rect.h}, config.band_frac);
                src.ok = true;
                std::lock_guard lock(regions_mutex);
                regions.emplace(src.image->id,
                                split_regions(src.rect, config.band_frac));
            } catch (const std::exception& e) {
                src.ok = false;
                src.fail_reason = e.what();
            }
        });
    }

    // Copy-paste source pool, from the original (uncropped) frames.
    std::vector<InstancePatch> pool;
    if (config.paste_max > 0) {
        pool = extract_instances(
            dataset,
            [&](const coco::CocoImage& im) {
                return load_png((fs::path(img_dir) / im.file_name).string());
            },
            regions, config.min_area);
    }
    const bool do_paste = config.paste_max > 0 && !pool.empty();

    struct VariantOut {
        coco::CocoImage image;
        std::vector<coco::CocoAnnotation> annotations;
        ManifestRecord record;
    };
    struct UnitOut {
        std::vector<VariantOut> variants;
        ManifestRecord skip_record;
        bool skipped = false;
    };
    std::vector<UnitOut> outputs(sources.size());

    AugmentOptions aug = config.augment_options();
    if (!do_paste) aug.paste_min = aug.paste_max = 0;

    parallel_for(sources.size(), workers, [&](std::size_t i) {
        const SourceState& src = sources[i];
        UnitOut& out = outputs[i];
        if (!src.ok) {
            out.skipped = true;
            out.skip_record.source_image_id = src.image->id;
            out.skip_record.source_file = src.image->file_name;
            out.skip_record.variant = -1;
            out.skip_record.skipped = true;
            out.skip_record.skip_reason = src.fail_reason;
            return;
        }
        const ImageBuffer img =
            load_png((fs::path(img_dir) / src.image->file_name).string());
        const double ratio = double(src.rect.area()) /
                             (double(src.image->width) * src.image->height);

        for (int v = 0; v < config.duplication_factor; ++v) {
            const std::uint64_t seed =
                Rng::derive(config.seed, std::uint64_t(src.image->id),
                            std::uint64_t(v));
            Rng rng(seed);

            VariantOut var;
            var.image.file_name =
                "images/" + output_image_name(src.image->id, v);
            var.image.width = src.rect.w;
            var.image.height = src.rect.h;

            ImageBuffer cropped = crop_image(img, src.rect);
            for (const auto* ann : src.annotations) {
                if (auto moved =
                        coco::transform_under_crop(*ann, src.rect, config.min_area))
                    var.annotations.push_back(std::move(*moved));
            }
            const int pasted =
                augment_image(cropped, var.annotations, src.region_in_crop,
                              pool, aug, src.image->id, rng);

            ManifestRecord& rec = var.record;
            rec.source_image_id = src.image->id;
            rec.source_file = src.image->file_name;
            rec.variant = v;
            rec.seed = seed;
            rec.rect = src.rect;
            rec.crop_area_ratio = ratio;
            rec.paste_count = pasted;
            rec.output_file = var.image.file_name;
            for (const auto& ann : var.annotations) {
                Identity id;
                if (ann.sub_identity) {
                    id = *ann.sub_identity == "player"     ? Identity::Player
                         : *ann.sub_identity == "official" ? Identity::Official
                                                           : Identity::Ball;
                } else {
                    auto it = category_names.find(ann.category_id);
                    if (it == category_names.end()) continue;
                    try {
                        id = assign_identity(ann, src.region_in_crop, it->second);
                    } catch (const std::invalid_argument&) {
                        continue;
                    }
                }
                (id == Identity::Player     ? rec.players
                 : id == Identity::Official ? rec.officials
                                            : rec.balls)++;
            }

            save_png((fs::path(out_dir) / var.image.file_name).string(), cropped);
            out.variants.push_back(std::move(var));
        }
    });

    // Deterministic assembly: ids assigned in (source id, variant) order.
    std::vector<std::size_t> order(outputs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return sources[a].image->id < sources[b].image->id;
    });

    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.config = config;

    coco::CocoDataset out_ds;
    out_ds.categories = dataset.categories;
    std::int64_t next_image_id = 1, next_ann_id = 1;
    for (std::size_t idx : order) {
        UnitOut& unit = outputs[idx];
        if (unit.skipped) {
            manifest.records.push_back(unit.skip_record);
            continue;
        }
        for (auto& var : unit.variants) {
            var.image.id = next_image_id++;
            var.record.output_image_id = var.image.id;
            for (auto& ann : var.annotations) {
                ann.id = next_ann_id++;
                ann.image_id = var.image.id;
                out_ds.annotations.push_back(std::move(ann));
            }
            out_ds.images.push_back(var.image);
            manifest.records.push_back(var.record);
        }
    }

    write_text_file((fs::path(out_dir) / "dataset.json").string(),
                    coco::serialize_coco(out_ds));
    manifest.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    write_text_file((fs::path(out_dir) / "manifest.json").string(),
                    manifest_to_json(manifest));
    return manifest;
}

StatsReport compute_stats(const RunManifest& manifest,
                          const std::optional<std::string>& group_regex) {
    StatsReport report;
    std::optional<std::regex> re;
    if (group_regex) re.emplace(*group_regex);

    std::map<std::string, std::pair<int, double>> groups;  // key -> (n, sum)
    int produced = 0;
    for (const auto& r : manifest.records) {
        if (r.skipped) continue;
        ++produced;
        std::string key = "all";
        if (re) {
            std::smatch m;
            if (std::regex_search(r.source_file, m, *re))
                key = m.size() > 1 && m[1].matched ? m[1].str() : m[0].str();
            else
                key = "unmatched";
        }
        auto& [n, sum] = groups[key];
        ++n;
        sum += r.crop_area_ratio;
        report.per_image.emplace_back(r.output_file, r.crop_area_ratio);
        report.players += r.players;
        report.officials += r.officials;
        report.balls += r.balls;
    }
    if (produced == 0)
        throw std::invalid_argument("compute_stats: empty manifest");
    for (const auto& [key, acc] : groups)
        report.groups.push_back({key, acc.first, acc.second / acc.first});
    return report;
}

std::string stats_to_json(const StatsReport& report) {
    ordered_json doc;
    doc["groups"] = ordered_json::array();
    for (const auto& g : report.groups)
        doc["groups"].push_back({{"key", g.key},
                                 {"image_count", g.image_count},
                                 {"mean_crop_area_ratio", g.mean_crop_area_ratio}});
    doc["identity_counts"] = {{"player", report.players},
                              {"official", report.officials},
                              {"ball", report.balls}};
    doc["per_image"] = ordered_json::array();
    for (const auto& [file, ratio] : report.per_image)
        doc["per_image"].push_back({{"output_file", file}, {"ratio", ratio}});
    return doc.dump(2) + "\n";
}

std::vector<RoiRect> export_roi(const AugmentConfig& config,
                                const coco::CocoDataset& dataset,
                                const std::string& img_dir,
                                const std::string& out_dir) {
    config.check();
    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "images", ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);

    const int workers = resolve_workers(config.workers);
    struct Slot {
        bool ok = false;
        RoiRect roi;
        coco::CocoImage image;
        std::vector<coco::CocoAnnotation> annotations;
    };
    std::vector<Slot> slots(dataset.images.size());

    parallel_for(dataset.images.size(), workers, [&](std::size_t i) {
        const coco::CocoImage& im = dataset.images[i];
        Slot& slot = slots[i];
        try {
            const ImageBuffer img =
                load_png((fs::path(img_dir) / im.file_name).string());
            const CropRect rect = detect_court(img, config.crop);
            slot.roi = {im.id, im.file_name, rect, im.width, im.height,
                        "images/" + output_image_name(im.id, 0)};
            save_png((fs::path(out_dir) / slot.roi.output_file).string(),
                     crop_image(img, rect));
            slot.image = im;
            slot.image.file_name = slot.roi.output_file;
            slot.image.width = rect.w;
            slot.image.height = rect.h;
            for (const auto& ann : dataset.annotations)
                if (ann.image_id == im.id)
                    if (auto moved =
                            coco::transform_under_crop(ann, rect, config.min_area))
                        slot.annotations.push_back(std::move(*moved));
            slot.ok = true;
        } catch (const IoError&) {
            throw;
        } catch (const std::exception&) {
            slot.ok = false;
        }
    });

    std::vector<RoiRect> rects;
    coco::CocoDataset out_ds;
    out_ds.categories = dataset.categories;
    for (auto& slot : slots) {
        if (!slot.ok) continue;
        rects.push_back(slot.roi);
        out_ds.images.push_back(slot.image);
        for (auto& ann : slot.annotations)
            out_ds.annotations.push_back(std::move(ann));
    }
    write_text_file((fs::path(out_dir) / "dataset.json").string(),
                    coco::serialize_coco(out_ds));
    write_text_file((fs::path(out_dir) / "rects.json").string(),
                    rects_to_json(rects));
    return rects;
}

std::string rects_to_json(const std::vector<RoiRect>& rects) {
    ordered_json doc;
    doc["rects"] = ordered_json::array();
    for (const auto& r : rects)
        doc["rects"].push_back({{"image_id", r.image_id},
                                {"file_name", r.file_name},
                                {"rect", rect_to_json(r.rect)},
                                {"width", r.width},
                                {"height", r.height},
                                {"output_file", r.output_file}});
    return doc.dump(2) + "\n";
}

std::vector<RoiRect> rects_from_json(const std::string& text) {
    std::vector<RoiRect> rects;
    json doc = json::parse(text);
    for (const auto& j : doc.at("rects")) {
        RoiRect r;
        r.image_id = j.at("image_id").get<std::int64_t>();
        r.file_name = j.at("file_name").get<std::string>();
        r.rect = rect_from_json(j.at("rect"));
        r.width = j.at("width").get<int>();
        r.height = j.at("height").get<int>();
        r.output_file = j.value("output_file", "");
        rects.push_back(std::move(r));
    }
    return rects;
}

namespace {

void project_geometry_fields(json& item, const RoiRect& roi) {
    const CropRect& rect = roi.rect;
    if (auto it = item.find("bbox"); it != item.end() && it->is_array() &&
                                     it->size() == 4) {
        (*it)[0] = round2(it->at(0).get<double>() + rect.x);
        (*it)[1] = round2(it->at(1).get<double>() + rect.y);
    }
    if (auto it = item.find("segmentation"); it != item.end()) {
        if (it->is_array()) {
            for (auto& poly : *it) {
                if (!poly.is_array()) continue;
                for (std::size_t i = 0; i + 1 < poly.size(); i += 2) {
                    poly[i] = round2(poly[i].get<double>() + rect.x);
                    poly[i + 1] = round2(poly[i + 1].get<double>() + rect.y);
                }
            }
        } else if (it->is_object() && it->contains("counts") &&
                   it->at("counts").is_array()) {
            coco::RleMask rle;
            rle.height = it->at("size").at(0).get<int>();
            rle.width = it->at("size").at(1).get<int>();
            for (const auto& c : it->at("counts"))
                rle.counts.push_back(c.get<std::int64_t>());
            BinaryMask roi_mask = coco::rle_decode(rle);
            BinaryMask full(roi.width, roi.height);
            for (int y = 0; y < roi_mask.height; ++y)
                for (int x = 0; x < roi_mask.width; ++x)
                    if (roi_mask.get(x, y)) full.set(rect.x + x, rect.y + y);
            coco::RleMask out = coco::rle_encode(full);
            (*it)["size"] = {out.height, out.width};
            (*it)["counts"] = out.counts;
        }
    }
}

} // namespace

std::string project_back_document(const std::string& predictions_json,
                                  const std::vector<RoiRect>& rects) {
    std::unordered_map<std::int64_t, const RoiRect*> by_id;
    for (const auto& r : rects) by_id[r.image_id] = &r;
    auto lookup = [&](std::int64_t id) -> const RoiRect& {
        auto it = by_id.find(id);
        if (it == by_id.end())
            throw IoError("project-back: image_id " + std::to_string(id) +
                          " not in rect table");
        return *it->second;
    };

    json doc = json::parse(predictions_json);
    if (doc.is_array()) {
        // bare results list: [{image_id, bbox, segmentation, score, ...}]
        for (auto& item : doc)
            project_geometry_fields(item, lookup(item.at("image_id").get<std::int64_t>()));
    } else if (doc.is_object()) {
        if (doc.contains("annotations"))
            for (auto& item : doc.at("annotations"))
                project_geometry_fields(item,
                                        lookup(item.at("image_id").get<std::int64_t>()));
        if (doc.contains("images"))
            for (auto& im : doc.at("images")) {
                const RoiRect& roi = lookup(im.at("id").get<std::int64_t>());
                im["file_name"] = roi.file_name;
                im["width"] = roi.width;
                im["height"] = roi.height;
            }
    } else {
        throw IoError("project-back: predictions must be an array or object");
    }
    return doc.dump(2) + "\n";
}

} // namespace courtaug
