#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "courtaug/coco.hpp"
#include "courtaug/config.hpp"
#include "courtaug/draw.hpp"
#include "courtaug/pipeline.hpp"
#include "courtaug/png.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFindings = 1;
constexpr int kExitIo = 2;
constexpr int kExitConfig = 3;

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw courtaug::IoError("cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw courtaug::IoError("cannot write " + path);
    f << text;
    if (!f) throw courtaug::IoError("cannot write " + path);
}

courtaug::AugmentConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return courtaug::AugmentConfig{};
    return courtaug::load_config(path);
}

int cmd_detect_court(const std::string& image_path, const std::string& config_path,
                     const std::string& mode, const std::string& overlay_path) {
    courtaug::AugmentConfig cfg = load_config_or_default(config_path);
    if (mode == "as-written") cfg.crop.mode = courtaug::CropMode::AsWritten;
    else if (mode == "hull-union") cfg.crop.mode = courtaug::CropMode::HullUnion;
    else if (!mode.empty()) throw courtaug::ConfigError("unknown mode: " + mode);

    const courtaug::ImageBuffer img = courtaug::load_png(image_path);
    const courtaug::CourtDetection det = courtaug::detect_court_debug(img, cfg.crop);

    std::cout << "{\"rect\": [" << det.rect.x << ", " << det.rect.y << ", "
              << det.rect.w << ", " << det.rect.h << "], \"fallback\": "
              << (det.used_fallback ? "true" : "false")
              << ", \"segments\": " << det.segments.size() << "}\n";

    if (!overlay_path.empty()) {
        courtaug::ImageBuffer overlay = img;
        if (overlay.channels == 1) {
            courtaug::ImageBuffer rgb(img.width, img.height, 3);
            for (int y = 0; y < img.height; ++y)
                for (int x = 0; x < img.width; ++x)
                    for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = img.at(x, y);
            overlay = std::move(rgb);
        }
        const auto sb = courtaug::static_bounds(img.width, img.height, cfg.crop);
        courtaug::draw_rect_outline(overlay,
                                    {sb.min_w, sb.min_h, sb.max_w - sb.min_w,
                                     sb.max_h - sb.min_h},
                                    {40, 90, 255}, 2);
        for (const auto& s : det.segments)
            courtaug::draw_line(overlay, s.p0, s.p1, {255, 60, 40}, 2);
        courtaug::draw_rect_outline(overlay, det.rect, {40, 220, 60}, 3);
        courtaug::save_png(overlay_path, overlay);
    }
    return kExitOk;
}

int cmd_validate(const std::string& dataset_path) {
    std::vector<courtaug::coco::Finding> findings;
    try {
        const auto ds = courtaug::coco::parse_coco(read_file(dataset_path));
        findings = courtaug::coco::validate_dataset(ds);
    } catch (const courtaug::coco::ParseError& e) {
        findings.push_back({"parse-error", e.what()});
    }
    for (const auto& f : findings)
        std::cout << f.code << ": " << f.message << "\n";
    if (findings.empty()) {
        std::cout << "ok: no findings\n";
        return kExitOk;
    }
    std::cout << findings.size() << " finding(s)\n";
    return kExitFindings;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Court-prior dataset pipeline: detect, crop, augment, project back"};
    app.require_subcommand(1);

    // detect-court
    std::string dc_image, dc_config, dc_mode, dc_overlay;
    auto* dc = app.add_subcommand("detect-court", "Detect the court rect in one image");
    dc->add_option("image", dc_image, "input PNG")->required();
    dc->add_option("--config", dc_config, "config file");
    dc->add_option("--mode", dc_mode, "as-written | hull-union");
    dc->add_option("--overlay", dc_overlay, "write an overlay PNG");

    // crop (ROI export)
    std::string cr_config, cr_in, cr_img_dir, cr_out_dir;
    auto* cr = app.add_subcommand("crop", "Crop-only ROI export with rect table");
    cr->add_option("--config", cr_config, "config file");
    cr->add_option("--in", cr_in, "input COCO json")->required();
    cr->add_option("--img-dir", cr_img_dir, "image directory")->required();
    cr->add_option("--out-dir", cr_out_dir, "output directory")->required();

    // augment (full pipeline)
    std::string au_config, au_in, au_img_dir, au_out_dir;
    auto* au = app.add_subcommand("augment", "Full duplicate/crop/style/paste pipeline");
    au->add_option("--config", au_config, "config file");
    au->add_option("--in", au_in, "input COCO json")->required();
    au->add_option("--img-dir", au_img_dir, "image directory")->required();
    au->add_option("--out-dir", au_out_dir, "output directory")->required();

    // stats
    std::string st_manifest, st_regex, st_out;
    auto* st = app.add_subcommand("stats", "Crop-ratio and identity statistics");
    st->add_option("--manifest", st_manifest, "manifest.json from a run")->required();
    st->add_option("--group-regex", st_regex, "derive group key from source file name");
    st->add_option("--out", st_out, "write report here instead of stdout");

    // project-back
    std::string pb_rects, pb_in, pb_out;
    auto* pb = app.add_subcommand("project-back",
                                  "Map ROI-frame predictions to original frames");
    pb->add_option("--rects", pb_rects, "rect table from crop")->required();
    pb->add_option("--in", pb_in, "predictions json")->required();
    pb->add_option("--out", pb_out, "output json")->required();

    // validate
    std::string va_dataset;
    auto* va = app.add_subcommand("validate", "Check COCO dataset invariants");
    va->add_option("dataset", va_dataset, "COCO json")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (dc->parsed())
            return cmd_detect_court(dc_image, dc_config, dc_mode, dc_overlay);
        if (cr->parsed()) {
            auto cfg = load_config_or_default(cr_config);
            auto ds = courtaug::coco::parse_coco(read_file(cr_in));
            courtaug::export_roi(cfg, ds, cr_img_dir, cr_out_dir);
            std::cout << "wrote " << cr_out_dir << "/dataset.json and rects.json\n";
            return kExitOk;
        }
        if (au->parsed()) {
            auto cfg = load_config_or_default(au_config);
            auto ds = courtaug::coco::parse_coco(read_file(au_in));
            auto manifest = courtaug::run_pipeline(cfg, ds, au_img_dir, au_out_dir);
            int produced = 0;
            for (const auto& r : manifest.records) produced += !r.skipped;
            std::cout << "wrote " << produced << " images under " << au_out_dir
                      << "\n";
            return kExitOk;
        }
        if (st->parsed()) {
            auto manifest = courtaug::load_manifest(st_manifest);
            std::optional<std::string> re;
            if (!st_regex.empty()) re = st_regex;
            auto report = courtaug::compute_stats(manifest, re);
            auto text = courtaug::stats_to_json(report);
            if (st_out.empty())
                std::cout << text;
            else
                write_file(st_out, text);
            return kExitOk;
        }
        if (pb->parsed()) {
            auto rects = courtaug::rects_from_json(read_file(pb_rects));
            write_file(pb_out,
                       courtaug::project_back_document(read_file(pb_in), rects));
            return kExitOk;
        }
        if (va->parsed()) return cmd_validate(va_dataset);
    } catch (const courtaug::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const courtaug::coco::ParseError& e) {
        std::cerr << "dataset error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
