#include "courtaug/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace courtaug {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::logic_error&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

std::int64_t to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        std::int64_t i = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::logic_error&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

Fraction to_fraction(const std::string& key, const std::string& v) {
    try {
        return parse_fraction(v);
    } catch (const std::invalid_argument&) {
        throw ConfigError("config: bad fraction value for '" + key + "': " + v);
    }
}

} // namespace

AugmentOptions AugmentConfig::augment_options() const {
    AugmentOptions opts;
    opts.paste_min = paste_min;
    opts.paste_max = paste_max;
    opts.style = style;
    opts.paste.visibility_min = visibility_min;
    opts.paste.feather = feather;
    opts.scale_jitter = scale_jitter;
    opts.scale_min = scale_min;
    opts.scale_max = scale_max;
    return opts;
}

void AugmentConfig::check() const {
    if (duplication_factor < 1)
        throw ConfigError("config: duplication_factor must be >= 1");
    if (paste_min < 0 || paste_min > paste_max)
        throw ConfigError("config: need 0 <= paste_min <= paste_max");
    if (band_frac < 0.0 || band_frac > 1.0)
        throw ConfigError("config: band_frac outside [0,1]");
    if (crop.canny_low <= 0 || crop.canny_low >= crop.canny_high)
        throw ConfigError("config: need 0 < low < high");
    if (crop.y_offset < 0)
        throw ConfigError("config: y_offset must be >= 0");
    if (visibility_min < 0.0 || visibility_min > 1.0)
        throw ConfigError("config: visibility_min outside [0,1]");
    if (workers < 0)
        throw ConfigError("config: workers must be >= 0");
    auto frac_ok = [](const Fraction& lo, const Fraction& hi) {
        return lo.num >= 0 && lo.value() < hi.value() && hi.value() <= 1.0;
    };
    if (!frac_ok(crop.h_min_frac, crop.h_max_frac) ||
        !frac_ok(crop.w_min_frac, crop.w_max_frac))
        throw ConfigError("config: crop fractions must satisfy 0 <= min < max <= 1");
}

AugmentConfig parse_config(const std::string& text) {
    AugmentConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "crop" && section != "regions" && section != "style" &&
                section != "paste" && section != "run")
                throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (section == "crop") {
            if (key == "sigma") cfg.crop.canny_sigma = to_double(qual, value);
            else if (key == "low") cfg.crop.canny_low = to_double(qual, value);
            else if (key == "high") cfg.crop.canny_high = to_double(qual, value);
            else if (key == "rho_res") cfg.crop.rho_res = to_double(qual, value);
            else if (key == "theta_res_deg")
                cfg.crop.theta_res = to_double(qual, value) * std::numbers::pi / 180.0;
            else if (key == "votes_min") cfg.crop.votes_min = int(to_int(qual, value));
            else if (key == "min_len_frac") cfg.crop.min_len_frac = to_double(qual, value);
            else if (key == "max_gap") cfg.crop.max_gap = int(to_int(qual, value));
            else if (key == "y_offset") cfg.crop.y_offset = int(to_int(qual, value));
            else if (key == "h_min_frac") cfg.crop.h_min_frac = to_fraction(qual, value);
            else if (key == "h_max_frac") cfg.crop.h_max_frac = to_fraction(qual, value);
            else if (key == "w_min_frac") cfg.crop.w_min_frac = to_fraction(qual, value);
            else if (key == "w_max_frac") cfg.crop.w_max_frac = to_fraction(qual, value);
            else if (key == "mode") {
                if (value == "as-written") cfg.crop.mode = CropMode::AsWritten;
                else if (value == "hull-union") cfg.crop.mode = CropMode::HullUnion;
                else throw ConfigError("config: mode must be as-written or hull-union");
            }
            else throw ConfigError("config: unknown key '" + qual + "'");
        } else if (section == "regions") {
            if (key == "band_frac") cfg.band_frac = to_double(qual, value);
            else throw ConfigError("config: unknown key '" + qual + "'");
        } else if (section == "style") {
            if (key == "curve_points") cfg.style.curve_points = int(to_int(qual, value));
            else if (key == "curve_jitter") cfg.style.curve_jitter = to_double(qual, value);
            else if (key == "hue_max_deg") cfg.style.hue_max_deg = to_double(qual, value);
            else if (key == "sp_density_min") cfg.style.sp_density_min = to_double(qual, value);
            else if (key == "sp_density_max") cfg.style.sp_density_max = to_double(qual, value);
            else if (key == "brightness_min") cfg.style.brightness_min = to_double(qual, value);
            else if (key == "brightness_max") cfg.style.brightness_max = to_double(qual, value);
            else if (key == "feather") cfg.feather = to_bool(qual, value);
            else throw ConfigError("config: unknown key '" + qual + "'");
        } else if (section == "paste") {
            if (key == "paste_min") cfg.paste_min = int(to_int(qual, value));
            else if (key == "paste_max") cfg.paste_max = int(to_int(qual, value));
            else if (key == "visibility_min") cfg.visibility_min = to_double(qual, value);
            else if (key == "min_area") cfg.min_area = to_double(qual, value);
            else if (key == "scale_jitter") cfg.scale_jitter = to_bool(qual, value);
            else if (key == "scale_min") cfg.scale_min = to_double(qual, value);
            else if (key == "scale_max") cfg.scale_max = to_double(qual, value);
            else throw ConfigError("config: unknown key '" + qual + "'");
        } else if (section == "run") {
            if (key == "duplication_factor") cfg.duplication_factor = int(to_int(qual, value));
            else if (key == "seed") cfg.seed = std::uint64_t(to_int(qual, value));
            else if (key == "workers") cfg.workers = int(to_int(qual, value));
            else throw ConfigError("config: unknown key '" + qual + "'");
        } else {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": key outside any section");
        }
    }
    cfg.check();
    return cfg;
}

AugmentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

} // namespace courtaug
