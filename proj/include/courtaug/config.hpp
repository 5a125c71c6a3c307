#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "courtaug/augment.hpp"
#include "courtaug/court.hpp"

namespace courtaug {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Full parameterization of a pipeline run. INI sections map 1:1 onto the
// field groups; unknown sections or keys are errors.
struct AugmentConfig {
    CropParams crop;          // [crop]
    double band_frac = 0.2;   // [regions]
    StyleParams style;        // [style]
    bool feather = false;

    int paste_min = 1;        // [paste]
    int paste_max = 4;
    double visibility_min = 0.1;
    double min_area = 16.0;
    bool scale_jitter = false;
    double scale_min = 0.8;
    double scale_max = 1.2;

    int duplication_factor = 10;  // [run]
    std::uint64_t seed = 1;
    int workers = 0;              // 0 = hardware concurrency

    AugmentOptions augment_options() const;
    void check() const;  // throws ConfigError on inconsistent values
};

AugmentConfig parse_config(const std::string& text);
AugmentConfig load_config(const std::string& path);

} // namespace courtaug
