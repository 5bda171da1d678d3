#pragma once

/**
 * @file config.hpp
 *
 * JSON run configuration. Every key is optional; unknown keys are rejected.
 *
 *   {
 *     "experiment_id": "quadratic",
 *     "dimensions": 1,                     // 1 or 2
 *     "transform": "square",               // power2 | square | cube | exp | identity (alias linear)
 *                                          // or {"kind": "exp", "alpha": 0.2}
 *     "groups": {
 *       "a": {"n": 100, "base": {"type": "uniform", "low": 2, "high": 4}},
 *       "b": {"n": 100, "base": {"type": "normal", "mean": 4, "sigma": 0.333}}
 *     },                                   // 2D: "base" is a list with one entry per axis
 *     "comparators": ["euclidean", "dissimilarity", {"kind": "dissimilarity", "d": 1, "e": 1}],
 *     "d_exponent": 3, "e_exponent": 1,    // used by plain "dissimilarity" entries
 *     "k_values": [70],
 *     "realizations": 1000,
 *     "seed": 0,
 *     "profile": {"reference": 4, "grid_min": 0.5, "grid_max": 8, "step": 0.001},
 *     "levelsets": {"resolution": 512, "rect": [x0, y0, x1, y1], "reference": [y1, y2],
 *                   "levels": [0.1, 0.2], "neighbor_counts": [70, 250, 500]}
 *   }
 */

#include "coinknn/experiment.hpp"
#include "coinknn/sensitivity.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace coinknn {

/// Configuration problem; key() names the offending key ("config" for file-level problems).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct ProfileSettings {
    double reference = 4.0;
    double grid_min = 0.5;
    double grid_max = 8.0;
    double step = 1e-3;
    friend bool operator==(const ProfileSettings&, const ProfileSettings&) = default;
};

struct LevelSetSettings {
    std::size_t resolution = 512;
    /// Bounding box of realization 0's points when empty.
    std::optional<std::array<double, 4>> rect;
    /// The experiment's decision point when empty.
    std::optional<std::array<double, 2>> reference;
    /// Same levels for every comparator when set; otherwise levels come from neighbor_counts.
    std::optional<std::vector<double>> levels;
    /// Level = comparison value of the n-th closest point of realization 0, so each
    /// contour encloses n points under every comparator.
    std::vector<std::size_t> neighbor_counts{70, 250, 500};
    friend bool operator==(const LevelSetSettings&, const LevelSetSettings&) = default;
};

struct RunSettings {
    ExperimentConfig experiment;
    double d_exponent = 3.0;
    double e_exponent = 1.0;
    ProfileSettings profile;
    LevelSetSettings levelsets;
};

bool operator==(const RunSettings& a, const RunSettings& b);

/// Throws ConfigError.
RunSettings parse_config(const nlohmann::json& doc);
RunSettings parse_config_text(const std::string& text);
RunSettings parse_config(const std::filesystem::path& path);

/// Fully resolved echo; parse_config(to_json(s)) == s.
nlohmann::json to_json(const RunSettings& settings);

}  // namespace coinknn
