#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "stereoloc/geometry.hpp"
#include "stereoloc/pipeline.hpp"
#include "stereoloc/simulation.hpp"

namespace stereoloc {

inline constexpr int kSchemaVersion = 1;

/// The single JSON document consumed by every CLI command.
///
/// {
///   "schema_version": 1,
///   "rig": {
///     "focal_length_m": 1.2, "pixel_pitch_m": 2.65e-4,
///     "resolution": [4096, 2160], "principal_point": [2048, 1080],
///     "baseline_m": 1.2, "depth_constant": 9070.86,
///     "pose": {"rotation": [[1,0,0],[0,1,0],[0,0,1]], "translation": [0,0,0]},
///     "right_camera": { ...intrinsics... }
///   },
///   "association": {"max_y_diff_frac": 0.05, "size_weight": 0.5,
///                   "min_disparity_px": 1.0, "max_disparity_px": 4096},
///   "class_filter": [0],
///   "confidence_threshold": 0.0,
///   "simulation": {
///     "num_targets": 1, "depth_range_m": [5, 8], "lateral_range_m": [-1, 1],
///     "drone_extent_m": [0.5, 0.5, 0.2], "num_frames": 50, "rng_seed": 7,
///     "viewpoints": 4,
///     "noise": {"pixel_sigma": 0, "quantize": false, "miss_rate": 0}
///   },
///   "paths": {"input": "...", "output": "..."}
/// }
///
/// Only "schema_version" and "rig" are required. A principal point defaults
/// to the image center; "right_camera", when given, must equal the left
/// intrinsics. "drone_extent_m" is [width, length, height].
struct RunConfig {
    StereoRig rig;
    LocalizeConfig localize;
    std::optional<SceneConfig> simulation;
    std::optional<std::string> input_dir;
    std::optional<std::string> output_dir;
};

/// Throws ConfigError carrying the dotted path of the offending field.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::string& path);

/// Built-in rig used when no config is supplied (1280x720, f = 1000 px, B = 0.5 m).
StereoRig default_rig();

nlohmann::json to_json(const StereoRig& rig);
nlohmann::json to_json(const SceneConfig& cfg);
nlohmann::json to_json(const LocalizeConfig& cfg);
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace stereoloc
