#include <gtest/gtest.h>

#include "stereoloc/config.hpp"
#include "stereoloc/errors.hpp"

namespace stereoloc {
namespace {

const std::string kRig =
    R"("rig": {"focal_length_m": 0.004, "pixel_pitch_m": 4e-6, "resolution": [1280, 720], "baseline_m": 0.5})";

std::string doc(const std::string& extra = "") {
    return "{\"schema_version\": 1, " + kRig + (extra.empty() ? "" : ", " + extra) + "}";
}

std::string error_path(const std::string& text) {
    try {
        parse_run_config(text);
    } catch (const ConfigError& e) {
        return e.path();
    }
    ADD_FAILURE() << "accepted: " << text;
    return "";
}

TEST(ParseRunConfig, MinimalDocumentUsesDefaults) {
    const auto cfg = parse_run_config(doc());
    EXPECT_DOUBLE_EQ(cfg.rig.intrinsics.focal_length_px(), 1000.0);
    EXPECT_DOUBLE_EQ(cfg.rig.intrinsics.cx_px, 640.0);
    EXPECT_DOUBLE_EQ(cfg.rig.intrinsics.cy_px, 360.0);
    EXPECT_FALSE(cfg.rig.depth_constant_override.has_value());
    EXPECT_FALSE(cfg.simulation.has_value());
    EXPECT_DOUBLE_EQ(cfg.localize.association.max_y_diff_frac, 0.05);
    EXPECT_EQ(cfg.localize.class_filter, std::vector<int>{0});
    EXPECT_TRUE(cfg.rig.pose.rotation.isIdentity());
}

TEST(ParseRunConfig, FullDocument) {
    const auto cfg = parse_run_config(doc(R"(
        "association": {"max_y_diff_frac": 0.1, "size_weight": 0.2, "min_disparity_px": 2, "max_disparity_px": 900},
        "class_filter": [],
        "confidence_threshold": 0.25,
        "simulation": {"num_targets": 2, "depth_range_m": [3, 9], "drone_extent_m": [0.4, 0.6, 0.1],
                       "rng_seed": 99, "viewpoints": 0,
                       "noise": {"pixel_sigma": 0.5, "quantize": true, "miss_rate": 0.1}},
        "paths": {"input": "in", "output": "out"})"));
    EXPECT_EQ(cfg.localize.association.max_disparity_px, 900.0);
    EXPECT_TRUE(cfg.localize.class_filter.empty());
    EXPECT_DOUBLE_EQ(cfg.localize.confidence_threshold, 0.25);
    ASSERT_TRUE(cfg.simulation.has_value());
    EXPECT_EQ(cfg.simulation->num_targets, 2);
    EXPECT_DOUBLE_EQ(cfg.simulation->drone_extent_m.length_m, 0.6);
    EXPECT_EQ(cfg.simulation->rng_seed, 99u);
    EXPECT_TRUE(cfg.simulation->noise.quantize);
    EXPECT_EQ(cfg.input_dir, "in");
    EXPECT_EQ(cfg.output_dir, "out");
}

TEST(ParseRunConfig, DepthConstantOverride) {
    const auto cfg = parse_run_config(
        R"({"schema_version": 1, "rig": {"focal_length_m": 1.2, "pixel_pitch_m": 2.65e-4,
            "resolution": [4096, 2160], "baseline_m": 1.2, "depth_constant": 9070.86}})");
    EXPECT_DOUBLE_EQ(depth_constant(cfg.rig), 9070.86);
}

TEST(ParseRunConfig, ErrorsNameTheField) {
    EXPECT_EQ(error_path("{"), "<root>");
    EXPECT_EQ(error_path(R"({"rig": {}})"), "schema_version");
    EXPECT_EQ(error_path(R"({"schema_version": 2})"), "schema_version");
    EXPECT_EQ(error_path(R"({"schema_version": 1})"), "rig");
    EXPECT_EQ(error_path(R"({"schema_version": 1, "rig": {"focal_length_m": 0.004, "pixel_pitch_m": 4e-6,
        "resolution": [1280, 720], "baseline_m": -0.5}})"), "rig.baseline_m");
    EXPECT_EQ(error_path(R"({"schema_version": 1, "rig": {"focal_length_m": "x", "pixel_pitch_m": 4e-6,
        "resolution": [1280, 720], "baseline_m": 0.5}})"), "rig.focal_length_m");
    EXPECT_EQ(error_path(R"({"schema_version": 1, "rig": {"focal_length_m": 0.004, "pixel_pitch_m": 4e-6,
        "resolution": [1280], "baseline_m": 0.5}})"), "rig.resolution");
    EXPECT_EQ(error_path(doc(R"("association": {"max_y_diff_frac": 2})")), "association.max_y_diff_frac");
    EXPECT_EQ(error_path(doc(R"("confidence_threshold": 1.5)")), "confidence_threshold");
    EXPECT_EQ(error_path(doc(R"("simulation": {"num_targets": 0})")), "simulation.num_targets");
    EXPECT_EQ(error_path(doc(R"("simulation": {"depth_range_m": [8, 5]})")), "simulation.depth_range_m");
    EXPECT_EQ(error_path(doc(R"("simulation": {"noise": {"miss_rate": 2}})")), "simulation.noise.miss_rate");
    EXPECT_EQ(error_path(doc(R"("paths": {"input": 3})")), "paths.input");
}

TEST(ParseRunConfig, RejectsHeterogeneousRig) {
    const std::string rig = R"({"schema_version": 1, "rig": {"focal_length_m": 0.004, "pixel_pitch_m": 4e-6,
        "resolution": [1280, 720], "baseline_m": 0.5, "right_camera": {"focal_length_m": 0.005,
        "pixel_pitch_m": 4e-6, "resolution": [1280, 720]}}})";
    EXPECT_EQ(error_path(rig), "rig.right_camera");

    const std::string same = R"({"schema_version": 1, "rig": {"focal_length_m": 0.004, "pixel_pitch_m": 4e-6,
        "resolution": [1280, 720], "baseline_m": 0.5, "right_camera": {"focal_length_m": 0.004,
        "pixel_pitch_m": 4e-6, "resolution": [1280, 720]}}})";
    EXPECT_NO_THROW(parse_run_config(same));
}

TEST(ParseRunConfig, RejectsReflectedPose) {
    EXPECT_EQ(error_path(R"({"schema_version": 1, "rig": {"focal_length_m": 0.004, "pixel_pitch_m": 4e-6,
        "resolution": [1280, 720], "baseline_m": 0.5,
        "pose": {"rotation": [[-1,0,0],[0,1,0],[0,0,1]], "translation": [0,0,0]}}})"),
              "rig.pose.rotation");
}

TEST(RunConfigJson, RoundTrips) {
    const auto cfg = load_run_config(std::string(STEREOLOC_CONFIG_DIR) + "/default.json");
    const auto again = parse_run_config(to_json(cfg).dump());
    EXPECT_EQ(to_json(again), to_json(cfg));
    EXPECT_EQ(again.rig.intrinsics, cfg.rig.intrinsics);
}

TEST(ShippedConfigs, AllParse) {
    for (const char* name : {"default", "noisy", "stated_parameters", "published_depth_constant"})
        EXPECT_NO_THROW(load_run_config(std::string(STEREOLOC_CONFIG_DIR) + "/" + name + ".json")) << name;
}

}  // namespace
}  // namespace stereoloc
