#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stereoloc/detection.hpp"
#include "stereoloc/geometry.hpp"
#include "stereoloc/records.hpp"

namespace stereoloc {

struct NoiseModel {
    double pixel_sigma = 0.0;  ///< Gaussian std-dev on box centers, px
    bool quantize = false;     ///< round centers to integer pixels
    double miss_rate = 0.0;    ///< per-camera drop probability of a visible target

    void validate() const;
};

/// Physical size of a target, axis-aligned with the observing rig.
struct DroneExtent {
    double width_m = 0.5;   ///< along rig x
    double length_m = 0.5;  ///< along rig z
    double height_m = 0.2;  ///< along rig y
};

struct Range {
    double min = 0.0;
    double max = 0.0;
};

struct SceneConfig {
    int num_targets = 1;
    Range depth_range_m{5.0, 8.0};
    Range lateral_range_m{-1.0, 1.0};
    DroneExtent drone_extent_m;
    int num_frames = 50;
    std::uint64_t rng_seed = 1;
    /// Number of observer positions on a ring around the target volume; frame
    /// k uses viewpoint k mod n. Zero keeps the rig's configured pose.
    int viewpoints = 4;
    NoiseModel noise;

    void validate() const;
};

/// Noiseless box of one target in one camera, pixels.
struct ProjectedBox {
    double u = 0.0;
    double v = 0.0;
    double width_px = 0.0;
    double height_px = 0.0;
};

struct TargetObservation {
    std::optional<ProjectedBox> left;
    std::optional<ProjectedBox> right;

    bool visible() const { return left.has_value() && right.has_value(); }
};

/// Box centered on the projected target center, sized by the 2D extent of its
/// eight projected corners and shrunk symmetrically to stay inside the image.
/// A side is empty when any corner is behind the camera, the center is off
/// the image, or the box is under 2 px in either dimension.
TargetObservation observe_target(const Eigen::Vector3d& rig_point, const StereoRig& rig,
                                 const DroneExtent& extent);

struct SimFrame {
    StereoFrame frame;
    std::vector<int> left_targets;   ///< target_id of each left box
    std::vector<int> right_targets;  ///< target_id of each right box
    RigPose pose;
};

struct Scene {
    std::vector<SimFrame> frames;
    std::vector<GroundTruthRecord> truth;

    std::vector<StereoFrame> stereo_frames() const;
    /// `base` with each frame's pose substituted.
    std::vector<StereoRig> frame_rigs(const StereoRig& base) const;
    std::vector<FramePose> poses() const;
};

/// Pose of viewpoint `index` of `count` on a ring of radius `radius_m` around
/// the world origin, looking at the origin with the rig midpoint on the ring.
RigPose ring_pose(int index, int count, double radius_m, double baseline_m);

/// Deterministic in (cfg, rig). Throws InfeasibleConfig when no placement in
/// the configured volume is visible in both cameras.
Scene generate_scene(const SceneConfig& cfg, const StereoRig& rig);

/// Label files, ground_truth.csv, rig_poses.csv and scene.json under
/// `directory`. Throws IoError with the failing path.
void emit_dataset(const Scene& scene, const SceneConfig& cfg, const StereoRig& rig,
                  const std::string& directory, int threads = 1);

inline constexpr const char* kLabelPrefix = "frame";

}  // namespace stereoloc
