#pragma once

#include <optional>

#include <Eigen/Core>

namespace stereoloc {

/// Pinhole parameters shared by both cameras of the rig.
struct CameraIntrinsics {
    double focal_length_m = 0.0;
    double pixel_pitch_m = 0.0;  ///< meters per pixel
    double cx_px = 0.0;
    double cy_px = 0.0;
    int width_px = 0;
    int height_px = 0;

    double focal_length_px() const { return focal_length_m / pixel_pitch_m; }

    /// Throws InvalidArgument when an invariant does not hold.
    void validate() const;

    bool operator==(const CameraIntrinsics&) const = default;
};

/// Rig frame -> world frame. `translation` is the world position of the
/// left optical center.
struct RigPose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static RigPose identity() { return {}; }

    Eigen::Vector3d to_world(const Eigen::Vector3d& rig_point) const {
        return rotation * rig_point + translation;
    }
    Eigen::Vector3d to_rig(const Eigen::Vector3d& world_point) const {
        return rotation.transpose() * (world_point - translation);
    }

    /// Rotation must be orthonormal with det +1 within 1e-9.
    void validate() const;
};

// Rig frame: origin at the left optical center, +x toward the right camera,
// +y down, +z forward. The right camera sits at (baseline_m, 0, 0).
struct StereoRig {
    CameraIntrinsics intrinsics;
    double baseline_m = 0.0;
    RigPose pose;
    /// Explicit depth constant K (m*px); replaces focal_length_px * baseline_m.
    std::optional<double> depth_constant_override;

    void validate() const;
};

enum class Side { Left, Right };

struct ImagePoint {
    double u = 0.0;  ///< px, rightward
    double v = 0.0;  ///< px, downward
};

struct WorldPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Eigen::Vector3d vec() const { return {x, y, z}; }
    static WorldPoint from(const Eigen::Vector3d& p) { return {p.x(), p.y(), p.z()}; }
};

/// Pinhole projection of a world point into the selected camera. The result
/// may lie outside the image.
/// Throws NonFinite or BehindCamera (camera-frame Z <= 0).
ImagePoint project(const WorldPoint& point, const StereoRig& rig, Side which);

/// Same as project() for a point already expressed in the rig frame.
ImagePoint project_rig(const Eigen::Vector3d& rig_point, const StereoRig& rig, Side which);

inline double disparity(double x_left, double x_right) { return x_left - x_right; }

/// K = focal_length_px * baseline_m, or the configured override.
double depth_constant(const StereoRig& rig);

/// Z = K / disparity. Throws NonPositiveDisparity for disparity <= 0.
double triangulate_depth(double disparity_px, const StereoRig& rig);

/// Left-camera pixel plus rig-frame depth -> world point.
/// Throws NonPositiveDepth.
WorldPoint back_project(const ImagePoint& centroid, double depth_m, const StereoRig& rig);

}  // namespace stereoloc
