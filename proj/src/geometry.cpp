#include "stereoloc/geometry.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "stereoloc/errors.hpp"

namespace stereoloc {

void CameraIntrinsics::validate() const {
    if (!(focal_length_m > 0.0) || !std::isfinite(focal_length_m))
        throw InvalidArgument("focal_length_m must be finite and > 0");
    if (!(pixel_pitch_m > 0.0) || !std::isfinite(pixel_pitch_m))
        throw InvalidArgument("pixel_pitch_m must be finite and > 0");
    if (width_px < 1 || height_px < 1)
        throw InvalidArgument("resolution must be at least 1x1");
    if (!std::isfinite(cx_px) || !std::isfinite(cy_px))
        throw InvalidArgument("principal point must be finite");
    const double f_px = focal_length_px();
    if (!std::isfinite(f_px) || !(f_px > 0.0))
        throw InvalidArgument("focal_length_px is not finite and positive");
}

void RigPose::validate() const {
    if (!rotation.allFinite() || !translation.allFinite())
        throw InvalidArgument("pose has non-finite entries");
    const double ortho_err =
        (rotation.transpose() * rotation - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (ortho_err > 1e-9)
        throw InvalidArgument("pose rotation is not orthonormal");
    if (std::abs(rotation.determinant() - 1.0) > 1e-9)
        throw InvalidArgument("pose rotation must have determinant +1");
}

void StereoRig::validate() const {
    intrinsics.validate();
    if (!(baseline_m > 0.0) || !std::isfinite(baseline_m))
        throw InvalidArgument("baseline_m must be finite and > 0");
    pose.validate();
    if (depth_constant_override &&
        (!(*depth_constant_override > 0.0) || !std::isfinite(*depth_constant_override)))
        throw InvalidArgument("depth constant override must be finite and > 0");
}

ImagePoint project_rig(const Eigen::Vector3d& rig_point, const StereoRig& rig, Side which) {
    if (!rig_point.allFinite())
        throw NonFinite("cannot project a non-finite point");
    const double x_cam = which == Side::Left ? rig_point.x() : rig_point.x() - rig.baseline_m;
    const double z_cam = rig_point.z();
    if (!(z_cam > 0.0))
        throw BehindCamera("point has camera-frame Z = " + std::to_string(z_cam));
    const auto& in = rig.intrinsics;
    const double f_px = in.focal_length_px();
    return {in.cx_px + f_px * x_cam / z_cam, in.cy_px + f_px * rig_point.y() / z_cam};
}

ImagePoint project(const WorldPoint& point, const StereoRig& rig, Side which) {
    const Eigen::Vector3d p = point.vec();
    if (!p.allFinite())
        throw NonFinite("cannot project a non-finite point");
    return project_rig(rig.pose.to_rig(p), rig, which);
}

double depth_constant(const StereoRig& rig) {
    if (rig.depth_constant_override)
        return *rig.depth_constant_override;
    return rig.intrinsics.focal_length_px() * rig.baseline_m;
}

double triangulate_depth(double disparity_px, const StereoRig& rig) {
    if (!(disparity_px > 0.0))
        throw NonPositiveDisparity("disparity " + std::to_string(disparity_px) + " px is not > 0");
    return depth_constant(rig) / disparity_px;
}

WorldPoint back_project(const ImagePoint& centroid, double depth_m, const StereoRig& rig) {
    if (!(depth_m > 0.0))
        throw NonPositiveDepth("depth " + std::to_string(depth_m) + " m is not > 0");
    const auto& in = rig.intrinsics;
    const double f_px = in.focal_length_px();
    const Eigen::Vector3d cam{(centroid.u - in.cx_px) * depth_m / f_px,
                             (centroid.v - in.cy_px) * depth_m / f_px, depth_m};
    return WorldPoint::from(rig.pose.to_world(cam));
}

}  // namespace stereoloc
