#include "stereoloc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <numbers>
#include <random>

#include "stereoloc/config.hpp"
#include "stereoloc/errors.hpp"

namespace stereoloc {

void NoiseModel::validate() const {
    if (!(pixel_sigma >= 0.0) || !std::isfinite(pixel_sigma))
        throw InvalidArgument("pixel_sigma must be >= 0");
    if (!(miss_rate >= 0.0 && miss_rate <= 1.0))
        throw InvalidArgument("miss_rate must be in [0, 1]");
}

void SceneConfig::validate() const {
    if (num_targets < 1)
        throw InvalidArgument("num_targets must be >= 1");
    if (!(depth_range_m.min > 0.0 && depth_range_m.min < depth_range_m.max) ||
        !std::isfinite(depth_range_m.max))
        throw InvalidArgument("depth_range_m must satisfy 0 < min < max");
    if (!(lateral_range_m.min <= lateral_range_m.max) || !std::isfinite(lateral_range_m.min) ||
        !std::isfinite(lateral_range_m.max))
        throw InvalidArgument("lateral_range_m must satisfy min <= max");
    if (!(drone_extent_m.width_m > 0.0 && drone_extent_m.length_m > 0.0 && drone_extent_m.height_m > 0.0))
        throw InvalidArgument("drone_extent_m entries must be > 0");
    if (num_frames < 1)
        throw InvalidArgument("num_frames must be >= 1");
    if (viewpoints < 0)
        throw InvalidArgument("viewpoints must be >= 0");
    noise.validate();
}

namespace {

std::optional<ProjectedBox> observe_side(const Eigen::Vector3d& p, const StereoRig& rig,
                                         const DroneExtent& ext, Side side) {
    const auto& in = rig.intrinsics;
    const double hw = ext.width_m / 2, hh = ext.height_m / 2, hl = ext.length_m / 2;
    if (!(p.z() - hl > 0.0))
        return std::nullopt;
    const ImagePoint c = project_rig(p, rig, side);
    if (c.u < 0.0 || c.u > in.width_px || c.v < 0.0 || c.v > in.height_px)
        return std::nullopt;
    double umin = c.u, umax = c.u, vmin = c.v, vmax = c.v;
    for (double dx : {-hw, hw})
        for (double dy : {-hh, hh})
            for (double dz : {-hl, hl}) {
                const ImagePoint q = project_rig(p + Eigen::Vector3d{dx, dy, dz}, rig, side);
                umin = std::min(umin, q.u);
                umax = std::max(umax, q.u);
                vmin = std::min(vmin, q.v);
                vmax = std::max(vmax, q.v);
            }
    const double half_w = std::min({(umax - umin) / 2, c.u, in.width_px - c.u});
    const double half_h = std::min({(vmax - vmin) / 2, c.v, in.height_px - c.v});
    if (2 * half_w < 2.0 || 2 * half_h < 2.0)
        return std::nullopt;
    return ProjectedBox{c.u, c.v, 2 * half_w, 2 * half_h};
}

void check_feasible(const SceneConfig& cfg, const StereoRig& rig) {
    constexpr int kDepthSteps = 64;
    constexpr int kLateralSteps = 16;
    const auto& d = cfg.depth_range_m;
    const auto& l = cfg.lateral_range_m;
    for (int iz = 0; iz <= kDepthSteps; ++iz) {
        const double z = d.min + (d.max - d.min) * iz / kDepthSteps;
        for (int ix = 0; ix <= kLateralSteps; ++ix) {
            const double x = l.min + (l.max - l.min) * ix / kLateralSteps;
            for (int iy = 0; iy <= kLateralSteps; ++iy) {
                const double y = l.min + (l.max - l.min) * iy / kLateralSteps;
                if (observe_target({x, y, z}, rig, cfg.drone_extent_m).visible())
                    return;
            }
        }
    }
    throw InfeasibleConfig("no target placement in the configured volume is visible in both cameras");
}

BoundingBox to_box(const ProjectedBox& b, const CameraIntrinsics& in) {
    BoundingBox box;
    box.class_id = 0;
    box.cx_norm = b.u / in.width_px;
    box.cy_norm = b.v / in.height_px;
    box.w_norm = std::min(1.0, b.width_px / in.width_px);
    box.h_norm = std::min(1.0, b.height_px / in.height_px);
    box.confidence = 1.0;
    return box;
}

}  // namespace

TargetObservation observe_target(const Eigen::Vector3d& rig_point, const StereoRig& rig,
                                 const DroneExtent& extent) {
    return {observe_side(rig_point, rig, extent, Side::Left),
            observe_side(rig_point, rig, extent, Side::Right)};
}

RigPose ring_pose(int index, int count, double radius_m, double baseline_m) {
    const double theta = 2.0 * std::numbers::pi * (index % count) / count;
    const Eigen::Vector3d right{std::cos(theta), 0.0, -std::sin(theta)};
    const Eigen::Vector3d down{0.0, 1.0, 0.0};
    const Eigen::Vector3d forward{std::sin(theta), 0.0, std::cos(theta)};
    RigPose pose;
    pose.rotation.col(0) = right;
    pose.rotation.col(1) = down;
    pose.rotation.col(2) = forward;
    pose.translation = -radius_m * forward - 0.5 * baseline_m * right;
    return pose;
}

Scene generate_scene(const SceneConfig& cfg, const StereoRig& rig) {
    cfg.validate();
    rig.validate();
    check_feasible(cfg, rig);

    const auto& in = rig.intrinsics;
    const double ring_radius = 0.5 * (cfg.depth_range_m.min + cfg.depth_range_m.max);
    std::mt19937_64 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> lateral(cfg.lateral_range_m.min, cfg.lateral_range_m.max);
    std::uniform_real_distribution<double> depth(cfg.depth_range_m.min, cfg.depth_range_m.max);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Scene scene;
    scene.frames.reserve(cfg.num_frames);
    for (int f = 0; f < cfg.num_frames; ++f) {
        SimFrame sf;
        sf.pose = cfg.viewpoints > 0 ? ring_pose(f, cfg.viewpoints, ring_radius, rig.baseline_m) : rig.pose;
        StereoRig frame_rig = rig;
        frame_rig.pose = sf.pose;

        std::vector<Eigen::Vector3d> positions(cfg.num_targets);
        for (auto& p : positions) {
            const double x = lateral(rng);
            const double y = lateral(rng);
            p = {x, y, depth(rng)};
        }

        std::vector<BoundingBox> left, right;
        for (int t = 0; t < cfg.num_targets; ++t) {
            const auto& p = positions[t];
            const auto obs = observe_target(p, frame_rig, cfg.drone_extent_m);
            scene.truth.push_back({f, t, WorldPoint::from(sf.pose.to_world(p)), p.z(), obs.visible()});
            if (!obs.visible())
                continue;
            for (Side side : {Side::Left, Side::Right}) {
                ProjectedBox b = side == Side::Left ? *obs.left : *obs.right;
                if (cfg.noise.miss_rate > 0.0 && unit(rng) < cfg.noise.miss_rate)
                    continue;
                if (cfg.noise.pixel_sigma > 0.0) {
                    b.u += cfg.noise.pixel_sigma * gauss(rng);
                    b.v += cfg.noise.pixel_sigma * gauss(rng);
                }
                if (cfg.noise.quantize) {
                    b.u = std::round(b.u);
                    b.v = std::round(b.v);
                }
                b.u = std::clamp(b.u, 0.0, static_cast<double>(in.width_px));
                b.v = std::clamp(b.v, 0.0, static_cast<double>(in.height_px));
                if (side == Side::Left) {
                    left.push_back(to_box(b, in));
                    sf.left_targets.push_back(t);
                } else {
                    right.push_back(to_box(b, in));
                    sf.right_targets.push_back(t);
                }
            }
        }

        // Detector output order carries no correspondence information.
        auto shuffle_side = [&](std::vector<BoundingBox>& boxes, std::vector<int>& ids) {
            for (std::size_t i = boxes.size(); i > 1; --i) {
                const auto j = static_cast<std::size_t>(unit(rng) * static_cast<double>(i)) % i;
                std::swap(boxes[i - 1], boxes[j]);
                std::swap(ids[i - 1], ids[j]);
            }
        };
        shuffle_side(left, sf.left_targets);
        shuffle_side(right, sf.right_targets);
        sf.frame = StereoFrame::make(f, std::move(left), std::move(right));
        scene.frames.push_back(std::move(sf));
    }
    return scene;
}

std::vector<StereoFrame> Scene::stereo_frames() const {
    std::vector<StereoFrame> out;
    out.reserve(frames.size());
    for (const auto& f : frames)
        out.push_back(f.frame);
    return out;
}

std::vector<StereoRig> Scene::frame_rigs(const StereoRig& base) const {
    std::vector<StereoRig> out;
    out.reserve(frames.size());
    for (const auto& f : frames) {
        StereoRig r = base;
        r.pose = f.pose;
        out.push_back(r);
    }
    return out;
}

std::vector<FramePose> Scene::poses() const {
    std::vector<FramePose> out;
    out.reserve(frames.size());
    for (const auto& f : frames)
        out.push_back({f.frame.frame_id, f.pose});
    return out;
}

void emit_dataset(const Scene& scene, const SceneConfig& cfg, const StereoRig& rig,
                  const std::string& directory, int threads) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec || !fs::is_directory(directory))
        throw IoError("cannot create directory '" + directory + "'" + (ec ? ": " + ec.message() : ""));
    const fs::path dir(directory);

    const auto n = static_cast<std::ptrdiff_t>(scene.frames.size());
    std::vector<std::exception_ptr> errors(scene.frames.size());
#pragma omp parallel for num_threads(std::max(1, threads)) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            const auto& fr = scene.frames[i].frame;
            write_file((dir / label_file_name(kLabelPrefix, fr.frame_id, Side::Left)).string(),
                       write_label_file(fr.left));
            write_file((dir / label_file_name(kLabelPrefix, fr.frame_id, Side::Right)).string(),
                       write_label_file(fr.right));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    write_file((dir / "ground_truth.csv").string(), write_truth_csv(scene.truth));
    write_file((dir / "rig_poses.csv").string(), write_poses_csv(scene.poses()));
    nlohmann::json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["simulation"] = to_json(cfg);
    doc["rig"] = to_json(rig);
    doc["frames"] = scene.frames.size();
    doc["truth_records"] = scene.truth.size();
    write_file((dir / "scene.json").string(), doc.dump(2) + "\n");
}

}  // namespace stereoloc
