#pragma once

#include <span>
#include <vector>

#include "stereoloc/association.hpp"
#include "stereoloc/detection.hpp"
#include "stereoloc/geometry.hpp"

namespace stereoloc {

struct LocalizeConfig {
    AssociationConfig association;
    std::vector<int> class_filter{0};  ///< empty accepts every class
    double confidence_threshold = 0.0;

    bool accepts(const BoundingBox& box) const;
    void validate() const;
};

struct DroneEstimate {
    long long frame_id = 0;
    int target_ordinal = 0;
    int left_index = 0;   ///< index into the frame's left DetectionSet
    int right_index = 0;  ///< index into the frame's right DetectionSet
    double disparity_px = 0.0;
    double depth_m = 0.0;  ///< rig-frame Z
    WorldPoint world;
    double confidence = 0.0;

    bool operator==(const DroneEstimate& o) const {
        return frame_id == o.frame_id && target_ordinal == o.target_ordinal &&
               left_index == o.left_index && right_index == o.right_index &&
               disparity_px == o.disparity_px && depth_m == o.depth_m && world.x == o.world.x &&
               world.y == o.world.y && world.z == o.world.z && confidence == o.confidence;
    }
};

struct FrameResult {
    long long frame_id = 0;
    std::vector<DroneEstimate> estimates;  ///< by target_ordinal
    int dropped_left = 0;
    int dropped_right = 0;

    bool operator==(const FrameResult&) const = default;
};

/// Detections -> association -> centroid disparity -> depth -> world point
/// (left camera is the reference). Throws InvalidFrame for inconsistent
/// frame ids or sides, and for invalid boxes.
FrameResult localize_frame(const StereoFrame& frame, const StereoRig& rig, const LocalizeConfig& cfg);

/// Serial reference. `rigs` holds one rig per frame, or a single rig shared by all.
std::vector<FrameResult> localize_stream_serial(std::span<const StereoFrame> frames,
                                                std::span<const StereoRig> rigs,
                                                const LocalizeConfig& cfg);

/// OpenMP over frames; output order and values match localize_stream_serial.
std::vector<FrameResult> localize_stream(std::span<const StereoFrame> frames,
                                         std::span<const StereoRig> rigs, const LocalizeConfig& cfg,
                                         int threads = 1);

}  // namespace stereoloc
