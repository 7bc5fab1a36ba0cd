#include "stereoloc/pipeline.hpp"

#include <algorithm>
#include <cassert>
#include <exception>
#include <string>

#include <omp.h>

#include "stereoloc/errors.hpp"

namespace stereoloc {

bool LocalizeConfig::accepts(const BoundingBox& box) const {
    if (box.confidence < confidence_threshold)
        return false;
    return class_filter.empty() ||
           std::find(class_filter.begin(), class_filter.end(), box.class_id) != class_filter.end();
}

void LocalizeConfig::validate() const {
    association.validate();
    if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0))
        throw InvalidArgument("confidence_threshold must be in [0, 1]");
}

namespace {

struct Filtered {
    StereoFrame frame;
    std::vector<int> left_map;
    std::vector<int> right_map;
};

Filtered filter_frame(const StereoFrame& frame, const LocalizeConfig& cfg) {
    Filtered out;
    out.frame.frame_id = frame.frame_id;
    out.frame.left = {frame.frame_id, Side::Left, {}};
    out.frame.right = {frame.frame_id, Side::Right, {}};
    auto take = [&](const DetectionSet& src, DetectionSet& dst, std::vector<int>& map) {
        for (std::size_t i = 0; i < src.boxes.size(); ++i) {
            if (!src.boxes[i].valid())
                throw InvalidFrame("box " + std::to_string(i) + " violates bounding-box invariants");
            if (cfg.accepts(src.boxes[i])) {
                dst.boxes.push_back(src.boxes[i]);
                map.push_back(static_cast<int>(i));
            }
        }
    };
    take(frame.left, out.frame.left, out.left_map);
    take(frame.right, out.frame.right, out.right_map);
    return out;
}

void check_frame(const StereoFrame& frame) {
    if (frame.frame_id < 0)
        throw InvalidFrame("negative frame_id");
    if (frame.left.frame_id != frame.frame_id || frame.right.frame_id != frame.frame_id)
        throw InvalidFrame("detection sets carry a different frame_id");
    if (frame.left.side != Side::Left || frame.right.side != Side::Right)
        throw InvalidFrame("detection sets are on the wrong side");
}

const StereoRig& rig_for(std::span<const StereoRig> rigs, std::size_t i) {
    return rigs.size() == 1 ? rigs[0] : rigs[i];
}

void check_rigs(std::size_t frames, std::span<const StereoRig> rigs) {
    if (rigs.size() != 1 && rigs.size() != frames)
        throw InvalidArgument("need one rig, or one rig per frame");
}

FrameResult localize_with_context(const StereoFrame& frame, const StereoRig& rig,
                                  const LocalizeConfig& cfg) {
    try {
        return localize_frame(frame, rig, cfg);
    } catch (const InvalidFrame& e) {
        throw InvalidFrame("frame " + std::to_string(frame.frame_id) + ": " + e.what());
    }
}

}  // namespace

FrameResult localize_frame(const StereoFrame& frame, const StereoRig& rig, const LocalizeConfig& cfg) {
    check_frame(frame);
    const Filtered f = filter_frame(frame, cfg);
    const auto& intr = rig.intrinsics;
    const auto pairs = associate(f.frame, intr, cfg.association);

    FrameResult result;
    result.frame_id = frame.frame_id;
    result.estimates.reserve(pairs.size());
    int ordinal = 0;
    for (const auto& p : pairs) {
        const BoundingBox& lb = f.frame.left.boxes[p.left_index];
        const BoundingBox& rb = f.frame.right.boxes[p.right_index];
        const ImagePoint cl = centroid(lb, intr);
        const ImagePoint cr = centroid(rb, intr);
        DroneEstimate e;
        e.frame_id = frame.frame_id;
        e.target_ordinal = ordinal++;
        e.left_index = f.left_map[p.left_index];
        e.right_index = f.right_map[p.right_index];
        e.disparity_px = disparity(cl.u, cr.u);
        assert(e.disparity_px >= cfg.association.min_disparity_px);
        e.depth_m = triangulate_depth(e.disparity_px, rig);
        e.world = back_project(cl, e.depth_m, rig);
        e.confidence = std::min(lb.confidence, rb.confidence);
        result.estimates.push_back(e);
    }
    result.dropped_left = static_cast<int>(f.frame.left.boxes.size() - pairs.size());
    result.dropped_right = static_cast<int>(f.frame.right.boxes.size() - pairs.size());
    return result;
}

std::vector<FrameResult> localize_stream_serial(std::span<const StereoFrame> frames,
                                                std::span<const StereoRig> rigs,
                                                const LocalizeConfig& cfg) {
    check_rigs(frames.size(), rigs);
    std::vector<FrameResult> out;
    out.reserve(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i)
        out.push_back(localize_with_context(frames[i], rig_for(rigs, i), cfg));
    return out;
}

std::vector<FrameResult> localize_stream(std::span<const StereoFrame> frames,
                                         std::span<const StereoRig> rigs, const LocalizeConfig& cfg,
                                         int threads) {
    check_rigs(frames.size(), rigs);
    const auto n = static_cast<std::ptrdiff_t>(frames.size());
    std::vector<FrameResult> out(frames.size());
    std::vector<std::exception_ptr> errors(frames.size());
#pragma omp parallel for num_threads(std::max(1, threads)) schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = localize_with_context(frames[i], rig_for(rigs, i), cfg);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return out;
}

}  // namespace stereoloc
