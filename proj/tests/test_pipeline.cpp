#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "stereoloc/errors.hpp"
#include "stereoloc/pipeline.hpp"
#include "stereoloc/simulation.hpp"

namespace stereoloc {
namespace {

StereoRig wide_rig() {
    StereoRig rig;
    rig.intrinsics = {1.2, 2.65e-4, 2048, 1080, 4096, 2160};
    rig.baseline_m = 1.2;
    rig.depth_constant_override = 9070.86;
    return rig;
}

StereoRig hd_rig() {
    StereoRig rig;
    rig.intrinsics = {0.004, 4e-6, 640, 360, 1280, 720};
    rig.baseline_m = 0.5;
    return rig;
}

BoundingBox box_px(const StereoRig& rig, double u, double v, double w = 40, double h = 20,
                   double conf = 1.0, int cls = 0) {
    const auto& in = rig.intrinsics;
    return {cls, u / in.width_px, v / in.height_px, w / in.width_px, h / in.height_px, conf};
}

TEST(LocalizeFrame, PublishedDisparity) {
    const auto rig = wide_rig();
    const auto frame = StereoFrame::make(7, {box_px(rig, 2900, 1000)}, {box_px(rig, 1488, 1000)});
    const auto r = localize_frame(frame, rig, {});
    ASSERT_EQ(r.estimates.size(), 1u);
    EXPECT_EQ(r.frame_id, 7);
    EXPECT_NEAR(r.estimates[0].disparity_px, 1412.0, 1e-9);
    EXPECT_NEAR(r.estimates[0].depth_m, 6.42, 0.01);
    EXPECT_DOUBLE_EQ(r.estimates[0].world.z, r.estimates[0].depth_m);
}

TEST(LocalizeFrame, EmptyFrame) {
    const auto r = localize_frame(StereoFrame::make(3, {}, {}), hd_rig(), {});
    EXPECT_EQ(r.frame_id, 3);
    EXPECT_TRUE(r.estimates.empty());
    EXPECT_EQ(r.dropped_left, 0);
    EXPECT_EQ(r.dropped_right, 0);
}

TEST(LocalizeFrame, UnmatchedBoxesAreCounted) {
    const auto rig = hd_rig();
    const auto frame = StereoFrame::make(0, {box_px(rig, 700, 300), box_px(rig, 500, 600)},
                                         {box_px(rig, 650, 300)});
    const auto r = localize_frame(frame, rig, {});
    ASSERT_EQ(r.estimates.size(), 1u);
    EXPECT_EQ(r.dropped_left, 1);
    EXPECT_EQ(r.dropped_right, 0);
}

TEST(LocalizeFrame, ClassFilterAndConfidenceThreshold) {
    const auto rig = hd_rig();
    const auto frame = StereoFrame::make(
        0, {box_px(rig, 700, 300, 40, 20, 0.9, 3), box_px(rig, 800, 300, 40, 20, 0.2), box_px(rig, 900, 500, 40, 20, 0.8)},
        {box_px(rig, 650, 300, 40, 20, 0.9, 3), box_px(rig, 760, 300, 40, 20, 0.9), box_px(rig, 850, 500, 40, 20, 0.6)});
    LocalizeConfig cfg;
    cfg.confidence_threshold = 0.5;
    const auto r = localize_frame(frame, rig, cfg);
    ASSERT_EQ(r.estimates.size(), 1u);
    EXPECT_EQ(r.estimates[0].left_index, 2);
    EXPECT_EQ(r.estimates[0].right_index, 2);
    EXPECT_DOUBLE_EQ(r.estimates[0].confidence, 0.6);

    cfg.class_filter.clear();
    cfg.confidence_threshold = 0.0;
    EXPECT_EQ(localize_frame(frame, rig, cfg).estimates.size(), 3u);
}

TEST(LocalizeFrame, RejectsInconsistentFrames) {
    const auto rig = hd_rig();
    auto frame = StereoFrame::make(1, {box_px(rig, 700, 300)}, {box_px(rig, 650, 300)});
    frame.right.frame_id = 2;
    EXPECT_THROW(localize_frame(frame, rig, {}), InvalidFrame);
    frame = StereoFrame::make(1, {box_px(rig, 700, 300)}, {box_px(rig, 650, 300)});
    frame.left.side = Side::Right;
    EXPECT_THROW(localize_frame(frame, rig, {}), InvalidFrame);
    frame = StereoFrame::make(1, {BoundingBox{0, 0.5, 0.5, 0.0, 0.1, 1}}, {});
    EXPECT_THROW(localize_frame(frame, rig, {}), InvalidFrame);
}

TEST(LocalizeStream, ErrorNamesTheFrame) {
    const auto rig = hd_rig();
    std::vector<StereoFrame> frames{StereoFrame::make(0, {}, {}), StereoFrame::make(41, {}, {})};
    frames[1].left.frame_id = 5;
    const std::vector<StereoRig> rigs{rig};
    for (int threads : {1, 2}) {
        try {
            localize_stream(frames, rigs, {}, threads);
            ADD_FAILURE() << "expected InvalidFrame";
        } catch (const InvalidFrame& e) {
            EXPECT_NE(std::string(e.what()).find("frame 41"), std::string::npos) << e.what();
        }
    }
    EXPECT_THROW(localize_stream_serial(frames, std::vector<StereoRig>{rig, rig, rig}, {}), InvalidArgument);
}

SceneConfig three_drone_scene(std::uint64_t seed, int frames) {
    SceneConfig cfg;
    cfg.num_targets = 3;
    cfg.depth_range_m = {4, 12};
    cfg.lateral_range_m = {-2, 2};
    cfg.num_frames = frames;
    cfg.rng_seed = seed;
    return cfg;
}

TEST(LocalizeFrame, NoiselessSimulatedFrameIsExact) {
    const auto rig = hd_rig();
    const Scene scene = generate_scene(three_drone_scene(4, 20), rig);
    const auto rigs = scene.frame_rigs(rig);
    std::map<std::pair<long long, int>, GroundTruthRecord> truth;
    for (const auto& t : scene.truth)
        truth[{t.frame_id, t.target_id}] = t;
    int checked = 0;
    for (std::size_t i = 0; i < scene.frames.size(); ++i) {
        const auto& sf = scene.frames[i];
        const auto r = localize_frame(sf.frame, rigs[i], {});
        for (const auto& e : r.estimates) {
            const int id = sf.left_targets[e.left_index];
            ASSERT_EQ(id, sf.right_targets[e.right_index]) << "frame " << sf.frame.frame_id;
            const auto& t = truth.at({sf.frame.frame_id, id});
            EXPECT_NEAR(e.depth_m, t.depth_m, 1e-6);
            EXPECT_NEAR((e.world.vec() - t.world.vec()).norm(), 0.0, 1e-6);
            ++checked;
        }
    }
    EXPECT_GE(checked, 30);
}

TEST(PipelineProperty, ConservationAndDepthIdentity) {
    const auto rig = hd_rig();
    SceneConfig cfg = three_drone_scene(9, 200);
    cfg.noise = {1.5, true, 0.2};
    const Scene scene = generate_scene(cfg, rig);
    const auto rigs = scene.frame_rigs(rig);
    const double k = depth_constant(rig);
    for (std::size_t i = 0; i < scene.frames.size(); ++i) {
        const auto& f = scene.frames[i].frame;
        const auto r = localize_frame(f, rigs[i], {});
        const int n = static_cast<int>(r.estimates.size());
        EXPECT_EQ(n + r.dropped_left, static_cast<int>(f.left.boxes.size()));
        EXPECT_EQ(n + r.dropped_right, static_cast<int>(f.right.boxes.size()));
        EXPECT_LE(n, static_cast<int>(std::min(f.left.boxes.size(), f.right.boxes.size())));
        for (int j = 0; j < n; ++j) {
            const auto& e = r.estimates[j];
            EXPECT_EQ(e.target_ordinal, j);
            EXPECT_NEAR(e.depth_m * e.disparity_px, k, 1e-12 * k);
            EXPECT_GT(e.depth_m, 0.0);
        }
    }
}

TEST(PipelineProperty, ParallelMatchesSerial) {
    const auto rig = hd_rig();
    SceneConfig cfg = three_drone_scene(10, 300);
    cfg.noise = {0.8, false, 0.1};
    const Scene scene = generate_scene(cfg, rig);
    const auto frames = scene.stereo_frames();
    const auto rigs = scene.frame_rigs(rig);
    const auto serial = localize_stream_serial(frames, rigs, {});
    for (int threads : {1, 2, 4})
        EXPECT_EQ(localize_stream(frames, rigs, {}, threads), serial);
}

TEST(PipelineProperty, FramesAreIndependent) {
    const auto rig = hd_rig();
    const Scene scene = generate_scene(three_drone_scene(12, 60), rig);
    const auto frames = scene.stereo_frames();
    const auto rigs = scene.frame_rigs(rig);
    const auto base = localize_stream_serial(frames, rigs, {});

    std::vector<std::size_t> order(frames.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(1);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<StereoFrame> pf;
    std::vector<StereoRig> pr;
    for (auto i : order) {
        pf.push_back(frames[i]);
        pr.push_back(rigs[i]);
    }
    const auto permuted = localize_stream(pf, pr, {}, 2);
    for (std::size_t k = 0; k < order.size(); ++k)
        EXPECT_EQ(permuted[k], base[order[k]]);
}

}  // namespace
}  // namespace stereoloc
