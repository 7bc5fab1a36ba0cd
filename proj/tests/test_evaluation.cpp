#include <random>

#include <gtest/gtest.h>

#include "stereoloc/errors.hpp"
#include "stereoloc/evaluation.hpp"

namespace stereoloc {
namespace {

DroneEstimate estimate(long long frame, int ordinal, WorldPoint w, double depth) {
    DroneEstimate e;
    e.frame_id = frame;
    e.target_ordinal = ordinal;
    e.world = w;
    e.depth_m = depth;
    e.disparity_px = 1.0;
    return e;
}

GroundTruthRecord truth(long long frame, int id, WorldPoint w, double depth, bool visible = true) {
    return {frame, id, w, depth, visible};
}

TEST(MatchEstimates, NearestWithinRadius) {
    const std::vector<DroneEstimate> es{estimate(0, 0, {0, 0, 5.1}, 5.1), estimate(0, 1, {3, 0, 5}, 5)};
    const std::vector<GroundTruthRecord> ts{truth(0, 0, {3, 0, 5.2}, 5.2), truth(0, 1, {0, 0, 5}, 5)};
    const auto m = match_estimates_to_truth(es, ts);
    ASSERT_EQ(m.matches.size(), 2u);
    EXPECT_EQ(m.matches[0].truth.target_id, 1);
    EXPECT_EQ(m.matches[1].truth.target_id, 0);
    EXPECT_NEAR(m.matches[0].distance_m, 0.1, 1e-12);
    EXPECT_EQ(m.missed, 0);
    EXPECT_EQ(m.spurious, 0);
}

TEST(MatchEstimates, GateCountsMissedAndSpurious) {
    const std::vector<DroneEstimate> es{estimate(0, 0, {0, 0, 5}, 5), estimate(1, 0, {0, 0, 5}, 5)};
    const std::vector<GroundTruthRecord> ts{truth(0, 0, {2, 0, 5}, 5), truth(2, 0, {0, 0, 5}, 5),
                                            truth(1, 0, {0, 0, 5}, 5, false)};
    const auto m = match_estimates_to_truth(es, ts, 1.0);
    EXPECT_TRUE(m.matches.empty());
    EXPECT_EQ(m.missed, 2);  // invisible truth does not count
    EXPECT_EQ(m.spurious, 2);
}

TEST(MatchEstimates, PrefersMoreMatchesOverShorterDistance) {
    // Greedy nearest would pair estimate 0 with truth 0 and strand estimate 1.
    const std::vector<DroneEstimate> es{estimate(0, 0, {0, 0, 5}, 5), estimate(0, 1, {-0.9, 0, 5}, 5)};
    const std::vector<GroundTruthRecord> ts{truth(0, 0, {0.05, 0, 5}, 5), truth(0, 1, {0.8, 0, 5}, 5)};
    const auto m = match_estimates_to_truth(es, ts, 1.0);
    ASSERT_EQ(m.matches.size(), 2u);
    EXPECT_EQ(m.matches[0].truth.target_id, 1);
    EXPECT_EQ(m.matches[1].truth.target_id, 0);
}

ErrorTable table_from(const std::vector<double>& disparity, const std::vector<double>& gt, double k) {
    MatchResult m;
    for (std::size_t i = 0; i < disparity.size(); ++i) {
        auto e = estimate(static_cast<long long>(i), 0, {0, 0, k / disparity[i]}, k / disparity[i]);
        e.disparity_px = disparity[i];
        m.matches.push_back({e, truth(static_cast<long long>(i), 0, {0, 0, gt[i]}, gt[i]), 0.0});
    }
    return depth_error_table(m);
}

TEST(DepthErrorTable, PublishedRows) {
    const std::vector<double> d{1412, 1274, 1173, 1104, 1089, 1028, 898, 963};
    const std::vector<double> gt{5.71, 5.93, 6.37, 6.54, 6.73, 6.93, 7.59, 7.70};
    const std::vector<double> pct{12.32, 19.97, 21.24, 25.62, 23.75, 27.25, 32.95, 22.27};
    const auto t = table_from(d, gt, 9070.86);
    ASSERT_EQ(t.rows.size(), 8u);
    for (std::size_t i = 0; i < 8; ++i) {
        EXPECT_EQ(t.rows[i].sample_no, static_cast<int>(i + 1));
        EXPECT_NEAR(t.rows[i].error_pct, pct[i], 0.25) << "row " << i + 1;
    }
    EXPECT_NEAR(t.summary.mean_error_pct, 23.2, 0.5);
    EXPECT_EQ(t.summary.n_samples, 8u);
}

TEST(DepthErrorTable, ExactEstimatesHaveZeroError) {
    const auto t = table_from({100, 50}, {10, 20}, 1000);
    EXPECT_EQ(t.summary.mean_error_pct, 0.0);
    EXPECT_EQ(t.summary.max_error_pct, 0.0);
}

TEST(DepthErrorTable, EmptyInput) {
    EXPECT_THROW(depth_error_table(MatchResult{}), EmptyInput);
    EXPECT_THROW(summarize({}), EmptyInput);
}

TEST(DepthErrorTable, CsvHeaderAndRows) {
    const auto t = table_from({100}, {10}, 1000);
    const auto csv = write_error_table_csv(t.rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "sample_no,frame_id,target_ordinal,target_id,disparity_px,z_depth_m,ground_truth_m,error_pct");
    EXPECT_NE(csv.find("\n1,0,0,0,100.000,10.0000,10.0000,0.00000\n"), std::string::npos) << csv;
}

std::vector<ErrorRow> trend_rows(double slope, double noise, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> depth(3, 12);
    std::normal_distribution<double> gauss(0, noise);
    std::vector<ErrorRow> rows;
    for (int i = 0; i < n; ++i) {
        ErrorRow r;
        r.ground_truth_m = depth(rng);
        r.error_pct = std::abs(slope * r.ground_truth_m + gauss(rng));
        rows.push_back(r);
    }
    return rows;
}

TEST(DepthTrend, IncreasingErrorHasNoInversions) {
    const auto t = depth_error_trend(trend_rows(1.0, 0.3, 2000, 1), 4, 3, 12);
    ASSERT_EQ(t.bins.size(), 4u);
    EXPECT_EQ(t.inversions, 0);
    EXPECT_EQ(t.significant_inversions, 0);
    std::size_t total = 0;
    for (const auto& b : t.bins)
        total += b.count;
    EXPECT_EQ(total, 2000u);
}

TEST(DepthTrend, DecreasingErrorIsFlagged) {
    auto rows = trend_rows(1.0, 0.3, 2000, 2);
    for (auto& r : rows)
        r.error_pct = 20.0 - r.error_pct;
    const auto t = depth_error_trend(rows, 4, 3, 12);
    EXPECT_EQ(t.inversions, 3);
    EXPECT_EQ(t.significant_inversions, 3);
}

TEST(DepthTrend, FlatErrorHasNoSignificantInversions) {
    const auto t = depth_error_trend(trend_rows(0.0, 1.0, 4000, 3), 4, 3, 12);
    EXPECT_LE(t.significant_inversions, 1);
}

StereoRig hd_rig() {
    StereoRig rig;
    rig.intrinsics = {0.004, 4e-6, 640, 360, 1280, 720};
    rig.baseline_m = 0.5;
    return rig;
}

TEST(BenchWorkload, SeededAndFullyVisible) {
    const auto a = make_bench_workload(5, 200, 7, hd_rig());
    const auto b = make_bench_workload(5, 200, 7, hd_rig());
    const auto c = make_bench_workload(5, 200, 8, hd_rig());
    EXPECT_EQ(workload_hash(a.stereo_frames()), workload_hash(b.stereo_frames()));
    EXPECT_NE(workload_hash(a.stereo_frames()), workload_hash(c.stereo_frames()));
    for (const auto& f : a.frames) {
        EXPECT_EQ(f.frame.left.boxes.size(), 5u);
        EXPECT_EQ(f.frame.right.boxes.size(), 5u);
    }
}

TEST(BenchPipeline, ReportsLatencyAndThroughput) {
    const auto rig = hd_rig();
    const auto scene = make_bench_workload(5, 500, 1, rig);
    const auto frames = scene.stereo_frames();
    const auto r = bench_pipeline(frames, rig, {}, 2, 2);
    EXPECT_EQ(r.frames, 500);
    EXPECT_GT(r.fps, 0.0);
    EXPECT_GT(r.parallel_fps, 0.0);
    EXPECT_LE(r.p50_us, r.p95_us);
    EXPECT_LE(r.p95_us, r.max_us);
    EXPECT_GT(r.estimates, 0u);
    const auto j = to_json(r);
    EXPECT_EQ(j["schema_version"], 1);
    EXPECT_TRUE(j["single_thread"].contains("fps"));
    EXPECT_EQ(j["parallel"]["threads"], 2);
    EXPECT_THROW(bench_pipeline(frames, rig, {}, 0), InvalidArgument);
}

TEST(BenchPipeline, MoreDronesCostMore) {
    const auto rig = hd_rig();
    const auto one = make_bench_workload(1, 2000, 3, rig);
    const auto ten = make_bench_workload(10, 2000, 3, rig);
    const auto r1 = bench_pipeline(one.stereo_frames(), rig, {}, 3);
    const auto r10 = bench_pipeline(ten.stereo_frames(), rig, {}, 3);
    EXPECT_GT(r10.mean_us, r1.mean_us);
}

}  // namespace
}  // namespace stereoloc
