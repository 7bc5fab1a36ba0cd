#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "stereoloc/pipeline.hpp"
#include "stereoloc/records.hpp"
#include "stereoloc/simulation.hpp"

namespace stereoloc {

struct TruthMatch {
    DroneEstimate estimate;
    GroundTruthRecord truth;
    double distance_m = 0.0;
};

struct MatchResult {
    std::vector<TruthMatch> matches;  ///< by frame, then target_ordinal
    int missed = 0;    ///< visible truth records without an estimate
    int spurious = 0;  ///< estimates without a truth record
};

/// Per frame, optimal assignment of estimates to visible truth records by
/// world distance, gated at radius_m.
MatchResult match_estimates_to_truth(std::span<const DroneEstimate> estimates,
                                     std::span<const GroundTruthRecord> truth, double radius_m = 1.0);

std::vector<DroneEstimate> flatten(std::span<const FrameResult> results);

struct ErrorRow {
    int sample_no = 0;  ///< 1-based
    long long frame_id = 0;
    int target_ordinal = 0;
    int target_id = 0;
    double disparity_px = 0.0;
    double z_depth_m = 0.0;
    double ground_truth_m = 0.0;
    double error_pct = 0.0;
};

struct EvalSummary {
    std::size_t n_samples = 0;
    double mean_error_pct = 0.0;
    double max_error_pct = 0.0;
    double mean_abs_error_m = 0.0;
    int matched = 0;
    int missed = 0;
    int spurious = 0;
};

struct ErrorTable {
    std::vector<ErrorRow> rows;
    EvalSummary summary;
};

/// 100 * |estimate - truth| / truth
inline double depth_error_pct(double estimate_m, double truth_m) {
    return 100.0 * std::abs(estimate_m - truth_m) / truth_m;
}

/// Rows in frame/ordinal order plus a summary computed from them.
/// Throws EmptyInput when there are no matches.
ErrorTable depth_error_table(const MatchResult& matched);

/// Summary statistics over already-built rows. Throws EmptyInput on no rows.
EvalSummary summarize(const std::vector<ErrorRow>& rows, int missed = 0, int spurious = 0);

std::string write_error_table_csv(const std::vector<ErrorRow>& rows);
nlohmann::json to_json(const EvalSummary& s);

/// Mean error per equal-width depth bin and adjacent-bin inversion analysis.
struct DepthTrend {
    struct Bin {
        double lo = 0.0;
        double hi = 0.0;
        std::size_t count = 0;
        double mean_error_pct = 0.0;
    };
    std::vector<Bin> bins;
    int inversions = 0;              ///< adjacent pairs where the mean decreases
    int significant_inversions = 0;  ///< decreases whose bootstrap CI excludes zero
};

/// Bootstrap CI level 95%; rows outside [lo, hi) are ignored.
DepthTrend depth_error_trend(const std::vector<ErrorRow>& rows, int bins, double lo, double hi,
                             int resamples = 1000, std::uint64_t seed = 1);

struct BenchReport {
    std::uint64_t seed = 0;
    int drones_per_frame = 0;
    int frames = 0;
    int repetitions = 0;
    std::uint64_t workload_hash = 0;
    double p50_us = 0.0;
    double p95_us = 0.0;
    double max_us = 0.0;
    double mean_us = 0.0;
    double fps = 0.0;  ///< single-threaded
    int threads = 1;
    double parallel_fps = 0.0;  ///< 0 when threads == 1
    std::size_t estimates = 0;  ///< per repetition
};

/// Seeded synthetic workload: `drones` visible targets per frame, fixed rig.
Scene make_bench_workload(int drones, int frames, std::uint64_t seed, const StereoRig& rig);

/// FNV-1a over the label-file text of every frame.
std::uint64_t workload_hash(std::span<const StereoFrame> frames);

/// Times localize_frame per frame (association and geometry only).
BenchReport bench_pipeline(std::span<const StereoFrame> frames, const StereoRig& rig,
                           const LocalizeConfig& cfg, int repetitions, int threads = 1);

nlohmann::json to_json(const BenchReport& r);

}  // namespace stereoloc
