#include "stereoloc/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include "stereoloc/assignment.hpp"
#include "stereoloc/errors.hpp"
#include "stereoloc/text.hpp"

namespace stereoloc {

std::vector<DroneEstimate> flatten(std::span<const FrameResult> results) {
    std::vector<DroneEstimate> out;
    for (const auto& r : results)
        out.insert(out.end(), r.estimates.begin(), r.estimates.end());
    return out;
}

MatchResult match_estimates_to_truth(std::span<const DroneEstimate> estimates,
                                     std::span<const GroundTruthRecord> truth, double radius_m) {
    std::map<long long, std::vector<const DroneEstimate*>> est_by_frame;
    std::map<long long, std::vector<const GroundTruthRecord*>> truth_by_frame;
    for (const auto& e : estimates)
        est_by_frame[e.frame_id].push_back(&e);
    for (const auto& t : truth)
        if (t.visible)
            truth_by_frame[t.frame_id].push_back(&t);
    for (auto& [id, v] : est_by_frame)
        std::stable_sort(v.begin(), v.end(), [](const DroneEstimate* a, const DroneEstimate* b) {
            return a->target_ordinal < b->target_ordinal;
        });

    std::vector<long long> frame_ids;
    for (const auto& [id, v] : est_by_frame)
        frame_ids.push_back(id);
    for (const auto& [id, v] : truth_by_frame)
        if (!est_by_frame.contains(id))
            frame_ids.push_back(id);
    std::sort(frame_ids.begin(), frame_ids.end());

    MatchResult out;
    for (long long id : frame_ids) {
        const auto& es = est_by_frame[id];
        const auto& ts = truth_by_frame[id];
        CostMatrix cost(es.size(), ts.size());
        for (std::size_t i = 0; i < es.size(); ++i)
            for (std::size_t j = 0; j < ts.size(); ++j) {
                const double d = (es[i]->world.vec() - ts[j]->world.vec()).norm();
                if (d <= radius_m)
                    cost(i, j) = d;
            }
        const auto a = solve_assignment(cost);
        for (const auto& [i, j] : a.pairs)
            out.matches.push_back({*es[i], *ts[j], cost(i, j)});
        out.spurious += static_cast<int>(es.size() - a.pairs.size());
        out.missed += static_cast<int>(ts.size() - a.pairs.size());
    }
    return out;
}

EvalSummary summarize(const std::vector<ErrorRow>& rows, int missed, int spurious) {
    if (rows.empty())
        throw EmptyInput("no matched samples to summarize");
    EvalSummary s;
    s.n_samples = rows.size();
    double sum_pct = 0.0, sum_abs = 0.0;
    for (const auto& r : rows) {
        sum_pct += r.error_pct;
        sum_abs += std::abs(r.z_depth_m - r.ground_truth_m);
        s.max_error_pct = std::max(s.max_error_pct, r.error_pct);
    }
    s.mean_error_pct = sum_pct / static_cast<double>(rows.size());
    s.mean_abs_error_m = sum_abs / static_cast<double>(rows.size());
    s.matched = static_cast<int>(rows.size());
    s.missed = missed;
    s.spurious = spurious;
    return s;
}

ErrorTable depth_error_table(const MatchResult& matched) {
    ErrorTable table;
    auto ordered = matched.matches;
    std::stable_sort(ordered.begin(), ordered.end(), [](const TruthMatch& a, const TruthMatch& b) {
        if (a.estimate.frame_id != b.estimate.frame_id)
            return a.estimate.frame_id < b.estimate.frame_id;
        return a.estimate.target_ordinal < b.estimate.target_ordinal;
    });
    int sample = 1;
    for (const auto& m : ordered) {
        ErrorRow r;
        r.sample_no = sample++;
        r.frame_id = m.estimate.frame_id;
        r.target_ordinal = m.estimate.target_ordinal;
        r.target_id = m.truth.target_id;
        r.disparity_px = m.estimate.disparity_px;
        r.z_depth_m = m.estimate.depth_m;
        r.ground_truth_m = m.truth.depth_m;
        r.error_pct = depth_error_pct(r.z_depth_m, r.ground_truth_m);
        table.rows.push_back(r);
    }
    table.summary = summarize(table.rows, matched.missed, matched.spurious);
    return table;
}

std::string write_error_table_csv(const std::vector<ErrorRow>& rows) {
    std::string out =
        "sample_no,frame_id,target_ordinal,target_id,disparity_px,z_depth_m,ground_truth_m,error_pct\n";
    for (const auto& r : rows) {
        out += std::to_string(r.sample_no) + ',' + std::to_string(r.frame_id) + ',' +
               std::to_string(r.target_ordinal) + ',' + std::to_string(r.target_id);
        for (double v : {r.disparity_px, r.z_depth_m, r.ground_truth_m, r.error_pct}) {
            out += ',';
            out += text::general_exact(v, 6);
        }
        out += '\n';
    }
    return out;
}

nlohmann::json to_json(const EvalSummary& s) {
    return {{"n_samples", s.n_samples},           {"mean_error_pct", s.mean_error_pct},
            {"max_error_pct", s.max_error_pct},   {"mean_abs_error_m", s.mean_abs_error_m},
            {"matched", s.matched},               {"missed", s.missed},
            {"spurious", s.spurious}};
}

DepthTrend depth_error_trend(const std::vector<ErrorRow>& rows, int bins, double lo, double hi,
                             int resamples, std::uint64_t seed) {
    DepthTrend trend;
    std::vector<std::vector<double>> members(bins);
    const double width = (hi - lo) / bins;
    for (const auto& r : rows) {
        if (r.ground_truth_m < lo || r.ground_truth_m >= hi)
            continue;
        const int b = std::min(bins - 1, static_cast<int>((r.ground_truth_m - lo) / width));
        members[b].push_back(r.error_pct);
    }
    auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v)
            s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    for (int b = 0; b < bins; ++b)
        trend.bins.push_back({lo + b * width, lo + (b + 1) * width, members[b].size(), mean(members[b])});

    std::mt19937_64 rng(seed);
    auto resample_mean = [&](const std::vector<double>& v) {
        std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
        double s = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k)
            s += v[pick(rng)];
        return s / static_cast<double>(v.size());
    };
    for (int b = 0; b + 1 < bins; ++b) {
        if (!(trend.bins[b + 1].mean_error_pct < trend.bins[b].mean_error_pct))
            continue;
        ++trend.inversions;
        if (members[b].empty() || members[b + 1].empty())
            continue;
        std::vector<double> diffs(resamples);
        for (auto& d : diffs)
            d = resample_mean(members[b + 1]) - resample_mean(members[b]);
        std::sort(diffs.begin(), diffs.end());
        const double upper = diffs[static_cast<std::size_t>(0.975 * (resamples - 1))];
        if (upper < 0.0)
            ++trend.significant_inversions;
    }
    return trend;
}

Scene make_bench_workload(int drones, int frames, std::uint64_t seed, const StereoRig& rig) {
    SceneConfig cfg;
    cfg.num_targets = drones;
    cfg.num_frames = frames;
    cfg.rng_seed = seed;
    cfg.viewpoints = 0;
    const double f_px = rig.intrinsics.focal_length_px();
    // Keep targets comfortably inside both images.
    // Disparity at z_min is a quarter of the image width.
    const double z_min = std::max(1.0, 4.0 * f_px * rig.baseline_m / rig.intrinsics.width_px);
    cfg.depth_range_m = {z_min, 4.0 * z_min};
    const double half_fov = 0.2 * std::min(rig.intrinsics.width_px, rig.intrinsics.height_px) / f_px;
    cfg.lateral_range_m = {-half_fov * z_min, half_fov * z_min};
    return generate_scene(cfg, rig);
}

std::uint64_t workload_hash(std::span<const StereoFrame> frames) {
    std::uint64_t h = 1469598103934665603ull;
    auto feed = [&h](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    for (const auto& f : frames) {
        feed(std::to_string(f.frame_id));
        feed(write_label_file(f.left));
        feed("|");
        feed(write_label_file(f.right));
    }
    return h;
}

namespace {

double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty())
        return 0.0;
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
    return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

}  // namespace

BenchReport bench_pipeline(std::span<const StereoFrame> frames, const StereoRig& rig,
                           const LocalizeConfig& cfg, int repetitions, int threads) {
    if (repetitions < 1)
        throw InvalidArgument("repetitions must be >= 1");
    using clock = std::chrono::steady_clock;
    BenchReport report;
    report.frames = static_cast<int>(frames.size());
    report.repetitions = repetitions;
    report.threads = std::max(1, threads);
    report.workload_hash = workload_hash(frames);

    std::vector<double> latencies_us;
    latencies_us.reserve(frames.size() * repetitions);
    std::size_t estimates = 0;
    const auto t0 = clock::now();
    for (int rep = 0; rep < repetitions; ++rep) {
        for (const auto& frame : frames) {
            const auto s = clock::now();
            const FrameResult r = localize_frame(frame, rig, cfg);
            const auto e = clock::now();
            latencies_us.push_back(std::chrono::duration<double, std::micro>(e - s).count());
            if (rep == 0)
                estimates += r.estimates.size();
        }
    }
    const double total_s = std::chrono::duration<double>(clock::now() - t0).count();
    report.estimates = estimates;
    std::sort(latencies_us.begin(), latencies_us.end());
    report.p50_us = quantile(latencies_us, 0.50);
    report.p95_us = quantile(latencies_us, 0.95);
    report.max_us = latencies_us.empty() ? 0.0 : latencies_us.back();
    double sum = 0.0;
    for (double l : latencies_us)
        sum += l;
    report.mean_us = latencies_us.empty() ? 0.0 : sum / static_cast<double>(latencies_us.size());
    report.fps = total_s > 0.0 ? static_cast<double>(latencies_us.size()) / total_s : 0.0;

    if (report.threads > 1) {
        const std::span<const StereoRig> one(&rig, 1);
        const auto p0 = clock::now();
        for (int rep = 0; rep < repetitions; ++rep)
            (void)localize_stream(frames, one, cfg, report.threads);
        const double ps = std::chrono::duration<double>(clock::now() - p0).count();
        report.parallel_fps = ps > 0.0 ? static_cast<double>(frames.size()) * repetitions / ps : 0.0;
    }
    return report;
}

nlohmann::json to_json(const BenchReport& r) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.workload_hash));
    nlohmann::json j = {
        {"schema_version", 1},
        {"workload",
         {{"seed", r.seed},
          {"drones_per_frame", r.drones_per_frame},
          {"frames", r.frames},
          {"repetitions", r.repetitions},
          {"estimates_per_repetition", r.estimates},
          {"hash", hash}}},
        {"single_thread",
         {{"p50_us", r.p50_us}, {"p95_us", r.p95_us}, {"max_us", r.max_us}, {"mean_us", r.mean_us}, {"fps", r.fps}}}};
    if (r.threads > 1)
        j["parallel"] = {{"threads", r.threads}, {"fps", r.parallel_fps}};
    return j;
}

}  // namespace stereoloc
