#include "stereoloc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <regex>

#include <CLI11.hpp>

#include "stereoloc/config.hpp"
#include "stereoloc/errors.hpp"
#include "stereoloc/evaluation.hpp"
#include "stereoloc/fixtures.hpp"
#include "stereoloc/pipeline.hpp"
#include "stereoloc/records.hpp"
#include "stereoloc/simulation.hpp"

namespace stereoloc::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string in;
    std::string out;
    std::string truth;
    int threads = 1;
    std::optional<std::uint64_t> seed;
    double radius_m = 1.0;
    int drones = 5;
    int frames = 10000;
    int repetitions = 1;
};

/// Failure that maps straight to an exit code.
struct Exit {
    int code;
    std::string message;
};

RunConfig load_config(const std::string& path) {
    if (path.empty())
        throw Exit{kConfig, "--config is required"};
    try {
        return load_run_config(path);
    } catch (const ConfigError& e) {
        throw Exit{kConfig, std::string("config error: ") + e.what()};
    } catch (const IoError& e) {
        throw Exit{kConfig, std::string("config error: ") + e.what()};
    }
}

void ensure_parent(const std::string& file) {
    const fs::path parent = fs::path(file).parent_path();
    if (parent.empty())
        return;
    std::error_code ec;
    fs::create_directories(parent, ec);
    if (ec || !fs::is_directory(parent))
        throw IoError("cannot create directory '" + parent.string() + "'");
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    RunConfig cfg = load_config(o.config);
    if (!cfg.simulation)
        throw Exit{kConfig, "config error: simulation: missing section"};
    SceneConfig scene_cfg = *cfg.simulation;
    if (o.seed)
        scene_cfg.rng_seed = *o.seed;
    const std::string dir = !o.out.empty() ? o.out : cfg.output_dir.value_or("");
    if (dir.empty())
        throw Exit{kConfig, "--out is required"};
    if (cfg.rig.depth_constant_override)
        err << "warning: rig.depth_constant is ignored by the simulator's projection\n";

    Scene scene;
    try {
        scene = generate_scene(scene_cfg, cfg.rig);
    } catch (const InfeasibleConfig& e) {
        throw Exit{kConfig, std::string("config error: simulation: ") + e.what()};
    } catch (const InvalidArgument& e) {
        throw Exit{kConfig, std::string("config error: ") + e.what()};
    }
    emit_dataset(scene, scene_cfg, cfg.rig, dir, o.threads);
    std::size_t detections = 0;
    for (const auto& f : scene.frames)
        detections += f.frame.left.boxes.size() + f.frame.right.boxes.size();
    out << "simulated " << scene.frames.size() << " frames, " << scene_cfg.num_targets
        << " targets per frame, " << detections << " detections, seed " << scene_cfg.rng_seed << " -> "
        << dir << "\n";
    return kOk;
}

struct FrameFiles {
    std::optional<fs::path> left;
    std::optional<fs::path> right;
};

int cmd_localize(const Options& o, std::ostream& out, std::ostream& err) {
    RunConfig cfg = load_config(o.config);
    const std::string in_dir = !o.in.empty() ? o.in : cfg.input_dir.value_or("");
    const std::string out_path = !o.out.empty() ? o.out : cfg.output_dir.value_or("");
    if (in_dir.empty() || out_path.empty())
        throw Exit{kConfig, "--in and --out are required"};
    if (!fs::is_directory(in_dir))
        throw IoError("input directory '" + in_dir + "' does not exist");

    static const std::regex name_re(R"(^(.+)_(\d+)_(left|right)\.txt$)");
    std::map<long long, FrameFiles> by_frame;
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        if (!entry.is_regular_file())
            continue;
        const std::string name = entry.path().filename().string();
        std::smatch m;
        if (!std::regex_match(name, m, name_re))
            continue;
        auto& slot = by_frame[std::stoll(m[2].str())];
        (m[3].str() == "left" ? slot.left : slot.right) = entry.path();
    }
    if (by_frame.empty())
        throw Exit{kEmptyInput, "no label files found in '" + in_dir + "'"};

    std::vector<StereoFrame> frames;
    int skipped = 0;
    for (const auto& [id, files] : by_frame) {
        if (!files.left || !files.right) {
            err << "warning: frame " << id << " has no " << (files.left ? "right" : "left")
                << " label file; skipped\n";
            ++skipped;
            continue;
        }
        StereoFrame frame;
        frame.frame_id = id;
        for (Side side : {Side::Left, Side::Right}) {
            const fs::path& p = side == Side::Left ? *files.left : *files.right;
            try {
                (side == Side::Left ? frame.left : frame.right) = parse_label_file(read_file(p.string()), id, side);
            } catch (const LabelParseError& e) {
                throw Exit{kSchema, p.string() + ": " + e.what()};
            }
        }
        frames.push_back(std::move(frame));
    }
    if (frames.empty())
        throw Exit{kEmptyInput, "no complete stereo frames in '" + in_dir + "'"};

    std::vector<StereoRig> rigs{cfg.rig};
    const fs::path poses_path = fs::path(in_dir) / "rig_poses.csv";
    if (fs::exists(poses_path)) {
        std::map<long long, RigPose> poses;
        try {
            for (const auto& p : read_poses_csv(read_file(poses_path.string())))
                poses[p.frame_id] = p.pose;
        } catch (const SchemaError& e) {
            throw Exit{kSchema, poses_path.string() + ": " + e.what()};
        }
        rigs.clear();
        for (const auto& f : frames) {
            StereoRig r = cfg.rig;
            if (const auto it = poses.find(f.frame_id); it != poses.end())
                r.pose = it->second;
            rigs.push_back(r);
        }
    }

    const auto results = localize_stream(frames, rigs, cfg.localize, o.threads);
    ensure_parent(out_path);
    write_file(out_path, write_estimates_csv(results));
    std::size_t estimates = 0;
    for (const auto& r : results)
        estimates += r.estimates.size();
    out << "localized " << frames.size() << " frames, " << estimates << " estimates, skipped " << skipped
        << " frames with a missing side -> " << out_path << "\n";
    return kOk;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream&) {
    if (o.in.empty() || o.truth.empty() || o.out.empty())
        throw Exit{kConfig, "--estimates, --truth and --out are required"};
    std::vector<DroneEstimate> estimates;
    std::vector<GroundTruthRecord> truth;
    try {
        estimates = read_estimates_csv(read_file(o.in));
    } catch (const SchemaError& e) {
        throw Exit{kSchema, o.in + ": " + e.what()};
    }
    try {
        truth = read_truth_csv(read_file(o.truth));
    } catch (const SchemaError& e) {
        throw Exit{kSchema, o.truth + ": " + e.what()};
    }
    const MatchResult matched = match_estimates_to_truth(estimates, truth, o.radius_m);
    ErrorTable table;
    try {
        table = depth_error_table(matched);
    } catch (const EmptyInput&) {
        throw Exit{kEmptyInput, "no estimate matched a visible ground-truth record"};
    }
    std::error_code ec;
    fs::create_directories(o.out, ec);
    if (ec || !fs::is_directory(o.out))
        throw IoError("cannot create directory '" + o.out + "'");
    write_file((fs::path(o.out) / "error_table.csv").string(), write_error_table_csv(table.rows));
    write_file((fs::path(o.out) / "summary.json").string(), to_json(table.summary).dump(2) + "\n");
    const auto& s = table.summary;
    out << "mean error " << s.mean_error_pct << "%, max error " << s.max_error_pct << "% over "
        << s.n_samples << " samples (missed " << s.missed << ", spurious " << s.spurious << ")\n";
    return kOk;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream&) {
    if (o.drones < 1 || o.frames < 1 || o.repetitions < 1)
        throw Exit{kConfig, "--drones, --frames and --repetitions must be >= 1"};
    RunConfig cfg;
    if (!o.config.empty())
        cfg = load_config(o.config);
    else
        cfg.rig = default_rig();
    cfg.rig.pose = RigPose::identity();
    const std::uint64_t seed = o.seed.value_or(cfg.simulation ? cfg.simulation->rng_seed : 1);
    Scene workload;
    try {
        workload = make_bench_workload(o.drones, o.frames, seed, cfg.rig);
    } catch (const Error& e) {
        throw Exit{kConfig, std::string("config error: ") + e.what()};
    }
    const auto frames = workload.stereo_frames();
    BenchReport report = bench_pipeline(frames, cfg.rig, cfg.localize, o.repetitions, o.threads);
    report.seed = seed;
    report.drones_per_frame = o.drones;
    const std::string path = o.out.empty() ? "bench.json" : o.out;
    ensure_parent(path);
    write_file(path, to_json(report).dump(2) + "\n");
    out << "bench: " << report.frames << " frames x " << report.repetitions << ", " << o.drones
        << " drones/frame, p50 " << report.p50_us << " us, p95 " << report.p95_us << " us, " << report.fps
        << " frames/s";
    if (report.threads > 1)
        out << ", " << report.parallel_fps << " frames/s on " << report.threads << " threads";
    out << " -> " << path << "\n";
    return kOk;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream&) {
    const RunConfig cfg = load_config(o.config);
    out << to_json(cfg).dump(2) << "\n";
    return kOk;
}

int cmd_fixtures(const Options& o, std::ostream& out, std::ostream&) {
    if (o.in.empty())
        throw Exit{kConfig, "--in is required"};
    std::vector<GoldenFixture> fixtures;
    try {
        fixtures = load_fixture_dir(o.in);
    } catch (const FixtureMalformed& e) {
        throw Exit{kSchema, e.what()};
    }
    if (fixtures.empty())
        throw Exit{kEmptyInput, "no fixtures in '" + o.in + "'"};
    int failed = 0;
    for (const auto& f : fixtures) {
        FixtureReport r;
        try {
            r = run_fixture(f);
        } catch (const FixtureMalformed& e) {
            throw Exit{kSchema, e.what()};
        }
        out << (r.passed() ? "PASS " : "FAIL ") << r.name << "\n";
        for (const auto& c : r.checks)
            if (!c.ok)
                out << "  " << c.field << "[" << c.index << "]: expected " << c.expected << " got "
                    << c.actual << " (tol " << c.tolerance << ")\n";
        failed += r.passed() ? 0 : 1;
    }
    return failed == 0 ? kOk : kSchema;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stereo bounding-box drone localization: simulate, localize, evaluate, bench"};
    app.require_subcommand(1);
    Options o;

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic stereo detection dataset");
    simulate->add_option("--config", o.config, "Run config JSON");
    simulate->add_option("--out", o.out, "Output directory");
    simulate->add_option("--seed", o.seed, "Override simulation.rng_seed");
    simulate->add_option("--threads", o.threads, "Worker threads for file emission");

    auto* localize = app.add_subcommand("localize", "Localize targets from paired label files");
    localize->add_option("--config", o.config, "Run config JSON");
    localize->add_option("--in", o.in, "Directory of <prefix>_<frame>_{left,right}.txt files");
    localize->add_option("--out", o.out, "Estimates CSV path");
    localize->add_option("--threads", o.threads, "Worker threads over frames");

    auto* evaluate = app.add_subcommand("evaluate", "Score estimates against ground truth");
    evaluate->add_option("--estimates,--in", o.in, "Estimates CSV");
    evaluate->add_option("--truth", o.truth, "ground_truth.csv");
    evaluate->add_option("--out", o.out, "Output directory");
    evaluate->add_option("--radius", o.radius_m, "Match radius in meters")->check(CLI::PositiveNumber);

    auto* bench = app.add_subcommand("bench", "Time association and triangulation");
    bench->add_option("--config", o.config, "Run config JSON (optional)");
    bench->add_option("--drones", o.drones, "Targets per frame");
    bench->add_option("--frames", o.frames, "Frames in the workload");
    bench->add_option("--repetitions", o.repetitions, "Passes over the workload");
    bench->add_option("--threads", o.threads, "Also time the OpenMP stream with N threads");
    bench->add_option("--seed", o.seed, "Workload seed");
    bench->add_option("--out", o.out, "bench.json path");

    auto* validate = app.add_subcommand("validate", "Validate a config and print it resolved");
    validate->add_option("--config", o.config, "Run config JSON");

    auto* fixtures = app.add_subcommand("fixtures", "Run golden fixtures");
    fixtures->add_option("--in", o.in, "Fixture directory");

    for (auto* sub : {simulate, localize, bench})
        if (auto* opt = sub->get_option_no_throw("--threads"))
            opt->check(CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfig;
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(o, out, err);
        if (localize->parsed())
            return cmd_localize(o, out, err);
        if (evaluate->parsed())
            return cmd_evaluate(o, out, err);
        if (bench->parsed())
            return cmd_bench(o, out, err);
        if (validate->parsed())
            return cmd_validate(o, out, err);
        if (fixtures->parsed())
            return cmd_fixtures(o, out, err);
    } catch (const Exit& e) {
        err << "error: " << e.message << "\n";
        return e.code;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kSchema;
    } catch (const InvalidFrame& e) {
        err << "error: " << e.what() << "\n";
        return kSchema;
    }
    return kConfig;
}

}  // namespace stereoloc::cli
