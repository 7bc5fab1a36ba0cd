#include "stereoloc/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>

#include "stereoloc/errors.hpp"
#include "stereoloc/evaluation.hpp"
#include "stereoloc/geometry.hpp"
#include "stereoloc/records.hpp"

namespace stereoloc {

using nlohmann::json;

namespace {

const std::vector<std::string> kProvenance = {"published", "identity", "hand-computed"};

std::vector<double> as_numbers(const json& v, const std::string& what) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& x : v) {
            if (!x.is_number())
                throw FixtureMalformed(what + ": expected numbers");
            out.push_back(x.get<double>());
        }
    } else {
        throw FixtureMalformed(what + ": expected a number or an array of numbers");
    }
    return out;
}

const json& input(const GoldenFixture& f, const std::string& key) {
    if (!f.inputs.contains(key))
        throw FixtureMalformed(f.name + ": missing input '" + key + "'");
    return f.inputs.at(key);
}

double input_number(const GoldenFixture& f, const std::string& key) {
    const auto v = as_numbers(input(f, key), f.name + "." + key);
    if (v.size() != 1)
        throw FixtureMalformed(f.name + ": input '" + key + "' must be a single number");
    return v[0];
}

// A rig whose focal length in pixels is exact: f_m = f_px with 1 m pitch.
StereoRig fixture_rig(const GoldenFixture& f) {
    StereoRig rig;
    const double f_px = f.inputs.contains("focal_length_px") ? input_number(f, "focal_length_px") : 1.0;
    double cx = 0.0, cy = 0.0;
    if (f.inputs.contains("principal_point")) {
        const auto pp = as_numbers(f.inputs.at("principal_point"), f.name + ".principal_point");
        if (pp.size() != 2)
            throw FixtureMalformed(f.name + ": principal_point must have two entries");
        cx = pp[0];
        cy = pp[1];
    }
    rig.intrinsics = {f_px, 1.0, cx, cy, static_cast<int>(std::max(1.0, 2 * cx)),
                      static_cast<int>(std::max(1.0, 2 * cy))};
    if (f.inputs.contains("focal_length_m") || f.inputs.contains("pixel_pitch_m")) {
        rig.intrinsics.focal_length_m = input_number(f, "focal_length_m");
        rig.intrinsics.pixel_pitch_m = input_number(f, "pixel_pitch_m");
    }
    rig.baseline_m = f.inputs.contains("baseline_m") ? input_number(f, "baseline_m") : 1.0;
    if (f.inputs.contains("depth_constant"))
        rig.depth_constant_override = input_number(f, "depth_constant");
    if (f.inputs.contains("pose_translation")) {
        const auto t = as_numbers(f.inputs.at("pose_translation"), f.name + ".pose_translation");
        if (t.size() != 3)
            throw FixtureMalformed(f.name + ": pose_translation must have three entries");
        rig.pose.translation = {t[0], t[1], t[2]};
    }
    return rig;
}

Eigen::Vector3d input_point(const GoldenFixture& f, const std::string& key) {
    const auto p = as_numbers(input(f, key), f.name + "." + key);
    if (p.size() != 3)
        throw FixtureMalformed(f.name + ": '" + key + "' must have three entries");
    return {p[0], p[1], p[2]};
}

std::map<std::string, std::vector<double>> compute(const GoldenFixture& f) {
    std::map<std::string, std::vector<double>> out;
    const StereoRig rig = fixture_rig(f);
    if (f.operation == "triangulate_depth") {
        for (double d : as_numbers(input(f, "disparities"), f.name + ".disparities"))
            out["depth_m"].push_back(triangulate_depth(d, rig));
        out["depth_constant"] = {depth_constant(rig)};
    } else if (f.operation == "project_and_triangulate") {
        const WorldPoint p = WorldPoint::from(input_point(f, "point"));
        const ImagePoint l = project(p, rig, Side::Left);
        const ImagePoint r = project(p, rig, Side::Right);
        const double d = disparity(l.u, r.u);
        out["left"] = {l.u, l.v};
        out["right"] = {r.u, r.v};
        out["disparity_px"] = {d};
        out["depth_m"] = {triangulate_depth(d, rig)};
    } else if (f.operation == "back_project") {
        const auto c = as_numbers(input(f, "centroid"), f.name + ".centroid");
        if (c.size() != 2)
            throw FixtureMalformed(f.name + ": centroid must have two entries");
        const WorldPoint w = back_project({c[0], c[1]}, input_number(f, "depth_m"), rig);
        out["world"] = {w.x, w.y, w.z};
    } else if (f.operation == "depth_error_table") {
        const auto disp = as_numbers(input(f, "disparities"), f.name + ".disparities");
        const auto gt = as_numbers(input(f, "ground_truth_m"), f.name + ".ground_truth_m");
        if (disp.size() != gt.size() || disp.empty())
            throw FixtureMalformed(f.name + ": disparities and ground_truth_m must be non-empty and equal length");
        MatchResult m;
        for (std::size_t i = 0; i < disp.size(); ++i) {
            DroneEstimate e;
            e.frame_id = static_cast<long long>(i);
            e.disparity_px = disp[i];
            e.depth_m = triangulate_depth(disp[i], rig);
            GroundTruthRecord t;
            t.frame_id = e.frame_id;
            t.depth_m = gt[i];
            t.visible = true;
            m.matches.push_back({e, t, 0.0});
        }
        const ErrorTable table = depth_error_table(m);
        for (const auto& r : table.rows) {
            out["depth_m"].push_back(r.z_depth_m);
            out["error_pct"].push_back(r.error_pct);
        }
        out["mean_error_pct"] = {table.summary.mean_error_pct};
    } else {
        throw FixtureMalformed(f.name + ": unknown operation '" + f.operation + "'");
    }
    return out;
}

}  // namespace

GoldenFixture GoldenFixture::from_json(const json& doc) {
    if (!doc.is_object())
        throw FixtureMalformed("fixture must be a JSON object");
    for (const char* key : {"name", "operation", "inputs", "expected", "tolerance", "provenance"})
        if (!doc.contains(key))
            throw FixtureMalformed(std::string("fixture lacks '") + key + "'");
    GoldenFixture f;
    if (!doc["name"].is_string() || !doc["operation"].is_string())
        throw FixtureMalformed("fixture name and operation must be strings");
    f.name = doc["name"].get<std::string>();
    f.operation = doc["operation"].get<std::string>();
    f.inputs = doc["inputs"];
    f.expected = doc["expected"];
    f.tolerance = doc["tolerance"];
    f.provenance = doc["provenance"];
    if (!f.inputs.is_object() || !f.expected.is_object() || f.expected.empty())
        throw FixtureMalformed(f.name + ": inputs and expected must be objects, expected non-empty");
    if (!f.provenance.is_object())
        throw FixtureMalformed(f.name + ": provenance must map expected keys to a source");
    for (const auto& [key, value] : f.expected.items()) {
        as_numbers(value, f.name + ".expected." + key);
        if (!f.provenance.contains(key) || !f.provenance[key].is_string() ||
            std::find(kProvenance.begin(), kProvenance.end(), f.provenance[key].get<std::string>()) ==
                kProvenance.end())
            throw FixtureMalformed(f.name + ": expected '" + key + "' lacks a recognized provenance");
        const json& tol = f.tolerance.is_object() ? f.tolerance.value(key, json()) : f.tolerance;
        if (!tol.is_number() || tol.get<double>() < 0.0)
            throw FixtureMalformed(f.name + ": no non-negative tolerance for '" + key + "'");
    }
    return f;
}

GoldenFixture GoldenFixture::load(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw FixtureMalformed(path + ": " + e.what());
    }
    return from_json(doc);
}

bool FixtureReport::passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const FixtureCheck& c) { return c.ok; });
}

FixtureReport run_fixture(const GoldenFixture& f) {
    const auto actual = compute(f);
    FixtureReport report{f.name, {}};
    for (const auto& [key, value] : f.expected.items()) {
        const auto it = actual.find(key);
        if (it == actual.end())
            throw FixtureMalformed(f.name + ": operation '" + f.operation + "' has no output '" + key + "'");
        const auto want = as_numbers(value, key);
        if (want.size() != it->second.size())
            throw FixtureMalformed(f.name + ": '" + key + "' expects " + std::to_string(want.size()) +
                                   " values, operation produced " + std::to_string(it->second.size()));
        const double tol = (f.tolerance.is_object() ? f.tolerance.at(key) : f.tolerance).get<double>();
        for (std::size_t i = 0; i < want.size(); ++i) {
            const double got = it->second[i];
            report.checks.push_back({key, i, want[i], got, tol, std::abs(got - want[i]) <= tol});
        }
    }
    return report;
}

std::vector<GoldenFixture> load_fixture_dir(const std::string& directory) {
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(directory, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    if (ec)
        throw IoError("cannot list '" + directory + "': " + ec.message());
    std::sort(files.begin(), files.end());
    std::vector<GoldenFixture> out;
    for (const auto& p : files)
        out.push_back(GoldenFixture::load(p.string()));
    return out;
}

}  // namespace stereoloc
