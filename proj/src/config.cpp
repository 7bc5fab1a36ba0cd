#include "stereoloc/config.hpp"

#include <cmath>

#include "stereoloc/errors.hpp"
#include "stereoloc/records.hpp"

namespace stereoloc {

using nlohmann::json;

namespace {

std::string join(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

const json& require(const json& obj, const std::string& base, const std::string& key) {
    if (!obj.is_object())
        throw ConfigError(base.empty() ? "<root>" : base, "must be an object");
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError(join(base, key), "missing required field");
    return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number())
        throw ConfigError(path, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        throw ConfigError(path, "must be finite");
    return d;
}

long long integer(const json& v, const std::string& path) {
    if (!v.is_number_integer())
        throw ConfigError(path, "must be an integer");
    return v.get<long long>();
}

double positive(const json& v, const std::string& path) {
    const double d = number(v, path);
    if (!(d > 0.0))
        throw ConfigError(path, "must be > 0");
    return d;
}

std::pair<double, double> number_pair(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2)
        throw ConfigError(path, "must be a two-element array");
    return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
}

CameraIntrinsics parse_intrinsics(const json& obj, const std::string& base) {
    CameraIntrinsics in;
    in.focal_length_m = positive(require(obj, base, "focal_length_m"), join(base, "focal_length_m"));
    in.pixel_pitch_m = positive(require(obj, base, "pixel_pitch_m"), join(base, "pixel_pitch_m"));
    const auto& res = require(obj, base, "resolution");
    const auto res_path = join(base, "resolution");
    if (!res.is_array() || res.size() != 2)
        throw ConfigError(res_path, "must be [width_px, height_px]");
    const long long w = integer(res[0], res_path + "[0]");
    const long long h = integer(res[1], res_path + "[1]");
    if (w < 1 || h < 1)
        throw ConfigError(res_path, "dimensions must be >= 1");
    in.width_px = static_cast<int>(w);
    in.height_px = static_cast<int>(h);
    if (const json* pp = optional_field(obj, "principal_point")) {
        const auto [cx, cy] = number_pair(*pp, join(base, "principal_point"));
        in.cx_px = cx;
        in.cy_px = cy;
    } else {
        in.cx_px = 0.5 * in.width_px;
        in.cy_px = 0.5 * in.height_px;
    }
    const double f_px = in.focal_length_px();
    if (!std::isfinite(f_px) || !(f_px > 0.0))
        throw ConfigError(join(base, "focal_length_m"), "focal length in pixels is not finite");
    return in;
}

RigPose parse_pose(const json& obj, const std::string& base) {
    RigPose pose;
    if (const json* r = optional_field(obj, "rotation")) {
        const auto path = join(base, "rotation");
        if (!r->is_array() || r->size() != 3)
            throw ConfigError(path, "must be a 3x3 array");
        for (int i = 0; i < 3; ++i) {
            const auto& row = (*r)[i];
            if (!row.is_array() || row.size() != 3)
                throw ConfigError(path, "must be a 3x3 array");
            for (int j = 0; j < 3; ++j)
                pose.rotation(i, j) =
                    number(row[j], path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
    }
    if (const json* t = optional_field(obj, "translation")) {
        const auto path = join(base, "translation");
        if (!t->is_array() || t->size() != 3)
            throw ConfigError(path, "must be a 3-element array");
        for (int i = 0; i < 3; ++i)
            pose.translation(i) = number((*t)[i], path + "[" + std::to_string(i) + "]");
    }
    try {
        pose.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(join(base, "rotation"), e.what());
    }
    return pose;
}

StereoRig parse_rig(const json& obj) {
    const std::string base = "rig";
    if (!obj.is_object())
        throw ConfigError(base, "must be an object");
    StereoRig rig;
    rig.intrinsics = parse_intrinsics(obj, base);
    rig.baseline_m = positive(require(obj, base, "baseline_m"), "rig.baseline_m");
    if (const json* k = optional_field(obj, "depth_constant"))
        rig.depth_constant_override = positive(*k, "rig.depth_constant");
    if (const json* p = optional_field(obj, "pose"))
        rig.pose = parse_pose(*p, "rig.pose");
    if (const json* rc = optional_field(obj, "right_camera")) {
        const auto right = parse_intrinsics(*rc, "rig.right_camera");
        if (!(right == rig.intrinsics))
            throw ConfigError("rig.right_camera", "both cameras must share identical intrinsics");
    }
    return rig;
}

AssociationConfig parse_association(const json& obj) {
    const std::string base = "association";
    if (!obj.is_object())
        throw ConfigError(base, "must be an object");
    AssociationConfig a;
    if (const json* v = optional_field(obj, "max_y_diff_frac")) {
        a.max_y_diff_frac = positive(*v, "association.max_y_diff_frac");
        if (a.max_y_diff_frac > 1.0)
            throw ConfigError("association.max_y_diff_frac", "must be <= 1");
    }
    if (const json* v = optional_field(obj, "size_weight"))
        a.size_weight = positive(*v, "association.size_weight");
    if (const json* v = optional_field(obj, "min_disparity_px"))
        a.min_disparity_px = positive(*v, "association.min_disparity_px");
    if (const json* v = optional_field(obj, "max_disparity_px")) {
        a.max_disparity_px = positive(*v, "association.max_disparity_px");
        if (*a.max_disparity_px < a.min_disparity_px)
            throw ConfigError("association.max_disparity_px", "must be >= min_disparity_px");
    }
    return a;
}

SceneConfig parse_simulation(const json& obj) {
    const std::string base = "simulation";
    if (!obj.is_object())
        throw ConfigError(base, "must be an object");
    SceneConfig s;
    if (const json* v = optional_field(obj, "num_targets")) {
        s.num_targets = static_cast<int>(integer(*v, "simulation.num_targets"));
        if (s.num_targets < 1)
            throw ConfigError("simulation.num_targets", "must be >= 1");
    }
    if (const json* v = optional_field(obj, "depth_range_m")) {
        const auto [lo, hi] = number_pair(*v, "simulation.depth_range_m");
        if (!(lo > 0.0 && lo < hi))
            throw ConfigError("simulation.depth_range_m", "must satisfy 0 < min < max");
        s.depth_range_m = {lo, hi};
    }
    if (const json* v = optional_field(obj, "lateral_range_m")) {
        const auto [lo, hi] = number_pair(*v, "simulation.lateral_range_m");
        if (!(lo <= hi))
            throw ConfigError("simulation.lateral_range_m", "must satisfy min <= max");
        s.lateral_range_m = {lo, hi};
    }
    if (const json* v = optional_field(obj, "drone_extent_m")) {
        const std::string path = "simulation.drone_extent_m";
        if (!v->is_array() || v->size() != 3)
            throw ConfigError(path, "must be [width, length, height]");
        s.drone_extent_m = {positive((*v)[0], path + "[0]"), positive((*v)[1], path + "[1]"),
                            positive((*v)[2], path + "[2]")};
    }
    if (const json* v = optional_field(obj, "num_frames")) {
        s.num_frames = static_cast<int>(integer(*v, "simulation.num_frames"));
        if (s.num_frames < 1)
            throw ConfigError("simulation.num_frames", "must be >= 1");
    }
    if (const json* v = optional_field(obj, "rng_seed")) {
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
            throw ConfigError("simulation.rng_seed", "must be a non-negative integer");
        s.rng_seed = v->get<std::uint64_t>();
    }
    if (const json* v = optional_field(obj, "viewpoints")) {
        s.viewpoints = static_cast<int>(integer(*v, "simulation.viewpoints"));
        if (s.viewpoints < 0)
            throw ConfigError("simulation.viewpoints", "must be >= 0");
    }
    if (const json* n = optional_field(obj, "noise")) {
        if (!n->is_object())
            throw ConfigError("simulation.noise", "must be an object");
        if (const json* v = optional_field(*n, "pixel_sigma")) {
            s.noise.pixel_sigma = number(*v, "simulation.noise.pixel_sigma");
            if (s.noise.pixel_sigma < 0.0)
                throw ConfigError("simulation.noise.pixel_sigma", "must be >= 0");
        }
        if (const json* v = optional_field(*n, "quantize")) {
            if (!v->is_boolean())
                throw ConfigError("simulation.noise.quantize", "must be a boolean");
            s.noise.quantize = v->get<bool>();
        }
        if (const json* v = optional_field(*n, "miss_rate")) {
            s.noise.miss_rate = number(*v, "simulation.noise.miss_rate");
            if (s.noise.miss_rate < 0.0 || s.noise.miss_rate > 1.0)
                throw ConfigError("simulation.noise.miss_rate", "must be in [0, 1]");
        }
    }
    return s;
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("<root>", "must be an object");
    const auto version = integer(require(doc, "", "schema_version"), "schema_version");
    if (version != kSchemaVersion)
        throw ConfigError("schema_version", "unsupported version " + std::to_string(version));

    RunConfig cfg;
    cfg.rig = parse_rig(require(doc, "", "rig"));
    if (const json* a = optional_field(doc, "association"))
        cfg.localize.association = parse_association(*a);
    if (const json* cf = optional_field(doc, "class_filter")) {
        if (!cf->is_array())
            throw ConfigError("class_filter", "must be an array of class ids");
        cfg.localize.class_filter.clear();
        for (std::size_t i = 0; i < cf->size(); ++i)
            cfg.localize.class_filter.push_back(
                static_cast<int>(integer((*cf)[i], "class_filter[" + std::to_string(i) + "]")));
    }
    if (const json* ct = optional_field(doc, "confidence_threshold")) {
        cfg.localize.confidence_threshold = number(*ct, "confidence_threshold");
        if (cfg.localize.confidence_threshold < 0.0 || cfg.localize.confidence_threshold > 1.0)
            throw ConfigError("confidence_threshold", "must be in [0, 1]");
    }
    if (const json* s = optional_field(doc, "simulation"))
        cfg.simulation = parse_simulation(*s);
    if (const json* p = optional_field(doc, "paths")) {
        if (!p->is_object())
            throw ConfigError("paths", "must be an object");
        for (const char* key : {"input", "output"}) {
            if (const json* v = optional_field(*p, key)) {
                if (!v->is_string())
                    throw ConfigError(std::string("paths.") + key, "must be a string");
                (std::string_view(key) == "input" ? cfg.input_dir : cfg.output_dir) = v->get<std::string>();
            }
        }
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return parse_run_config(read_file(path));
}

StereoRig default_rig() {
    StereoRig rig;
    rig.intrinsics = {0.004, 4e-6, 640.0, 360.0, 1280, 720};
    rig.baseline_m = 0.5;
    return rig;
}

json to_json(const StereoRig& rig) {
    const auto& in = rig.intrinsics;
    json j;
    j["focal_length_m"] = in.focal_length_m;
    j["pixel_pitch_m"] = in.pixel_pitch_m;
    j["resolution"] = {in.width_px, in.height_px};
    j["principal_point"] = {in.cx_px, in.cy_px};
    j["baseline_m"] = rig.baseline_m;
    if (rig.depth_constant_override)
        j["depth_constant"] = *rig.depth_constant_override;
    json rot = json::array();
    for (int r = 0; r < 3; ++r)
        rot.push_back({rig.pose.rotation(r, 0), rig.pose.rotation(r, 1), rig.pose.rotation(r, 2)});
    j["pose"] = {{"rotation", rot},
                 {"translation", {rig.pose.translation.x(), rig.pose.translation.y(), rig.pose.translation.z()}}};
    return j;
}

json to_json(const SceneConfig& s) {
    return {{"num_targets", s.num_targets},
            {"depth_range_m", {s.depth_range_m.min, s.depth_range_m.max}},
            {"lateral_range_m", {s.lateral_range_m.min, s.lateral_range_m.max}},
            {"drone_extent_m", {s.drone_extent_m.width_m, s.drone_extent_m.length_m, s.drone_extent_m.height_m}},
            {"num_frames", s.num_frames},
            {"rng_seed", s.rng_seed},
            {"viewpoints", s.viewpoints},
            {"noise",
             {{"pixel_sigma", s.noise.pixel_sigma},
              {"quantize", s.noise.quantize},
              {"miss_rate", s.noise.miss_rate}}}};
}

json to_json(const LocalizeConfig& c) {
    json a = {{"max_y_diff_frac", c.association.max_y_diff_frac},
              {"size_weight", c.association.size_weight},
              {"min_disparity_px", c.association.min_disparity_px}};
    if (c.association.max_disparity_px)
        a["max_disparity_px"] = *c.association.max_disparity_px;
    return {{"association", a},
            {"class_filter", c.class_filter},
            {"confidence_threshold", c.confidence_threshold}};
}

json to_json(const RunConfig& cfg) {
    json j = to_json(cfg.localize);
    j["schema_version"] = kSchemaVersion;
    j["rig"] = to_json(cfg.rig);
    if (cfg.simulation)
        j["simulation"] = to_json(*cfg.simulation);
    json paths = json::object();
    if (cfg.input_dir)
        paths["input"] = *cfg.input_dir;
    if (cfg.output_dir)
        paths["output"] = *cfg.output_dir;
    if (!paths.empty())
        j["paths"] = paths;
    return j;
}

}  // namespace stereoloc
