#include "stereoloc/records.hpp"

#include <fstream>
#include <sstream>

#include "stereoloc/errors.hpp"
#include "stereoloc/text.hpp"

namespace stereoloc {

CsvTable CsvTable::parse(std::string_view content, const std::vector<std::string>& required) {
    CsvTable t;
    const auto all = text::lines(content);
    std::size_t k = 0;
    while (k < all.size() && text::trim(all[k]).empty())
        ++k;
    if (k == all.size())
        throw SchemaError("missing header row");
    const auto header = text::split(text::trim(all[k]), ',');
    for (std::size_t i = 0; i < header.size(); ++i)
        t.index_.emplace(std::string(text::trim(header[i])), i);
    for (const auto& col : required)
        if (!t.index_.contains(col))
            throw SchemaError("missing column '" + col + "'");
    for (std::size_t r = k + 1; r < all.size(); ++r) {
        const auto line = text::trim(all[r]);
        if (line.empty())
            continue;
        const auto fields = text::split(line, ',');
        if (fields.size() != header.size())
            throw SchemaError("row " + std::to_string(r + 1) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        std::vector<std::string> row;
        row.reserve(fields.size());
        for (auto f : fields)
            row.emplace_back(text::trim(f));
        t.rows_.push_back(std::move(row));
    }
    return t;
}

std::string_view CsvTable::get(std::size_t row, const std::string& column) const {
    const auto it = index_.find(column);
    if (it == index_.end())
        throw SchemaError("missing column '" + column + "'");
    return rows_.at(row)[it->second];
}

double CsvTable::real(std::size_t row, const std::string& column) const {
    const auto v = text::parse_double(get(row, column));
    if (!v)
        throw SchemaError("row " + std::to_string(row + 1) + ": column '" + column + "' is not a number");
    return *v;
}

long long CsvTable::integer(std::size_t row, const std::string& column) const {
    const auto v = text::parse_int(get(row, column));
    if (!v)
        throw SchemaError("row " + std::to_string(row + 1) + ": column '" + column +
                          "' is not an integer");
    return *v;
}

namespace {

void append_real(std::string& out, double v) {
    out += ',';
    out += text::general_exact(v, 6);
}

std::vector<std::string> columns_of(std::string_view header) {
    std::vector<std::string> out;
    for (auto c : text::split(header, ','))
        out.emplace_back(c);
    return out;
}

}  // namespace

std::string write_estimates_csv(const std::vector<FrameResult>& results) {
    std::string out(kEstimatesHeader);
    out += '\n';
    for (const auto& r : results)
        for (const auto& e : r.estimates) {
            out += std::to_string(e.frame_id);
            out += ',';
            out += std::to_string(e.target_ordinal);
            for (double v : {e.disparity_px, e.depth_m, e.world.x, e.world.y, e.world.z, e.confidence})
                append_real(out, v);
            out += '\n';
        }
    return out;
}

std::vector<DroneEstimate> read_estimates_csv(std::string_view content) {
    const auto t = CsvTable::parse(content, columns_of(kEstimatesHeader));
    std::vector<DroneEstimate> out;
    out.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        DroneEstimate e;
        e.frame_id = t.integer(i, "frame_id");
        e.target_ordinal = static_cast<int>(t.integer(i, "target_ordinal"));
        e.disparity_px = t.real(i, "disparity_px");
        e.depth_m = t.real(i, "depth_m");
        e.world = {t.real(i, "x_m"), t.real(i, "y_m"), t.real(i, "z_m")};
        e.confidence = t.real(i, "confidence");
        out.push_back(e);
    }
    return out;
}

std::string write_truth_csv(const std::vector<GroundTruthRecord>& truth) {
    std::string out(kTruthHeader);
    out += '\n';
    for (const auto& g : truth) {
        out += std::to_string(g.frame_id);
        out += ',';
        out += std::to_string(g.target_id);
        for (double v : {g.world.x, g.world.y, g.world.z, g.depth_m})
            append_real(out, v);
        out += g.visible ? ",1\n" : ",0\n";
    }
    return out;
}

std::vector<GroundTruthRecord> read_truth_csv(std::string_view content) {
    const auto t = CsvTable::parse(content, columns_of(kTruthHeader));
    std::vector<GroundTruthRecord> out;
    out.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        GroundTruthRecord g;
        g.frame_id = t.integer(i, "frame_id");
        g.target_id = static_cast<int>(t.integer(i, "target_id"));
        g.world = {t.real(i, "x_m"), t.real(i, "y_m"), t.real(i, "z_m")};
        g.depth_m = t.real(i, "depth_m");
        g.visible = t.integer(i, "visible") != 0;
        out.push_back(g);
    }
    return out;
}

std::string write_poses_csv(const std::vector<FramePose>& poses) {
    std::string out(kPosesHeader);
    out += '\n';
    for (const auto& p : poses) {
        out += std::to_string(p.frame_id);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                append_real(out, p.pose.rotation(r, c));
        for (int k = 0; k < 3; ++k)
            append_real(out, p.pose.translation(k));
        out += '\n';
    }
    return out;
}

std::vector<FramePose> read_poses_csv(std::string_view content) {
    const auto t = CsvTable::parse(content, columns_of(kPosesHeader));
    std::vector<FramePose> out;
    out.reserve(t.size());
    static const char* const rot[3][3] = {
        {"r00", "r01", "r02"}, {"r10", "r11", "r12"}, {"r20", "r21", "r22"}};
    for (std::size_t i = 0; i < t.size(); ++i) {
        FramePose p;
        p.frame_id = t.integer(i, "frame_id");
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                p.pose.rotation(r, c) = t.real(i, rot[r][c]);
        p.pose.translation = {t.real(i, "tx_m"), t.real(i, "ty_m"), t.real(i, "tz_m")};
        out.push_back(p);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw IoError("write failed for '" + path + "'");
}

}  // namespace stereoloc
