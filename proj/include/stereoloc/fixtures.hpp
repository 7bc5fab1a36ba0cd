#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace stereoloc {

/// Golden data with expected values, tolerances and per-value provenance.
///
/// File schema: {"name", "operation", "inputs", "expected", "tolerance",
/// "provenance"}. `expected` maps output names to a number or array of
/// numbers; `tolerance` is one absolute tolerance or an object keyed like
/// `expected`; `provenance` maps every expected key to "published",
/// "identity" or "hand-computed".
///
/// Operations: triangulate_depth, project_and_triangulate, back_project,
/// depth_error_table.
struct GoldenFixture {
    std::string name;
    std::string operation;
    nlohmann::json inputs;
    nlohmann::json expected;
    nlohmann::json tolerance;
    nlohmann::json provenance;

    /// Throws FixtureMalformed.
    static GoldenFixture from_json(const nlohmann::json& doc);
    static GoldenFixture load(const std::string& path);
};

struct FixtureCheck {
    std::string field;
    std::size_t index = 0;
    double expected = 0.0;
    double actual = 0.0;
    double tolerance = 0.0;
    bool ok = false;
};

struct FixtureReport {
    std::string name;
    std::vector<FixtureCheck> checks;

    bool passed() const;
};

/// Throws FixtureMalformed for unknown operations or missing inputs.
FixtureReport run_fixture(const GoldenFixture& fixture);

/// Every *.json file under `directory`, sorted by file name.
std::vector<GoldenFixture> load_fixture_dir(const std::string& directory);

}  // namespace stereoloc
