#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "stereoloc/geometry.hpp"
#include "stereoloc/pipeline.hpp"

namespace stereoloc {

/// One simulated target in one frame.
struct GroundTruthRecord {
    long long frame_id = 0;
    int target_id = 0;
    WorldPoint world;
    double depth_m = 0.0;  ///< rig-frame Z
    bool visible = false;

    bool operator==(const GroundTruthRecord& o) const {
        return frame_id == o.frame_id && target_id == o.target_id && world.x == o.world.x &&
               world.y == o.world.y && world.z == o.world.z && depth_m == o.depth_m &&
               visible == o.visible;
    }
};

struct FramePose {
    long long frame_id = 0;
    RigPose pose;
};

inline constexpr std::string_view kEstimatesHeader =
    "frame_id,target_ordinal,disparity_px,depth_m,x_m,y_m,z_m,confidence";
inline constexpr std::string_view kTruthHeader = "frame_id,target_id,x_m,y_m,z_m,depth_m,visible";
inline constexpr std::string_view kPosesHeader =
    "frame_id,r00,r01,r02,r10,r11,r12,r20,r21,r22,tx_m,ty_m,tz_m";

/// Header-addressed CSV rows. Throws SchemaError naming the first missing column.
class CsvTable {
public:
    static CsvTable parse(std::string_view content, const std::vector<std::string>& required);

    std::size_t size() const { return rows_.size(); }
    std::string_view get(std::size_t row, const std::string& column) const;
    double real(std::size_t row, const std::string& column) const;
    long long integer(std::size_t row, const std::string& column) const;

private:
    std::map<std::string, std::size_t> index_;
    std::vector<std::vector<std::string>> rows_;
};

std::string write_estimates_csv(const std::vector<FrameResult>& results);
std::vector<DroneEstimate> read_estimates_csv(std::string_view content);

std::string write_truth_csv(const std::vector<GroundTruthRecord>& truth);
std::vector<GroundTruthRecord> read_truth_csv(std::string_view content);

std::string write_poses_csv(const std::vector<FramePose>& poses);
std::vector<FramePose> read_poses_csv(std::string_view content);

std::string read_file(const std::string& path);
/// Throws IoError with the path on failure.
void write_file(const std::string& path, std::string_view content);

}  // namespace stereoloc
