#pragma once

#include <optional>
#include <vector>

#include "stereoloc/assignment.hpp"
#include "stereoloc/detection.hpp"

namespace stereoloc {

struct AssociationConfig {
    double max_y_diff_frac = 0.05;  ///< row gate, fraction of image height
    double size_weight = 0.5;       ///< weight of the log box-area ratio
    double min_disparity_px = 1.0;
    std::optional<double> max_disparity_px;  ///< image width when unset

    void validate() const;
    double max_disparity_for(const CameraIntrinsics& intrinsics) const {
        return max_disparity_px ? *max_disparity_px : static_cast<double>(intrinsics.width_px);
    }
};

struct MatchedPair {
    int left_index = 0;
    int right_index = 0;
    double cost = 0.0;

    bool operator==(const MatchedPair&) const = default;
};

/// Gated pair costs: rows are left boxes, columns right boxes.
CostMatrix association_costs(const StereoFrame& frame, const CameraIntrinsics& intrinsics,
                             const AssociationConfig& cfg);

/// Optimal epipolar-gated matching of left and right boxes, ordered by left index.
std::vector<MatchedPair> associate(const StereoFrame& frame, const CameraIntrinsics& intrinsics,
                                   const AssociationConfig& cfg);

/// Exhaustive reference for associate(). Throws TooLarge when both sides hold
/// more than 8 boxes.
std::vector<MatchedPair> brute_force_associate(const StereoFrame& frame,
                                               const CameraIntrinsics& intrinsics,
                                               const AssociationConfig& cfg);

double total_cost(const std::vector<MatchedPair>& pairs);

}  // namespace stereoloc
