#include "stereoloc/association.hpp"

#include <cmath>

#include "stereoloc/errors.hpp"

namespace stereoloc {

void AssociationConfig::validate() const {
    if (!(max_y_diff_frac > 0.0) || !(max_y_diff_frac <= 1.0))
        throw InvalidArgument("max_y_diff_frac must be in (0, 1]");
    if (!(size_weight > 0.0) || !std::isfinite(size_weight))
        throw InvalidArgument("size_weight must be > 0");
    if (!(min_disparity_px > 0.0) || !std::isfinite(min_disparity_px))
        throw InvalidArgument("min_disparity_px must be > 0");
    if (max_disparity_px && (!(*max_disparity_px > 0.0) || *max_disparity_px < min_disparity_px))
        throw InvalidArgument("max_disparity_px must be > 0 and >= min_disparity_px");
}

CostMatrix association_costs(const StereoFrame& frame, const CameraIntrinsics& intrinsics,
                             const AssociationConfig& cfg) {
    const auto& left = frame.left.boxes;
    const auto& right = frame.right.boxes;
    CostMatrix cost(left.size(), right.size());
    const double height = intrinsics.height_px;
    const double max_dy = cfg.max_y_diff_frac * height;
    const double max_disp = cfg.max_disparity_for(intrinsics);
    for (std::size_t i = 0; i < left.size(); ++i) {
        const ImagePoint cl = centroid(left[i], intrinsics);
        const double area_l = left[i].w_norm * left[i].h_norm;
        for (std::size_t j = 0; j < right.size(); ++j) {
            const ImagePoint cr = centroid(right[j], intrinsics);
            const double disp = disparity(cl.u, cr.u);
            const double dy = std::abs(cl.v - cr.v);
            if (disp < cfg.min_disparity_px || disp > max_disp || dy > max_dy)
                continue;
            const double area_r = right[j].w_norm * right[j].h_norm;
            cost(i, j) = dy / height + cfg.size_weight * std::abs(std::log(area_l / area_r));
        }
    }
    return cost;
}

namespace {

std::vector<MatchedPair> to_pairs(const Assignment& a, const CostMatrix& cost) {
    std::vector<MatchedPair> out;
    out.reserve(a.pairs.size());
    for (const auto& [r, c] : a.pairs)
        out.push_back({r, c, cost(r, c)});
    return out;
}

}  // namespace

std::vector<MatchedPair> associate(const StereoFrame& frame, const CameraIntrinsics& intrinsics,
                                   const AssociationConfig& cfg) {
    const CostMatrix cost = association_costs(frame, intrinsics, cfg);
    return to_pairs(solve_assignment(cost), cost);
}

std::vector<MatchedPair> brute_force_associate(const StereoFrame& frame,
                                               const CameraIntrinsics& intrinsics,
                                               const AssociationConfig& cfg) {
    const CostMatrix cost = association_costs(frame, intrinsics, cfg);
    return to_pairs(brute_force_assignment(cost, 8), cost);
}

double total_cost(const std::vector<MatchedPair>& pairs) {
    double total = 0.0;
    for (const auto& p : pairs)
        total += p.cost;
    return total;
}

}  // namespace stereoloc
