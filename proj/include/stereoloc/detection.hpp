#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stereoloc/geometry.hpp"

namespace stereoloc {

/// One detected object in one image, normalized center/size (Darknet style).
struct BoundingBox {
    int class_id = 0;
    double cx_norm = 0.0;
    double cy_norm = 0.0;
    double w_norm = 0.0;
    double h_norm = 0.0;
    double confidence = 1.0;

    bool valid() const;
    bool operator==(const BoundingBox&) const = default;
};

struct DetectionSet {
    long long frame_id = 0;
    Side side = Side::Left;
    std::vector<BoundingBox> boxes;  ///< file order
};

struct StereoFrame {
    long long frame_id = 0;
    DetectionSet left;
    DetectionSet right;

    static StereoFrame make(long long frame_id, std::vector<BoundingBox> left,
                            std::vector<BoundingBox> right) {
        return {frame_id, {frame_id, Side::Left, std::move(left)},
                {frame_id, Side::Right, std::move(right)}};
    }
};

/// Parses `class cx cy w h [confidence]` lines. Blank lines and lines starting
/// with '#' are skipped.
/// Throws LabelParseError (MalformedLine or OutOfRange) with a 1-based line number.
DetectionSet parse_label_file(std::string_view text, long long frame_id, Side side);

/// LF-terminated lines; at least six decimals per real field.
std::string write_label_file(const DetectionSet& set);

/// Sub-pixel box center in pixels.
inline ImagePoint centroid(const BoundingBox& box, const CameraIntrinsics& intrinsics) {
    return {box.cx_norm * intrinsics.width_px, box.cy_norm * intrinsics.height_px};
}

/// `<prefix>_<frame_id>_left.txt` / `_right.txt`
std::string label_file_name(std::string_view prefix, long long frame_id, Side side);

}  // namespace stereoloc
