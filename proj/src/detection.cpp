#include "stereoloc/detection.hpp"

#include <cmath>

#include "stereoloc/errors.hpp"
#include "stereoloc/text.hpp"

namespace stereoloc {

bool BoundingBox::valid() const {
    auto in_unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
    return in_unit(cx_norm) && in_unit(cy_norm) && in_unit(w_norm) && in_unit(h_norm) &&
           w_norm > 0.0 && h_norm > 0.0 && in_unit(confidence);
}

DetectionSet parse_label_file(std::string_view content, long long frame_id, Side side) {
    DetectionSet set{frame_id, side, {}};
    const auto all = text::lines(content);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const std::size_t line_no = i + 1;
        const auto line = text::trim(all[i]);
        if (line.empty() || line.front() == '#')
            continue;
        const auto fields = text::split_ws(line);
        if (fields.size() != 5 && fields.size() != 6)
            throw LabelParseError(LabelParseError::Kind::MalformedLine, line_no,
                                  "line " + std::to_string(line_no) + ": expected 5 or 6 fields, got " +
                                      std::to_string(fields.size()));
        const auto cls = text::parse_int(fields[0]);
        double values[5] = {0, 0, 0, 0, 1.0};
        bool ok = cls.has_value();
        for (std::size_t k = 1; ok && k < fields.size(); ++k) {
            const auto v = text::parse_double(fields[k]);
            ok = v.has_value();
            if (ok)
                values[k - 1] = *v;
        }
        if (!ok)
            throw LabelParseError(LabelParseError::Kind::MalformedLine, line_no,
                                  "line " + std::to_string(line_no) + ": non-numeric field");
        BoundingBox box{static_cast<int>(*cls), values[0], values[1], values[2], values[3], values[4]};
        if (!box.valid() || *cls < 0)
            throw LabelParseError(LabelParseError::Kind::OutOfRange, line_no,
                                  "line " + std::to_string(line_no) + ": value out of range");
        set.boxes.push_back(box);
    }
    return set;
}

std::string write_label_file(const DetectionSet& set) {
    std::string out;
    for (const auto& b : set.boxes) {
        out += std::to_string(b.class_id);
        for (double v : {b.cx_norm, b.cy_norm, b.w_norm, b.h_norm, b.confidence}) {
            out += ' ';
            out += text::fixed_exact(v, 6);
        }
        out += '\n';
    }
    return out;
}

std::string label_file_name(std::string_view prefix, long long frame_id, Side side) {
    return std::string(prefix) + "_" + std::to_string(frame_id) +
           (side == Side::Left ? "_left.txt" : "_right.txt");
}

}  // namespace stereoloc
