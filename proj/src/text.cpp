#include "stereoloc/text.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace stereoloc::text {

namespace {

std::string printf_double(const char* fmt, int precision, double value) {
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, fmt, precision, value);
    return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

std::string fixed_exact(double value, int min_decimals) {
    if (!std::isfinite(value))
        return printf_double("%.*f", min_decimals, value);
    for (int p = min_decimals; p < 40; ++p) {
        std::string s = printf_double("%.*f", p, value);
        if (parse_double(s) == value)
            return s;
    }
    return printf_double("%.*g", 17, value);
}

std::string general_exact(double value, int min_significant) {
    if (!std::isfinite(value))
        return printf_double("%.*g", min_significant, value);
    for (int p = min_significant; p <= 17; ++p) {
        std::string s = printf_double("%#.*g", p, value);
        if (parse_double(s) == value)
            return s;
    }
    return printf_double("%#.*g", 17, value);
}

std::optional<double> parse_double(std::string_view s) {
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        return std::nullopt;
    return out;
}

std::optional<long long> parse_int(std::string_view s) {
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        return std::nullopt;
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> lines(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto pos = text.find('\n', start);
        if (pos == std::string_view::npos)
            pos = text.size();
        auto line = text.substr(start, pos - start);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        out.push_back(line);
        start = pos + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

}  // namespace stereoloc::text
