#include "pathforge/number_format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "pathforge/error.hpp"

namespace pathforge {

std::string format_number(double value) {
    if (value == 0.0) {
        return "0";  // also folds -0
    }
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw Error(ErrorCode::InvalidArgument, "number cannot be formatted");
    }
    return {buf.data(), end};
}

double parse_number(std::string_view text, std::string_view field) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw Error(ErrorCode::ParseError,
                    "field '" + std::string(field) + "' is not a finite number: '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace pathforge
