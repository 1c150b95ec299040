#pragma once

#include <string>
#include <string_view>

namespace pathforge {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

/// Strict full-string parse; throws ParseError naming `field` on failure.
double parse_number(std::string_view text, std::string_view field);

}  // namespace pathforge
