#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace innet {

// Shortest decimal string that parses back to exactly `value`.
std::string FormatDouble(double value);

double ParseDouble(std::string_view token);
long long ParseInt(std::string_view token);

// Splits on runs of ASCII whitespace.
std::vector<std::string_view> SplitWhitespace(std::string_view line);

std::string_view Trim(std::string_view text);

}  // namespace innet
