#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace dmmf {

/// Fixed-width general formatting used by every CSV/summary writer, so
/// identical runs produce byte-identical files.
std::string format_real(double x, int significant = 12);
/// Shortest text that parses back to exactly `x`.
std::string format_exact(double x);

/// Whole-string parses; throw std::invalid_argument on trailing junk.
double parse_real(std::string_view text);
std::int64_t parse_integer(std::string_view text);

} // namespace dmmf
