#pragma once

#include <string>

namespace pbdr {

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

/// Fixed-point formatting with `digits` decimals, locale independent.
std::string format_fixed(double value, int digits);

}  // namespace pbdr
