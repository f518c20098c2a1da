#pragma once

#include <cstdint>
#include <string>

namespace temper {

/// Shortest decimal representation that round-trips to the same double.
/// Infinities serialize as "inf"/"-inf", NaN as "nan".
std::string format_double(double v);

std::string format_flag(bool b);

}  // namespace temper
