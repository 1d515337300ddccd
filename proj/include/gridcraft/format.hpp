#pragma once

#include <string>

namespace gridcraft {

// All emitted files print reals with this many significant digits.
inline constexpr int kFloatDigits = 9;

// "%.9g" rendering.
std::string format_real(double value);

// Rounds to kFloatDigits significant digits so that JSON serialization of
// the result prints at most that many digits.
double round_real(double value);

}  // namespace gridcraft
