#include "gridcraft/format.hpp"

#include <cstdio>
#include <cstdlib>

namespace gridcraft {

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kFloatDigits, value);
  return buf;
}

double round_real(double value) { return std::strtod(format_real(value).c_str(), nullptr); }

}  // namespace gridcraft
