#include "relufim/reporting.hpp"

#include <cstdio>

namespace relufim {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace relufim
