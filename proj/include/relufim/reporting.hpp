#pragma once

#include <string>

namespace relufim {

/// 17-significant-digit formatting: enough to round-trip any double, so
/// re-running a command reproduces output files byte for byte.
std::string fmt_g17(double v);

}  // namespace relufim
