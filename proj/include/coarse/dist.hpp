#pragma once

#include <cstdint>

namespace coarse {

// Distance quantum. All distances are exact nonnegative integers; a metric's
// scale_denominator records how many quanta make one unit (metadata only).
using Dist = std::int64_t;

// Inputs are capped well below the 63-bit range so that the short sums formed
// by validation and composition never overflow.
inline constexpr Dist kMaxQuanta = Dist{1} << 40;

}  // namespace coarse
