#pragma once

#include <cmath>
#include <vector>

namespace actrec::temporal {

struct WindowLevel {
  long size = 0;
  long step = 0;
};

// Level k: size round(min_size * factor^k), step max(1, round(min_step * factor^k)),
// rounding half up, while size <= max_size.
std::vector<WindowLevel> window_schedule(long min_size = 30, long min_step = 6, double factor = std::sqrt(2.0),
                                         long max_size = 1800);

// Start frames of every window of `size` and `step` inside [0, num_frames).
std::vector<long> window_starts(long num_frames, const WindowLevel& level);

}  // namespace actrec::temporal
