#include "actrec/temporal/window.h"

#include <algorithm>

#include "actrec/common/error.h"

namespace actrec::temporal {

namespace {

long round_half_up(double x) { return static_cast<long>(std::floor(x + 0.5 + 1e-9)); }

}  // namespace

std::vector<WindowLevel> window_schedule(long min_size, long min_step, double factor, long max_size) {
  if (min_size < 1 || min_step < 1) throw ValidationError("window schedule: min size and step must be >= 1");
  if (!(factor > 1.0)) throw ValidationError("window schedule: growth factor must exceed 1");
  std::vector<WindowLevel> out;
  for (int k = 0;; ++k) {
    double scale = std::pow(factor, k);
    WindowLevel level{round_half_up(min_size * scale), std::max(1L, round_half_up(min_step * scale))};
    if (level.size > max_size) break;
    out.push_back(level);
  }
  return out;
}

std::vector<long> window_starts(long num_frames, const WindowLevel& level) {
  std::vector<long> out;
  for (long s = 0; s + level.size <= num_frames; s += level.step) out.push_back(s);
  return out;
}

}  // namespace actrec::temporal
