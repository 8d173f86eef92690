#pragma once

#include <array>
#include <string>
#include <vector>

#include "actrec/posefeat/joint_tracks.h"

namespace actrec::psinfer {

using Pose = std::array<posefeat::Point, posefeat::kNumParts>;

// A stick endpoint is the mean of one or more parts.
struct Stick {
  std::string name;
  std::vector<posefeat::Part> from;
  std::vector<posefeat::Part> to;
};

// torso and head run to the shoulder midpoint; arms are shoulder-elbow and
// elbow-wrist on each side.
std::vector<Stick> default_sticks();

struct PcpReport {
  std::vector<std::string> sticks;
  std::vector<double> pcp;        // fraction correct per stick
  std::vector<long> evaluated;    // frames counted per stick
  std::vector<long> excluded;     // frames with a zero-length ground-truth stick
  double mean = 0.0;              // mean over sticks with at least one frame
};

// A stick is correct when each predicted endpoint lies within `fraction` of
// the ground-truth stick length of the matching ground-truth endpoint.
PcpReport pcp_eval(const std::vector<Pose>& predicted, const std::vector<Pose>& truth,
                   const std::vector<Stick>& sticks = default_sticks(), double fraction = 0.5);

}  // namespace actrec::psinfer
