#include "actrec/psinfer/pcp.h"

#include <cmath>

#include "actrec/common/error.h"

namespace actrec::psinfer {

using posefeat::Part;
using posefeat::Point;

namespace {

Point endpoint(const Pose& pose, const std::vector<Part>& parts) {
  Point p;
  for (Part q : parts) {
    p.x += pose[static_cast<int>(q)].x;
    p.y += pose[static_cast<int>(q)].y;
  }
  p.x /= static_cast<double>(parts.size());
  p.y /= static_cast<double>(parts.size());
  return p;
}

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

std::vector<Stick> default_sticks() {
  const std::vector<Part> shoulders{Part::kRightShoulder, Part::kLeftShoulder};
  return {
      {"torso", {Part::kTorso}, shoulders},
      {"head", {Part::kHead}, shoulders},
      {"r_upper_arm", {Part::kRightShoulder}, {Part::kRightElbow}},
      {"l_upper_arm", {Part::kLeftShoulder}, {Part::kLeftElbow}},
      {"r_lower_arm", {Part::kRightElbow}, {Part::kRightWrist}},
      {"l_lower_arm", {Part::kLeftElbow}, {Part::kLeftWrist}},
  };
}

PcpReport pcp_eval(const std::vector<Pose>& predicted, const std::vector<Pose>& truth,
                   const std::vector<Stick>& sticks, double fraction) {
  if (predicted.size() != truth.size()) throw ValidationError("pcp: prediction and ground-truth frame counts differ");
  PcpReport r;
  double total = 0.0;
  long used = 0;
  for (const auto& s : sticks) {
    if (s.from.empty() || s.to.empty()) throw ValidationError("pcp: stick " + s.name + " has an empty endpoint");
    long correct = 0, counted = 0, skipped = 0;
    for (std::size_t f = 0; f < truth.size(); ++f) {
      Point ga = endpoint(truth[f], s.from), gb = endpoint(truth[f], s.to);
      double len = dist(ga, gb);
      if (len == 0.0) {
        ++skipped;
        continue;
      }
      ++counted;
      Point pa = endpoint(predicted[f], s.from), pb = endpoint(predicted[f], s.to);
      if (dist(pa, ga) <= fraction * len && dist(pb, gb) <= fraction * len) ++correct;
    }
    r.sticks.push_back(s.name);
    r.evaluated.push_back(counted);
    r.excluded.push_back(skipped);
    r.pcp.push_back(counted > 0 ? static_cast<double>(correct) / static_cast<double>(counted) : 0.0);
    if (counted > 0) {
      total += r.pcp.back();
      ++used;
    }
  }
  r.mean = used > 0 ? total / static_cast<double>(used) : 0.0;
  return r;
}

}  // namespace actrec::psinfer
