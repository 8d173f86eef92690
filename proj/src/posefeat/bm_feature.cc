#include <algorithm>
#include <cmath>
#include <numbers>

#include "actrec/common/error.h"
#include "actrec/posefeat/features.h"

namespace actrec::posefeat {

namespace {

using P = Part;

constexpr std::array<std::pair<P, P>, 16> kDistancePairs{{
    {P::kRightShoulder, P::kLeftShoulder},
    {P::kRightElbow, P::kLeftElbow},
    {P::kRightWrist, P::kLeftWrist},
    {P::kRightHand, P::kLeftHand},
    {P::kRightShoulder, P::kRightElbow},
    {P::kRightShoulder, P::kRightWrist},
    {P::kRightShoulder, P::kRightHand},
    {P::kRightElbow, P::kRightWrist},
    {P::kRightElbow, P::kRightHand},
    {P::kRightWrist, P::kRightHand},
    {P::kLeftShoulder, P::kLeftElbow},
    {P::kLeftShoulder, P::kLeftWrist},
    {P::kLeftShoulder, P::kLeftHand},
    {P::kLeftElbow, P::kLeftWrist},
    {P::kLeftElbow, P::kLeftHand},
    {P::kLeftWrist, P::kLeftHand},
}};

struct AngleTriple {
  P a, joint, b;
};

constexpr std::array<AngleTriple, 6> kAngles{{
    {P::kTorso, P::kRightShoulder, P::kRightElbow},
    {P::kTorso, P::kLeftShoulder, P::kLeftElbow},
    {P::kRightShoulder, P::kRightElbow, P::kRightWrist},
    {P::kLeftShoulder, P::kLeftElbow, P::kLeftWrist},
    {P::kRightElbow, P::kRightWrist, P::kRightHand},
    {P::kLeftElbow, P::kLeftWrist, P::kLeftHand},
}};

double interior_angle(const Point& a, const Point& j, const Point& b) {
  double ux = a.x - j.x, uy = a.y - j.y, vx = b.x - j.x, vy = b.y - j.y;
  double nu = std::hypot(ux, uy), nv = std::hypot(vx, vy);
  if (nu == 0.0 || nv == 0.0) return 0.0;
  double c = (ux * vx + uy * vy) / (nu * nv);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

void direction_histogram(const std::vector<Point>& deltas, Eigen::Ref<Eigen::VectorXd> bins) {
  for (const auto& d : deltas) {
    double mag = std::hypot(d.x, d.y);
    if (mag == 0.0) continue;
    bins[direction_bin(d.x, d.y)] += mag;
  }
}

}  // namespace

const std::vector<SubFeatureSpec>& bm_sub_features() {
  static const std::vector<SubFeatureSpec> specs{
      {"bm-velocity", 80},  {"bm-acceleration", 80},  {"bm-distance-stats", 80},
      {"bm-distance-roc", 128}, {"bm-angle-stats", 30}, {"bm-angle-speed-stats", 30}};
  return specs;
}

int direction_bin(double dx, double dy) {
  constexpr double kSector = std::numbers::pi / 4.0;
  double theta = std::atan2(dy, dx);
  int bin = static_cast<int>(std::floor((theta + kSector / 2.0) / kSector));
  return ((bin % 8) + 8) % 8;
}

int rate_of_change_bin(double delta) {
  static constexpr std::array<double, 7> kEdges{-4, -2, -1, 0, 1, 2, 4};
  return static_cast<int>(std::upper_bound(kEdges.begin(), kEdges.end(), delta) - kEdges.begin());
}

std::array<double, 5> summary_stats(std::span<const double> values) {
  if (values.empty()) return {0, 0, 0, 0, 0};
  std::vector<double> v(values.begin(), values.end());
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= n;
  std::sort(v.begin(), v.end());
  std::size_t mid = v.size() / 2;
  double median = v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  return {mean, median, std::sqrt(var), v.front(), v.back()};
}

bool window_fits(const JointTrackSet& tracks, long center_frame, int length) {
  if (length < 3) return false;
  long first = center_frame - length / 2;
  return tracks.contains(first) && tracks.contains(first + length - 1);
}

std::vector<SubFeature> bm_feature(const JointTrackSet& tracks, long center_frame, int length) {
  if (!window_fits(tracks, center_frame, length)) {
    throw ValidationError("BM window of length " + std::to_string(length) + " at frame " +
                          std::to_string(center_frame) + " is outside the track range");
  }
  const long first = center_frame - length / 2;
  const auto& specs = bm_sub_features();
  std::vector<SubFeature> out;
  for (const auto& s : specs) out.push_back({s.name, Eigen::VectorXd::Zero(s.dim)});

  // Velocity and acceleration direction histograms, weighted by magnitude.
  for (int p = 0; p < kNumParts; ++p) {
    std::vector<Point> vel, acc;
    for (int t = 0; t + 1 < length; ++t) {
      const Point& a = tracks.at(first + t, static_cast<Part>(p));
      const Point& b = tracks.at(first + t + 1, static_cast<Part>(p));
      vel.push_back({b.x - a.x, b.y - a.y});
    }
    for (std::size_t t = 0; t + 1 < vel.size(); ++t) {
      acc.push_back({vel[t + 1].x - vel[t].x, vel[t + 1].y - vel[t].y});
    }
    direction_histogram(vel, out[0].values.segment(8 * p, 8));
    direction_histogram(acc, out[1].values.segment(8 * p, 8));
  }

  for (std::size_t k = 0; k < kDistancePairs.size(); ++k) {
    std::vector<double> dist(static_cast<std::size_t>(length));
    for (int t = 0; t < length; ++t) {
      const Point& a = tracks.at(first + t, kDistancePairs[k].first);
      const Point& b = tracks.at(first + t, kDistancePairs[k].second);
      dist[static_cast<std::size_t>(t)] = std::hypot(a.x - b.x, a.y - b.y);
    }
    auto stats = summary_stats(dist);
    for (int s = 0; s < 5; ++s) out[2].values[5 * static_cast<long>(k) + s] = stats[static_cast<std::size_t>(s)];
    for (std::size_t t = 0; t + 1 < dist.size(); ++t) {
      double delta = dist[t + 1] - dist[t];
      out[3].values[8 * static_cast<long>(k) + rate_of_change_bin(delta)] += std::abs(delta);
    }
  }

  for (std::size_t k = 0; k < kAngles.size(); ++k) {
    std::vector<double> angle(static_cast<std::size_t>(length));
    for (int t = 0; t < length; ++t) {
      angle[static_cast<std::size_t>(t)] =
          interior_angle(tracks.at(first + t, kAngles[k].a), tracks.at(first + t, kAngles[k].joint),
                         tracks.at(first + t, kAngles[k].b));
    }
    std::vector<double> speed;
    for (std::size_t t = 0; t + 1 < angle.size(); ++t) speed.push_back(std::abs(angle[t + 1] - angle[t]));
    auto sa = summary_stats(angle);
    auto ss = summary_stats(speed);
    for (int s = 0; s < 5; ++s) {
      out[4].values[5 * static_cast<long>(k) + s] = sa[static_cast<std::size_t>(s)];
      out[5].values[5 * static_cast<long>(k) + s] = ss[static_cast<std::size_t>(s)];
    }
  }
  return out;
}

}  // namespace actrec::posefeat
