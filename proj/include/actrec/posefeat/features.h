#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "actrec/posefeat/joint_tracks.h"

namespace actrec::posefeat {

struct SubFeature {
  std::string name;
  Eigen::VectorXd values;
};

// Trajectory lengths (frames) at which features are computed and stacked.
inline constexpr std::array<int, 3> kTrajectoryLengths{20, 50, 100};

// Body-model (BM) feature accounting. Sub-features, in output order:
//
//   bm-velocity            10 joints x 8 direction bins          =  80
//   bm-acceleration        10 joints x 8 direction bins          =  80
//   bm-distance-stats      16 distance trajectories x 5 stats    =  80
//   bm-distance-roc        16 distance trajectories x 8 bins     = 128
//   bm-angle-stats          6 inner-joint angles x 5 stats       =  30
//   bm-angle-speed-stats    6 inner-joint angles x 5 stats       =  30
//                                                                  ---
//                                                                  428
//
// Distance trajectories: the 4 left/right pairs (shoulder, elbow, wrist, hand)
// followed by the 6 pairs among {shoulder, elbow, wrist, hand} on the right
// side, then the same 6 on the left side. Stats are (mean, median, population
// std, min, max). Angles are interior angles in [0, pi] at the shoulders
// (torso-shoulder-elbow), elbows and wrists, right before left.
inline constexpr int kBmDim = 428;

// FFT feature: 16 coordinate trajectories (x then y of r/l shoulder, elbow,
// wrist, hand) x 16 values, grouped by sub-feature:
//   fft-bands 64, fft-cepstrum 160, fft-entropy 16, fft-energy 16.
inline constexpr int kFftDim = 256;

struct SubFeatureSpec {
  const char* name;
  int dim;
};
const std::vector<SubFeatureSpec>& bm_sub_features();
const std::vector<SubFeatureSpec>& fft_sub_features();

// 8 sectors of 45 degrees, bin 0 centered on +x, counter-clockwise in the
// (x, y) coordinate frame. Callers skip zero displacements.
int direction_bin(double dx, double dy);

// Signed per-frame change binned on edges {-inf,-4,-2,-1,0,1,2,4,inf};
// intervals are closed on the left.
int rate_of_change_bin(double delta);

// (mean, median, population std, min, max); all zero for an empty input.
std::array<double, 5> summary_stats(std::span<const double> values);

// Window [center - length/2, center + length/2) must lie inside the tracks.
std::vector<SubFeature> bm_feature(const JointTrackSet& tracks, long center_frame, int length);
std::vector<SubFeature> fft_feature(const JointTrackSet& tracks, long center_frame, int length);

// Per-trajectory FFT descriptor (16 values: 4 bands, 10 cepstral
// coefficients, spectral entropy, spectral energy). Exposed for testing.
std::array<double, 16> fft_descriptor(std::span<const double> trajectory);

bool window_fits(const JointTrackSet& tracks, long center_frame, int length);

}  // namespace actrec::posefeat
