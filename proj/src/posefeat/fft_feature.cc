#include <cmath>
#include <complex>
#include <numbers>

#include "actrec/common/error.h"
#include "actrec/posefeat/features.h"

namespace actrec::posefeat {

namespace {

constexpr double kLogEps = 1e-8;
constexpr int kNumBands = 4;
constexpr int kNumCepstral = 10;

constexpr std::array<Part, 8> kArmJoints{Part::kRightShoulder, Part::kLeftShoulder, Part::kRightElbow,
                                         Part::kLeftElbow,     Part::kRightWrist,   Part::kLeftWrist,
                                         Part::kRightHand,     Part::kLeftHand};

// |X_k| for k = 0..N-1 by direct summation; N is at most a few hundred.
std::vector<double> dft_magnitude(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> mag(n);
  for (std::size_t k = 0; k < n; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      double phase = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) / static_cast<double>(n);
      re += x[t] * std::cos(phase);
      im += x[t] * std::sin(phase);
    }
    mag[k] = std::hypot(re, im);
  }
  return mag;
}

}  // namespace

const std::vector<SubFeatureSpec>& fft_sub_features() {
  static const std::vector<SubFeatureSpec> specs{
      {"fft-bands", 64}, {"fft-cepstrum", 160}, {"fft-entropy", 16}, {"fft-energy", 16}};
  return specs;
}

std::array<double, 16> fft_descriptor(std::span<const double> trajectory) {
  const std::size_t n = trajectory.size();
  std::array<double, 16> out{};
  if (n == 0) return out;
  double mean = 0.0;
  for (double v : trajectory) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> centered(n);
  for (std::size_t t = 0; t < n; ++t) centered[t] = trajectory[t] - mean;
  auto mag = dft_magnitude(centered);

  // One-sided spectrum without the (removed) mean: k = 1 .. N/2.
  const std::size_t last = n / 2;
  for (int b = 0; b < kNumBands; ++b) {
    std::size_t lo = std::size_t{1} << b, hi = std::size_t{2} << b;
    for (std::size_t k = lo; k < hi && k <= last; ++k) out[static_cast<std::size_t>(b)] += mag[k] * mag[k];
  }

  for (int q = 0; q < kNumCepstral; ++q) {
    double c = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      double phase = 2.0 * std::numbers::pi * static_cast<double>((k * static_cast<std::size_t>(q)) % n) /
                     static_cast<double>(n);
      c += std::log(mag[k] + kLogEps) * std::cos(phase);
    }
    out[static_cast<std::size_t>(kNumBands + q)] = c / static_cast<double>(n);
  }

  double energy = 0.0;
  for (std::size_t k = 1; k <= last; ++k) energy += mag[k] * mag[k];
  double entropy = 0.0;
  if (energy > 0.0) {
    for (std::size_t k = 1; k <= last; ++k) {
      double p = mag[k] * mag[k] / energy;
      if (p > 0.0) entropy -= p * std::log(p);
    }
  }
  out[14] = entropy;
  out[15] = energy;
  return out;
}

std::vector<SubFeature> fft_feature(const JointTrackSet& tracks, long center_frame, int length) {
  if (!window_fits(tracks, center_frame, length)) {
    throw ValidationError("FFT window of length " + std::to_string(length) + " at frame " +
                          std::to_string(center_frame) + " is outside the track range");
  }
  const long first = center_frame - length / 2;
  std::vector<SubFeature> out;
  for (const auto& s : fft_sub_features()) out.push_back({s.name, Eigen::VectorXd::Zero(s.dim)});
  std::vector<double> traj(static_cast<std::size_t>(length));
  long idx = 0;
  for (Part joint : kArmJoints) {
    for (int axis = 0; axis < 2; ++axis, ++idx) {
      for (int t = 0; t < length; ++t) {
        const Point& p = tracks.at(first + t, joint);
        traj[static_cast<std::size_t>(t)] = axis == 0 ? p.x : p.y;
      }
      auto d = fft_descriptor(traj);
      for (int b = 0; b < kNumBands; ++b) out[0].values[kNumBands * idx + b] = d[static_cast<std::size_t>(b)];
      for (int q = 0; q < kNumCepstral; ++q) {
        out[1].values[kNumCepstral * idx + q] = d[static_cast<std::size_t>(kNumBands + q)];
      }
      out[2].values[idx] = d[14];
      out[3].values[idx] = d[15];
    }
  }
  return out;
}

}  // namespace actrec::posefeat
