#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "actrec/common/blocks.h"
#include "actrec/posefeat/bow.h"

namespace actrec::temporal {

// Cumulative per-frame codeword counts: row f holds the counts of frames [0, f).
class IntegralHistogram {
 public:
  using Prefix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  // frame_bins[f] lists the absolute bins hit by frame f (possibly none).
  IntegralHistogram(const std::vector<std::vector<long>>& frame_bins, BlockLayout layout);
  // counts: one row per frame, one column per bin.
  static IntegralHistogram from_counts(const Eigen::MatrixXi& counts, BlockLayout layout);

  long num_frames() const { return prefix_.rows() - 1; }
  long num_bins() const { return prefix_.cols(); }
  const BlockLayout& layout() const { return layout_; }
  const Prefix& prefix() const { return prefix_; }

  // Unnormalized counts of frames start..end inclusive.
  Eigen::VectorXd raw(long start, long end) const;

 private:
  IntegralHistogram() = default;
  Prefix prefix_;
  BlockLayout layout_;
};

// Quantizes every pose frame with `bundle`.
IntegralHistogram build_integral_histogram(std::span<const posefeat::FrameDescriptor> frames,
                                           const posefeat::CodebookBundle& bundle);

// Counts of frames start..end inclusive with per-block L1 normalization.
Eigen::VectorXd window_histogram(const IntegralHistogram& integral, long start, long end);

}  // namespace actrec::temporal
