#include "actrec/temporal/integral_histogram.h"

#include <string>

#include "actrec/common/error.h"

namespace actrec::temporal {

IntegralHistogram::IntegralHistogram(const std::vector<std::vector<long>>& frame_bins, BlockLayout layout)
    : layout_(std::move(layout)) {
  const long bins = static_cast<long>(layout_.total());
  prefix_ = Prefix::Zero(static_cast<long>(frame_bins.size()) + 1, bins);
  for (std::size_t f = 0; f < frame_bins.size(); ++f) {
    const long r = static_cast<long>(f);
    prefix_.row(r + 1) = prefix_.row(r);
    for (long b : frame_bins[f]) {
      if (b < 0 || b >= bins) throw ValidationError("integral histogram: bin " + std::to_string(b) + " out of range");
      ++prefix_(r + 1, b);
    }
  }
}

IntegralHistogram IntegralHistogram::from_counts(const Eigen::MatrixXi& counts, BlockLayout layout) {
  if (static_cast<std::size_t>(counts.cols()) != layout.total()) {
    throw ValidationError("integral histogram: count columns do not match the block layout");
  }
  if ((counts.array() < 0).any()) throw ValidationError("integral histogram: negative count");
  IntegralHistogram h;
  h.layout_ = std::move(layout);
  h.prefix_ = Prefix::Zero(counts.rows() + 1, counts.cols());
  for (long f = 0; f < counts.rows(); ++f) h.prefix_.row(f + 1) = h.prefix_.row(f) + counts.row(f);
  return h;
}

Eigen::VectorXd IntegralHistogram::raw(long start, long end) const {
  if (start < 0 || start > end || end >= num_frames()) {
    throw ValidationError("window [" + std::to_string(start) + ", " + std::to_string(end) + "] outside " +
                          std::to_string(num_frames()) + " frames");
  }
  return (prefix_.row(end + 1) - prefix_.row(start)).cast<double>().transpose();
}

IntegralHistogram build_integral_histogram(std::span<const posefeat::FrameDescriptor> frames,
                                           const posefeat::CodebookBundle& bundle) {
  std::vector<std::vector<long>> bins;
  bins.reserve(frames.size());
  for (const auto& f : frames) bins.push_back(posefeat::quantize_frame(bundle, f));
  return IntegralHistogram(bins, bundle.layout());
}

Eigen::VectorXd window_histogram(const IntegralHistogram& integral, long start, long end) {
  Eigen::VectorXd h = integral.raw(start, end);
  integral.layout().normalize(h);
  return h;
}

}  // namespace actrec::temporal
