#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "actrec/common/blocks.h"
#include "actrec/posefeat/codebook.h"
#include "actrec/posefeat/joint_tracks.h"

namespace actrec::posefeat {

enum class PoseFeatureKind { kBm, kFft };

// Sub-feature vectors of one pose frame, one slot per bundle block. A slot is
// empty when the trajectory window does not fit the tracks.
using FrameDescriptor = std::vector<std::optional<Eigen::VectorXd>>;

// Block order: for each length in `lengths`, the sub-features of `kind` in
// their documented order.
FrameDescriptor describe_frame(const JointTrackSet& tracks, long frame, PoseFeatureKind kind,
                               std::span<const int> lengths = kTrajectoryLengths);

struct BlockSpec {
  int length;
  std::string sub_feature;
  int dim;
};
std::vector<BlockSpec> block_specs(PoseFeatureKind kind, std::span<const int> lengths = kTrajectoryLengths);

// Codebook sizes of all blocks: 2 * dim per sub-feature per length.
BlockLayout bow_layout(PoseFeatureKind kind, std::span<const int> lengths = kTrajectoryLengths);

// Absolute histogram bin of each present slot; throws ValidationError on a
// dimension mismatch.
std::vector<long> quantize_frame(const CodebookBundle& bundle, const FrameDescriptor& frame);

struct BowHistogram {
  Eigen::VectorXd values;
  BlockLayout layout;
};

// Quantizes every frame, accumulates per block and L1-normalizes each block.
BowHistogram encode_bow(std::span<const FrameDescriptor> frames, const CodebookBundle& bundle);

// Collects the training samples of every block from the given frames.
std::vector<Eigen::MatrixXd> collect_block_samples(std::span<const FrameDescriptor> frames,
                                                   std::size_t num_blocks);

// One codebook per block, seeds derived from `seed` and the block index.
CodebookBundle build_bundle(std::span<const FrameDescriptor> frames, PoseFeatureKind kind,
                            std::uint64_t seed, std::span<const int> lengths = kTrajectoryLengths);

}  // namespace actrec::posefeat
