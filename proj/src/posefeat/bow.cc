#include "actrec/posefeat/bow.h"

#include "actrec/common/error.h"

namespace actrec::posefeat {

namespace {

const std::vector<SubFeatureSpec>& specs_for(PoseFeatureKind kind) {
  return kind == PoseFeatureKind::kBm ? bm_sub_features() : fft_sub_features();
}

}  // namespace

std::vector<BlockSpec> block_specs(PoseFeatureKind kind, std::span<const int> lengths) {
  std::vector<BlockSpec> out;
  for (int len : lengths) {
    for (const auto& s : specs_for(kind)) out.push_back({len, s.name, s.dim});
  }
  return out;
}

BlockLayout bow_layout(PoseFeatureKind kind, std::span<const int> lengths) {
  BlockLayout layout;
  for (const auto& b : block_specs(kind, lengths)) layout.sizes.push_back(static_cast<std::size_t>(2 * b.dim));
  return layout;
}

FrameDescriptor describe_frame(const JointTrackSet& tracks, long frame, PoseFeatureKind kind,
                               std::span<const int> lengths) {
  FrameDescriptor out;
  const std::size_t per_length = specs_for(kind).size();
  for (int len : lengths) {
    if (!window_fits(tracks, frame, len)) {
      out.insert(out.end(), per_length, std::nullopt);
      continue;
    }
    auto subs = kind == PoseFeatureKind::kBm ? bm_feature(tracks, frame, len) : fft_feature(tracks, frame, len);
    for (auto& s : subs) out.emplace_back(std::move(s.values));
  }
  return out;
}

std::vector<long> quantize_frame(const CodebookBundle& bundle, const FrameDescriptor& frame) {
  if (frame.size() != bundle.blocks.size()) {
    throw ValidationError("frame has " + std::to_string(frame.size()) + " blocks, bundle has " +
                          std::to_string(bundle.blocks.size()));
  }
  std::vector<long> bins;
  long offset = 0;
  for (std::size_t b = 0; b < frame.size(); ++b) {
    if (frame[b]) bins.push_back(offset + bundle.blocks[b].quantize(*frame[b]));
    offset += bundle.blocks[b].k();
  }
  return bins;
}

BowHistogram encode_bow(std::span<const FrameDescriptor> frames, const CodebookBundle& bundle) {
  BowHistogram hist;
  hist.layout = bundle.layout();
  hist.values = Eigen::VectorXd::Zero(static_cast<long>(hist.layout.total()));
  for (const auto& f : frames) {
    for (long bin : quantize_frame(bundle, f)) hist.values[bin] += 1.0;
  }
  hist.layout.normalize(hist.values);
  return hist;
}

std::vector<Eigen::MatrixXd> collect_block_samples(std::span<const FrameDescriptor> frames,
                                                   std::size_t num_blocks) {
  std::vector<Eigen::MatrixXd> out(num_blocks);
  for (std::size_t b = 0; b < num_blocks; ++b) {
    long rows = 0, dim = -1;
    for (const auto& f : frames) {
      if (f.size() != num_blocks) throw ValidationError("inconsistent frame descriptor block count");
      if (!f[b]) continue;
      if (dim >= 0 && f[b]->size() != dim) throw ValidationError("inconsistent sub-feature dimension");
      dim = f[b]->size();
      ++rows;
    }
    out[b].resize(rows, std::max(dim, 0L));
    long r = 0;
    for (const auto& f : frames) {
      if (f[b]) out[b].row(r++) = f[b]->transpose();
    }
  }
  return out;
}

CodebookBundle build_bundle(std::span<const FrameDescriptor> frames, PoseFeatureKind kind, std::uint64_t seed,
                            std::span<const int> lengths) {
  auto specs = block_specs(kind, lengths);
  auto samples = collect_block_samples(frames, specs.size());
  CodebookBundle bundle;
  for (std::size_t b = 0; b < specs.size(); ++b) {
    if (samples[b].rows() == 0) {
      throw ValidationError("no samples for block " + specs[b].sub_feature + "@" + std::to_string(specs[b].length));
    }
    bundle.blocks.push_back(
        build_codebook(samples[b], seed * 1000003ULL + b, specs[b].sub_feature, specs[b].length));
  }
  return bundle;
}

}  // namespace actrec::posefeat
