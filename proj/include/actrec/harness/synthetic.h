#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "actrec/common/kv.h"
#include "actrec/harness/bundle_io.h"

namespace actrec::harness {

enum class Representation { kScores, kFrames };

// Generator settings. Every draw is a function of `seed`.
struct SyntheticConfig {
  int composites = 8;
  int activities = 12;
  int objects = 12;
  int videos_per_composite = 16;
  int min_intervals = 6;  // intervals per video
  int max_intervals = 12;
  int support_activities = 3;  // non-zero planted weights per composite
  int support_objects = 3;
  double signal = 1.0;  // score of a present attribute before noise
  double noise = 0.5;   // Gaussian std added to every score
  int scripts_per_composite = 4;
  int script_steps = 8;
  double filler_rate = 0.5;     // chance of each extra filler word around a label
  double script_noise = 0.1;    // chance a step mentions a random attribute
  double synonym_rate = 0.0;    // chance a label is written as its synonym
  int cooccurrence_group = 0;   // partner objects per activity; 0 disables
  Representation representation = Representation::kScores;
  // Frame streams.
  int frames_per_interval = 60;  // score representation: fixed interval length
  int min_frames = 30;           // frame representation: interval length range
  int max_frames = 60;
  int min_gap = 0;  // background frames before each interval
  int max_gap = 40;
  int words_per_attribute = 3;
  int background_words = 12;
  double word_signal = 0.6;  // chance a frame emits a word of a present attribute
  double train_fraction = 0.5;
  double val_fraction = 0.25;
  std::uint64_t seed = 7;

  void validate() const;
  static SyntheticConfig from_kv(const kv::KeyValues& kv);
  kv::KeyValues to_kv() const;
  static std::vector<std::string> keys();
};

Bundle gen_synthetic(const SyntheticConfig& config);

}  // namespace actrec::harness
