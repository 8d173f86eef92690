#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "actrec/attributes/score_matrix.h"
#include "actrec/common/kv.h"
#include "actrec/corpus/lexicon.h"
#include "actrec/corpus/script_corpus.h"
#include "actrec/corpus/vocab.h"
#include "actrec/corpus/weights.h"

namespace actrec::harness {

// One annotated interval; frames are 0-based and inclusive.
struct IntervalAnnotation {
  std::string video;
  long start_frame = 0;
  long end_frame = 0;
  std::vector<std::string> attributes;
  std::string composite;
};

// JSON lines {video, start_frame, end_frame, attributes: [...], composite}.
std::vector<IntervalAnnotation> load_annotations(const std::filesystem::path& path);
void save_annotations(const std::filesystem::path& path, const std::vector<IntervalAnnotation>& annotations);

struct VideoRecord {
  std::string id;
  std::string composite;
  std::string split;  // train, val or test
  long num_frames = 0;
};

// Dataset on disk:
//   vocab.tsv, lexicon.tsv, planted_weights.csv (optional), annotations.jsonl,
//   split.tsv (video, composite, split, frames), scripts/, and either
//   scores/<video>.csv (one column per annotated interval) or
//   frames/<video>.txt (one codeword index per line, -1 for none).
struct Bundle {
  corpus::AttributeVocab vocab;
  corpus::SynonymLexicon lexicon;
  corpus::ScriptCorpus scripts;
  corpus::WeightMatrix planted;  // empty when not shipped
  std::vector<VideoRecord> videos;
  std::vector<IntervalAnnotation> annotations;
  std::map<std::string, attributes::ScoreMatrix> scores;
  std::map<std::string, std::vector<long>> frames;
  long num_words = 0;  // codebook size of the frame streams
  kv::KeyValues meta;  // generator settings and bundle facts

  bool has_scores() const { return !scores.empty(); }
  bool has_frames() const { return !frames.empty(); }
  std::vector<std::string> composites() const;  // sorted, unique
  std::vector<std::string> videos_in(const std::string& split) const;
  std::vector<IntervalAnnotation> annotations_of(const std::string& video) const;
  const VideoRecord& video(const std::string& id) const;
};

void save_bundle(const std::filesystem::path& dir, const Bundle& bundle);
Bundle load_bundle(const std::filesystem::path& dir);

}  // namespace actrec::harness
