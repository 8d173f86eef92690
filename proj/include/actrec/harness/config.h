#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "actrec/attributes/linear_model.h"
#include "actrec/attributes/stacking.h"
#include "actrec/common/kv.h"
#include "actrec/composites/pst.h"
#include "actrec/corpus/tokenize.h"
#include "actrec/harness/metrics.h"

namespace actrec::harness {

enum class CompositeMode { kSvm, kNn, kScript, kNnScript, kPst, kPstZeroShot };
CompositeMode parse_composite_mode(const std::string& s);
std::string composite_mode_name(CompositeMode m);

// Resolved settings of one experiment run. Paths are absolute after loading.
struct ExperimentConfig {
  std::filesystem::path bundle;
  std::filesystem::path output;
  CompositeMode mode = CompositeMode::kSvm;
  std::string weights = "mined";  // mined, planted, or a CSV path
  std::string weight_kind = "tfidf";
  corpus::MatchMode match_mode = corpus::MatchMode::kLiteral;
  std::string sequence_source = "annotated";  // or segmented (frame bundles)
  std::string stack_mode = "none";
  attributes::TrainConfig train;
  // PST: fixed values, or a grid searched on the validation split.
  composites::PstConfig pst;
  bool grid_search = true;
  std::vector<double> alpha_grid{0.5, 0.75, 0.9, 0.99};
  std::vector<double> gamma_grid{0.25, 0.5, 0.75, 1.0};
  std::vector<double> delta_grid{0.1, 0.25, 0.5, 1.0};
  std::vector<double> k_grid{3, 5, 10};
  // Segmentation.
  long segment_interval = 60;
  std::vector<double> segment_thresholds{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  bool background_filter = true;
  // Detection (frame bundles).
  bool detection = true;
  DetectionMatchOptions match;
  bool nms_iou = false;
  long window_min_size = 30;
  long window_min_step = 6;
  long window_max_size = 1800;

  static std::vector<std::string> keys();
  // Relative paths resolve against `base_dir`.
  static ExperimentConfig from_kv(const kv::KeyValues& kv, const std::filesystem::path& base_dir);
  static ExperimentConfig load(const std::filesystem::path& path);
  // Every setting, including defaults.
  kv::KeyValues resolved() const;
};

}  // namespace actrec::harness
