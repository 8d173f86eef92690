#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "actrec/attributes/linear_model.h"
#include "actrec/attributes/score_matrix.h"
#include "actrec/composites/pst.h"
#include "actrec/composites/sequence.h"
#include "actrec/harness/bundle_io.h"
#include "actrec/harness/config.h"
#include "actrec/harness/metrics.h"
#include "actrec/temporal/integral_histogram.h"
#include "actrec/temporal/segmentation.h"

namespace actrec::harness {

struct EvalReport {
  std::string mode;
  kv::KeyValues config;
  std::optional<ApTable> attribute_ap;  // base scores on test intervals
  std::optional<ApTable> stacked_ap;    // refined scores on test intervals
  std::optional<ApTable> detection_ap;
  ApTable composite_ap;
  double accuracy = 0.0;
  std::vector<std::string> composites;
  Eigen::MatrixXi confusion;  // rows: true composite, columns: predicted
  std::vector<std::pair<std::string, std::string>> selected;  // values picked on the validation split
  std::vector<std::string> warnings;
  std::optional<double> weight_spearman;  // mean over composites, mined vs planted
  double seconds = 0.0;

  std::string to_json() const;
  std::string to_table() const;
};

using ScoresByVideo = std::map<std::string, attributes::ScoreMatrix>;

// Attribute indices of each annotation.
std::vector<std::vector<int>> interval_labels(const Bundle& bundle, const std::vector<IntervalAnnotation>& anns);

// Integral histogram over a frame stream (one block of num_words bins).
temporal::IntegralHistogram integral_of(const Bundle& bundle, const std::string& video);

// Normalized histogram of each annotated interval, one per row.
Eigen::MatrixXd interval_features(const temporal::IntegralHistogram& integral,
                                  const std::vector<IntervalAnnotation>& anns);

// One-vs-all attribute classifiers on the annotated training intervals.
attributes::LinearModelSet train_attribute_models(const Bundle& bundle, const attributes::TrainConfig& config);

// Scores of every annotated interval: shipped matrices, or classifier output
// for frame bundles.
ScoresByVideo score_annotated(const Bundle& bundle, const attributes::LinearModelSet* models);

// Multi-label AP over the annotated intervals of `videos`.
ApTable interval_ap(const Bundle& bundle, const ScoresByVideo& scores, const std::vector<std::string>& videos);

// Second-level stacking trained on training videos, applied to all videos.
ScoresByVideo stack_scores(const Bundle& bundle, const ScoresByVideo& base, attributes::StackMode mode,
                           const attributes::TrainConfig& config);

// Association weights mined from the bundle's scripts, L1-normalized.
corpus::WeightMatrix mine_weights(const Bundle& bundle, const std::string& kind, corpus::MatchMode mode);

// Sequence features (max-pooled scores) of `videos`, labeled with their composite.
composites::SequenceSet sequence_set(const Bundle& bundle, const ScoresByVideo& scores,
                                     const std::vector<std::string>& videos);

// Background classifier on training intervals (foreground) and the gaps
// between them (background).
temporal::BackgroundModel train_background_model(const Bundle& bundle, const attributes::TrainConfig& config);

// Test-time sequence features from agglomerative segments of uniform intervals.
composites::SequenceSet segmented_sequence_set(const Bundle& bundle, const std::vector<std::string>& videos,
                                               const attributes::LinearModelSet& models,
                                               const temporal::BackgroundModel* background, double threshold,
                                               long interval,
                                               std::vector<std::pair<std::string, temporal::Segment>>* segments);

// Composite scores for `test` with columns in `composites` order.
composites::CompositeScores classify_composites(CompositeMode mode, const composites::SequenceSet& train,
                                                const composites::SequenceSet& test,
                                                const std::vector<std::string>& composites,
                                                const corpus::WeightMatrix& weights,
                                                const attributes::TrainConfig& train_config,
                                                const composites::PstConfig& pst);

double accuracy(const composites::CompositeScores& scores, const composites::SequenceSet& truth);
ApTable composite_ap(const composites::CompositeScores& scores, const composites::SequenceSet& truth);

// Runs the whole pipeline and writes every artifact under config.output.
EvalReport run_experiment(const ExperimentConfig& config);

}  // namespace actrec::harness
