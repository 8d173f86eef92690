#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "actrec/attributes/linear_model.h"
#include "actrec/attributes/score_matrix.h"
#include "actrec/temporal/integral_histogram.h"

namespace actrec::temporal {

struct Segment {
  long start = 0;  // inclusive frames
  long end = 0;
  Eigen::VectorXd scores;
  bool background = false;

  long length() const { return end - start + 1; }
};

// Consecutive intervals of `interval` frames; a trailing remainder forms a
// shorter last interval.
std::vector<std::pair<long, long>> uniform_intervals(long num_frames, long interval = 60);

// Cosine similarity; 0 when either vector has zero norm.
double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

// Scores for the union of two adjacent segments.
using Rescorer = std::function<Eigen::VectorXd(const Segment& left, const Segment& right)>;

// Length-weighted mean of the two score vectors.
Rescorer mean_rescorer();
// Window histogram of the union scored by the attribute models.
Rescorer histogram_rescorer(const IntegralHistogram& integral, const attributes::LinearModelSet& models);

struct SegmentationOptions {
  long interval = 60;
  long num_frames = -1;  // defaults to interval * T
  Rescorer rescorer;     // defaults to mean_rescorer()
};

// Merges the most similar adjacent pair (leftmost on ties) while its cosine
// similarity is at least `threshold`.
std::vector<Segment> segment_agglomerative(const attributes::ScoreMatrix& uniform, double threshold,
                                           const SegmentationOptions& options = {});

// Linear background-vs-activity classifier on interval features; a segment is
// background when its raw score exceeds `threshold`.
struct BackgroundModel {
  attributes::LinearModel model;
  double threshold = 0.0;

  bool is_background(const Eigen::Ref<const Eigen::VectorXd>& features) const {
    return model.raw_score(features) > threshold;
  }
  void save_json(const std::filesystem::path& path) const;
  static BackgroundModel load_json(const std::filesystem::path& path);
};

// Rows of `features` are spans; `background[j]` marks unannotated spans.
BackgroundModel train_background(const Eigen::MatrixXd& features, const std::vector<bool>& background,
                                 const attributes::TrainConfig& config);

// Flags background segments. Without a model the segments pass through unchanged.
using SegmentFeatures = std::function<Eigen::VectorXd(const Segment&)>;
std::vector<Segment> filter_background(std::vector<Segment> segments, const BackgroundModel* model,
                                       const SegmentFeatures& features);

struct PooledFeature {
  Eigen::VectorXd values;
  bool all_background = false;  // every segment flagged; values hold the floor
};

// Max over the score vectors of segments not flagged as background.
PooledFeature pool_segments(const std::vector<Segment>& segments, long num_attributes, double floor = -10.0);

// JSON lines: {"video", "start", "end", "scores", "background"}.
void save_segments(const std::filesystem::path& path, const std::vector<std::pair<std::string, Segment>>& segments);
std::vector<std::pair<std::string, Segment>> load_segments(const std::filesystem::path& path);

}  // namespace actrec::temporal
