#pragma once

#include <optional>
#include <string>
#include <vector>

#include "actrec/harness/bundle_io.h"
#include "actrec/temporal/nms.h"

namespace actrec::harness {

// Mean of precision@k over the positives after a stable descending sort
// (ties keep the input order). Empty when there is no positive.
std::optional<double> average_precision(const std::vector<double>& scores, const std::vector<int>& labels);

// Per-category APs plus their unweighted mean over categories with positives.
struct ApTable {
  std::vector<std::string> categories;
  std::vector<std::optional<double>> ap;  // empty: no positives in the test set
  double mean = 0.0;
  long evaluated = 0;
};
ApTable mean_average_precision(const std::vector<std::string>& categories,
                               const std::vector<std::vector<double>>& scores,  // [category][item]
                               const std::vector<std::vector<int>>& labels);

enum class MatchCriterion { kMidpoint, kIou };

struct DetectionMatchOptions {
  MatchCriterion criterion = MatchCriterion::kMidpoint;
  double iou_threshold = 0.5;
};

// True when detection [s, e] may match ground truth [gs, ge].
bool detection_matches(long s, long e, long gs, long ge, const DetectionMatchOptions& options);

// Per-attribute detection AP: detections in descending score order each
// claim at most one unmatched ground-truth interval of the same video (the
// earliest-starting candidate); P is the number of ground-truth intervals.
ApTable eval_detection(const std::vector<temporal::Detection>& detections,
                       const std::vector<IntervalAnnotation>& truth, const std::vector<std::string>& attributes,
                       const DetectionMatchOptions& options = {});

// Spearman rank correlation with average ranks for ties; 0 when either side is constant.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace actrec::harness
