#include "actrec/composites/script_transfer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "actrec/common/error.h"

namespace actrec::composites {

void check_alignment(const corpus::WeightMatrix& w, const std::vector<std::string>& attributes) {
  if (w.col_labels != attributes) {
    throw ValidationError("weight matrix columns do not match the attribute vocabulary (" +
                          std::to_string(w.cols()) + " vs " + std::to_string(attributes.size()) + " labels)");
  }
}

Eigen::VectorXd script_score(const Eigen::Ref<const Eigen::VectorXd>& g, const corpus::WeightMatrix& w) {
  if (w.values.cols() != g.size()) {
    throw ValidationError("script_score: " + std::to_string(w.values.cols()) + " weight columns for " +
                          std::to_string(g.size()) + " attributes");
  }
  return w.values * g;
}

CompositeScores script_scores(const SequenceSet& set, const corpus::WeightMatrix& w) {
  if (!set.attributes.empty()) check_alignment(w, set.attributes);
  if (set.size() > 0 && w.values.cols() != set.features.cols()) {
    throw ValidationError("script_scores: weight columns do not match feature length");
  }
  CompositeScores out;
  out.sequences = set.ids;
  out.composites = w.row_labels;
  out.values = set.features * w.values.transpose();
  out.flagged = w.empty_row_ids();
  return out;
}

double weighted_distance(const Eigen::Ref<const Eigen::VectorXd>& w, const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b) {
  return std::sqrt((w.array() * (a - b).array().square()).sum());
}

namespace {

// Weight row per training sequence, or -1 when its composite is excluded.
std::vector<long> weight_rows(const SequenceSet& train, const corpus::WeightMatrix& w,
                              std::vector<std::string>& excluded) {
  std::vector<bool> empty(w.rows(), false);
  for (std::size_t z = 0; z < w.rows(); ++z) {
    empty[z] = w.values.row(static_cast<long>(z)).isZero(0.0);
    if (empty[z]) excluded.push_back(w.row_labels[z]);
  }
  if (excluded.size() == w.rows()) throw ValidationError("nn-script: every weight row is all-zero");
  std::vector<long> rows(train.ids.size(), -1);
  for (std::size_t d = 0; d < train.ids.size(); ++d) {
    long z = w.row_of(train.composites[d]);
    if (z < 0) throw ValidationError("nn-script: composite '" + train.composites[d] + "' has no weight row");
    if (!empty[z]) rows[d] = z;
  }
  return rows;
}

}  // namespace

NnScriptMatch nn_script_classify(const Eigen::Ref<const Eigen::VectorXd>& g, const SequenceSet& train,
                                 const corpus::WeightMatrix& w) {
  if (g.size() != w.values.cols() || train.features.cols() != g.size()) {
    throw ValidationError("nn-script: feature length does not match weight columns");
  }
  NnScriptMatch best;
  auto rows = weight_rows(train, w, best.excluded);
  double best_dist = std::numeric_limits<double>::infinity();
  for (long d = 0; d < train.size(); ++d) {
    if (rows[d] < 0) continue;
    double dist = weighted_distance(w.values.row(rows[d]).transpose(), g, train.features.row(d).transpose());
    if (dist < best_dist || (dist == best_dist && train.ids[d] < train.ids[best.index])) {
      best_dist = dist;
      best.index = d;
    }
  }
  if (best.index < 0) throw ValidationError("nn-script: no training sequence with a usable weight row");
  best.composite = train.composites[best.index];
  best.distance = best_dist;
  return best;
}

CompositeScores nn_script_scores(const SequenceSet& train, const SequenceSet& test, const corpus::WeightMatrix& w) {
  if (!train.attributes.empty()) check_alignment(w, train.attributes);
  if (train.features.cols() != test.features.cols() || test.features.cols() != w.values.cols()) {
    throw ValidationError("nn-script: feature length does not match weight columns");
  }
  CompositeScores out;
  out.sequences = test.ids;
  out.composites = w.row_labels;
  auto rows = weight_rows(train, w, out.flagged);
  out.values = Eigen::MatrixXd::Constant(test.size(), static_cast<long>(w.rows()),
                                         -std::numeric_limits<double>::infinity());
  for (long t = 0; t < test.size(); ++t) {
    for (long d = 0; d < train.size(); ++d) {
      if (rows[d] < 0) continue;
      double dist = weighted_distance(w.values.row(rows[d]).transpose(), test.features.row(t).transpose(),
                                      train.features.row(d).transpose());
      out.values(t, rows[d]) = std::max(out.values(t, rows[d]), -dist);
    }
  }
  return out;
}

}  // namespace actrec::composites
