#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "actrec/attributes/score_matrix.h"

namespace actrec::attributes {

struct TrainConfig {
  double lambda = 1e-2;   // L2 regularization
  int epochs = 300;       // full-batch subgradient steps
  std::uint64_t seed = 0;
  bool balanced = true;   // weight each class by m / (2 m_c)
  bool z_normalize = true;
  double floor = -10.0;   // score for skipped attributes and empty contexts
};

// Linear scorer w.x + b with training-score statistics for z-normalization.
struct LinearModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  double score_mean = 0.0;
  double score_std = 1.0;
  bool constant_scores = false;  // std was zero; normalization only centers
  std::vector<double> objective_history;  // objective of the kept iterate after each epoch

  double raw_score(const Eigen::Ref<const Eigen::VectorXd>& x) const { return weights.dot(x) + bias; }
  double normalized_score(double raw) const {
    return constant_scores ? raw - score_mean : (raw - score_mean) / score_std;
  }
};

// Regularized hinge loss
//   lambda/2 (|w|^2 + b^2) + sum_j c_j max(0, 1 - y_j (w.x_j + b)) / m
// minimized by full-batch subgradient descent with step 1/(lambda t) and
// projection onto the ball of radius 1/sqrt(lambda). Subgradient steps are not
// monotone, so the best iterate seen so far is kept and returned.
// `labels` are +1/-1, one per row of `features`. Needs both classes.
LinearModel train_linear_binary(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                                const TrainConfig& config);

double hinge_objective(const LinearModel& model, const Eigen::MatrixXd& features, const std::vector<int>& labels,
                       const TrainConfig& config);

// One-vs-all models, one slot per attribute (empty when skipped).
struct LinearModelSet {
  std::vector<std::string> attributes;
  std::vector<std::optional<LinearModel>> models;
  std::vector<std::string> skipped;  // attributes lacking positives or negatives
  TrainConfig config;
  long dim = 0;

  void save_json(const std::filesystem::path& path) const;
  static LinearModelSet load_json(const std::filesystem::path& path);
};

// `features` holds one interval per row; labels[t] lists the attribute indices
// present in interval t. Attributes with a single class are skipped and listed
// in `skipped`. Throws ValidationError on NaN features.
LinearModelSet train_linear_ova(const Eigen::MatrixXd& features, const std::vector<std::vector<int>>& labels,
                                const std::vector<std::string>& attributes, const TrainConfig& config);

// S[i][t] = w_i.x_t + b_i, z-normalized when the set's config asks for it.
// Skipped attributes get config.floor and a flagged row.
ScoreMatrix score_intervals(const LinearModelSet& models, const Eigen::MatrixXd& features,
                            const std::vector<std::string>& interval_ids = {});

// Per-attribute seed derived from the global seed.
std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t index);

}  // namespace actrec::attributes
