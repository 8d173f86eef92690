#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "actrec/attributes/linear_model.h"
#include "actrec/attributes/score_matrix.h"

namespace actrec::attributes {

enum class StackMode { kContext, kCooccurrence, kBaseContext, kBaseCooccurrence, kAll };

StackMode parse_stack_mode(std::string_view name);
std::string_view stack_mode_name(StackMode mode);

// One video: its base score matrix, optional base features (one interval per
// row, required by modes that include the base feature) and, for training,
// the attribute indices present in each interval.
struct StackSequence {
  ScoreMatrix scores;
  std::optional<Eigen::MatrixXd> features;
  std::vector<std::vector<int>> labels;
};

// Second-level feature of attribute i at interval t:
//   context           g_con_t(S)                       n
//   cooccurrence      g_coocc_i(s_t)                   n - 1
//   base+context      [x_t; g_con_t(S)]                N + n
//   base+cooccurrence [x_t; g_coocc_i(s_t)]            N + n - 1
//   all               [x_t; g_con_t(S); g_coocc_i(s_t)] N + n + n - 1
Eigen::VectorXd stacked_feature(const StackSequence& seq, long t, long i, StackMode mode, double floor);
long stacked_dim(StackMode mode, long base_dim, long num_attributes);

struct StackedModel {
  StackMode mode = StackMode::kCooccurrence;
  LinearModelSet models;  // one second-level classifier per attribute
  long base_dim = 0;
  // Per-attribute column standardization fitted on the training rows:
  // feature' = (feature - mean) * scale, scale 0 for constant columns.
  std::vector<Eigen::VectorXd> feature_mean;
  std::vector<Eigen::VectorXd> feature_scale;
};

StackedModel train_stacked(const std::vector<StackSequence>& train, StackMode mode, const TrainConfig& config);
ScoreMatrix score_stacked(const StackedModel& model, const StackSequence& seq);

// Trains on `train` (ground-truth intervals) and scores every sequence of `eval`.
std::vector<ScoreMatrix> train_and_score_stacked(const std::vector<StackSequence>& train,
                                                 const std::vector<StackSequence>& eval, StackMode mode,
                                                 const TrainConfig& config);

}  // namespace actrec::attributes
