#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "actrec/attributes/linear_model.h"
#include "actrec/attributes/score_matrix.h"

namespace actrec::composites {

// g^seq: max over all intervals of each attribute score.
Eigen::VectorXd seq_feature(const Eigen::MatrixXd& scores);
Eigen::VectorXd seq_feature(const attributes::ScoreMatrix& scores);

// Sequence features, one row per sequence.
struct SequenceSet {
  std::vector<std::string> ids;
  std::vector<std::string> composites;  // empty string when unlabeled
  std::vector<std::string> attributes;
  Eigen::MatrixXd features;

  long size() const { return static_cast<long>(ids.size()); }
  void add(const std::string& id, const Eigen::VectorXd& g, const std::string& composite);
  SequenceSet subset(const std::vector<long>& rows) const;
  void validate() const;
};

// Per-composite scores for a batch of sequences; higher is better.
struct CompositeScores {
  std::vector<std::string> sequences;
  std::vector<std::string> composites;
  Eigen::MatrixXd values;             // sequences x composites
  std::vector<std::string> flagged;   // composites without a usable model

  // Argmax over composites; ties go to the lower column.
  long predict_index(long row) const;
  const std::string& predict(long row) const { return composites[predict_index(row)]; }

  // "sequence,composite,score" sorted by sequence, then descending score.
  void save_csv(const std::filesystem::path& path) const;
  static CompositeScores load_csv(const std::filesystem::path& path);
};

// One-vs-all linear SVMs over sequence features. Composites with no positive
// training sequence get the config floor and are flagged.
CompositeScores classify_svm(const SequenceSet& train, const SequenceSet& test,
                             const std::vector<std::string>& composites, const attributes::TrainConfig& config);

struct NnMatch {
  long index = -1;  // row in the training set
  std::string composite;
  double distance = 0.0;
};

// Nearest training sequence by L2 distance; ties go to the lowest sequence id.
NnMatch classify_nn(const SequenceSet& train, const Eigen::Ref<const Eigen::VectorXd>& g);

// Score per composite = minus the distance to its nearest training sequence.
// Composites absent from training get -infinity and are flagged.
CompositeScores nn_scores(const SequenceSet& train, const SequenceSet& test,
                          const std::vector<std::string>& composites);

}  // namespace actrec::composites
