#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "actrec/composites/sequence.h"
#include "actrec/corpus/weights.h"

namespace actrec::composites {

// Throws ValidationError unless the weight columns are exactly `attributes`.
void check_alignment(const corpus::WeightMatrix& w, const std::vector<std::string>& attributes);

// score_z = sum_i w_{z,i} g_i for every composite row of `w`.
Eigen::VectorXd script_score(const Eigen::Ref<const Eigen::VectorXd>& g, const corpus::WeightMatrix& w);

// Zero-shot scores for every sequence in `set`.
CompositeScores script_scores(const SequenceSet& set, const corpus::WeightMatrix& w);

// sqrt(sum_i w_i (a_i - b_i)^2)
double weighted_distance(const Eigen::Ref<const Eigen::VectorXd>& w, const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b);

struct NnScriptMatch {
  long index = -1;
  std::string composite;
  double distance = 0.0;
  std::vector<std::string> excluded;  // composites with all-zero weight rows
};

// Nearest training sequence where the distance to a sequence of composite z is
// weighted by row z of `w` (binarized, L1-normalized). Ties go to the lowest
// sequence id.
NnScriptMatch nn_script_classify(const Eigen::Ref<const Eigen::VectorXd>& g, const SequenceSet& train,
                                 const corpus::WeightMatrix& w);

// Minus the weighted distance to the nearest training sequence of each composite.
CompositeScores nn_script_scores(const SequenceSet& train, const SequenceSet& test, const corpus::WeightMatrix& w);

}  // namespace actrec::composites
