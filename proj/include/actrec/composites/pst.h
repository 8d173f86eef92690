#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "actrec/common/kv.h"
#include "actrec/composites/sequence.h"
#include "actrec/corpus/weights.h"

namespace actrec::composites {

struct PstConfig {
  double gamma = 0.5;   // weight of true labels against script predictions
  double delta = 0.25;  // fraction of most confident predictions kept per composite
  int k = 5;            // neighbours per node
  double alpha = 0.9;   // propagation mix
  double tol = 1e-12;
  int max_iters = 10000;
  bool zero_shot = false;         // ignore labels, gamma = 0
  bool squared_distance = false;  // exp(-d^2 / (2 sigma^2)) instead of exp(-0.5 sqrt(sigma) d)
  bool sigma_knn_mean = false;    // sigma over all k neighbours instead of the nearest one

  void validate() const;
  static PstConfig from_kv(const kv::KeyValues& kv);
  static PstConfig load(const std::filesystem::path& path);
  kv::KeyValues to_kv() const;
};

// l_{z,d}: Z x D with entries 1, 0 or kUnlabeled.
using LabelSet = Eigen::MatrixXi;
inline constexpr int kUnlabeled = -1;

// Labels from one composite index per sequence (-1 = unlabeled sequence).
LabelSet make_label_set(long num_composites, const std::vector<long>& composite_of_sequence);

// Initial table s^PST (Z x D). Labeled cells get gamma * l; unlabeled cells get
// (1 - gamma) * score when inside the per-composite top-delta among unlabeled
// sequences (ties at the cutoff are kept), else 0.
Eigen::MatrixXd pst_init(const Eigen::MatrixXd& script_scores, const LabelSet& labels, const PstConfig& config);

struct NeighborGraph {
  std::vector<std::string> nodes;
  Eigen::SparseMatrix<double> weights;  // symmetric, no self-loops
  double sigma = 0.0;
  int k = 0;

  long num_nodes() const { return weights.rows(); }
};

// k-NN graph over the rows of `features` with the union of directed edges.
NeighborGraph build_knn_graph(const Eigen::MatrixXd& features, int k, const PstConfig& options,
                              const std::vector<std::string>& ids = {});

// D^{-1/2} W D^{-1/2}; rows and columns of isolated nodes stay zero.
Eigen::SparseMatrix<double> normalized_adjacency(const NeighborGraph& graph);

struct Propagation {
  Eigen::MatrixXd scores;  // Z x D
  int iterations = 0;
  bool converged = false;
};

// F <- alpha S_n F + (1 - alpha) Y from F = Y until the max-abs change drops
// below tol or max_iters is reached.
Propagation propagate(const NeighborGraph& graph, const Eigen::MatrixXd& init, const PstConfig& config);

// Full transfer: graph over labeled, extra unlabeled and test sequences,
// initialized from script scores and labels. Returns scores for `test`.
CompositeScores run_pst(const SequenceSet& labeled, const SequenceSet& unlabeled, const SequenceSet& test,
                        const corpus::WeightMatrix& w, const PstConfig& config);

}  // namespace actrec::composites
