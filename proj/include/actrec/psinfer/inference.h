#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "actrec/psinfer/grid.h"
#include "actrec/psinfer/part_graph.h"

namespace actrec::psinfer {

enum class InferenceMode { kMap, kMarginal };
enum class MessageAlgorithm { kNaive, kDistanceTransform };

InferenceMode parse_inference_mode(const std::string& s);
MessageAlgorithm parse_message_algorithm(const std::string& s);

struct Placement {
  long x = 0;
  long y = 0;
};

struct InferenceResult {
  std::vector<Placement> placements;  // map mode, one per part
  double log_score = 0.0;             // map mode: log of the unnormalized posterior
  std::vector<Grid> marginals;        // marginal mode, each sums to 1
};

// Exact inference on the tree. Max-product messages either scan all position
// pairs or use separable generalized distance transforms; sum-product uses
// the full scan or separable log-sum-exp passes. Argmax ties go to the
// lowest (y, x).
InferenceResult infer(const LikelihoodGrids& grids, const PartGraph& graph, InferenceMode mode,
                      MessageAlgorithm algorithm = MessageAlgorithm::kDistanceTransform);

// sum_i log p(D | l_i) + sum_edges log psi; -inf when any unary is zero.
double configuration_log_score(const LikelihoodGrids& grids, const PartGraph& graph,
                               const std::vector<Placement>& placements);

// 1-D building blocks, exposed for testing.
// out[j] = max_i f[i] - a (i - j - shift)^2 with the maximizing i in arg[j]
// (lowest index on ties, -1 when every f[i] is -inf).
void distance_transform_1d(const std::vector<double>& f, double a, double shift, std::vector<double>& out,
                           std::vector<long>& arg);

// CSV "part,x,y".
void save_placements(const std::filesystem::path& path, const PartGraph& graph, const std::vector<Placement>& p);

}  // namespace actrec::psinfer
