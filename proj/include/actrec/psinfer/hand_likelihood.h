#pragma once

#include <filesystem>
#include <vector>

#include "actrec/psinfer/grid.h"

namespace actrec::psinfer {

struct HandHypothesis {
  double x = 0.0;
  double y = 0.0;
  double score = 0.0;
};

struct HandHypothesisSet {
  std::vector<HandHypothesis> hypotheses;
  double precision = 0.005;  // multiplies the squared distance; 0.005 gives a 10 px kernel std
  double offset = -1.0;      // m: weights are score - m, hypotheses below m are dropped

  // CSV "x,y,score".
  static HandHypothesisSet load_csv(const std::filesystem::path& path);
  void save_csv(const std::filesystem::path& path) const;
};

struct HandLikelihood {
  Grid grid;
  bool empty = false;  // no hypothesis survived; the grid is all zero
};

// p(H | l) = sum_k (s_k - m) exp(-precision |d_k - l|^2) at every pixel.
HandLikelihood hand_likelihood_map(const HandHypothesisSet& set, long height, long width);

}  // namespace actrec::psinfer
