#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace actrec {

// Partition of a histogram vector into consecutive codebook blocks.
struct BlockLayout {
  std::vector<std::size_t> sizes;

  std::size_t total() const { return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}); }
  std::size_t offset(std::size_t block) const {
    return std::accumulate(sizes.begin(), sizes.begin() + static_cast<long>(block), std::size_t{0});
  }
  std::size_t num_blocks() const { return sizes.size(); }

  // Each block is divided by its own sum; blocks summing to zero stay zero.
  void normalize(Eigen::Ref<Eigen::VectorXd> hist) const {
    std::size_t off = 0;
    for (std::size_t s : sizes) {
      auto seg = hist.segment(static_cast<long>(off), static_cast<long>(s));
      double sum = seg.sum();
      if (sum > 0.0) seg /= sum;
      off += s;
    }
  }
};

}  // namespace actrec
