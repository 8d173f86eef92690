#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "actrec/common/blocks.h"
#include "actrec/posefeat/features.h"

namespace actrec::posefeat {

struct KMeansOptions {
  int max_iterations = 100;
  double relative_tolerance = 1e-6;
};

// k = 2 * d visual words for one sub-feature at one trajectory length.
struct Codebook {
  std::string sub_feature;
  int length = 0;          // trajectory length the samples were computed at
  Eigen::MatrixXd centers;  // k x d
  std::uint64_t seed = 0;
  std::vector<double> inertia_history;  // one entry per assignment step

  long k() const { return centers.rows(); }
  long dim() const { return centers.cols(); }

  // Nearest center by L2; ties go to the lowest index.
  long quantize(const Eigen::Ref<const Eigen::VectorXd>& sample) const;
};

// k-means with k = 2 * dim over the rows of `samples`: k-means++ seeding from
// `seed`, Lloyd iterations until the relative inertia drop is below the
// tolerance, empty clusters re-seeded from the farthest point. Throws
// ValidationError when there are fewer than k distinct samples.
Codebook build_codebook(const Eigen::MatrixXd& samples, std::uint64_t seed, const std::string& sub_feature = "",
                        int length = 0, const KMeansOptions& options = {});

// General k-means entry point used by build_codebook.
Codebook kmeans(const Eigen::MatrixXd& samples, long k, std::uint64_t seed, const KMeansOptions& options = {});

// Ordered set of codebooks; block i of every BoW histogram uses codebook i.
struct CodebookBundle {
  std::vector<Codebook> blocks;

  BlockLayout layout() const;

  // Text format:
  //   codebook-bundle 1
  //   blocks <count>
  //   block <length> <sub_feature> <dim> <k> <seed>      (then k rows of d values)
  void save(const std::filesystem::path& path) const;
  static CodebookBundle load(const std::filesystem::path& path);
};

}  // namespace actrec::posefeat
