#pragma once

#include <filesystem>
#include <vector>

#include <Eigen/Dense>

namespace actrec::psinfer {

// Per-part likelihood up to scale; rows are y, columns are x.
using Grid = Eigen::MatrixXd;
using LikelihoodGrids = std::vector<Grid>;

// Throws ValidationError unless all grids share dims and are finite, >= 0,
// with a positive entry.
void validate_grids(const LikelihoodGrids& grids);

// Binary: "ACTGRID1", u64 parts, u64 H, u64 W, then parts*H*W doubles, row-major
// per part.
void save_grids(const std::filesystem::path& path, const LikelihoodGrids& grids);
LikelihoodGrids load_grids(const std::filesystem::path& path);

}  // namespace actrec::psinfer
