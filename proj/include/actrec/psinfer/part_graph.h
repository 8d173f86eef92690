#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace actrec::psinfer {

// Gaussian over the child position relative to its parent.
struct Pairwise {
  double mean_dx = 0.0;
  double mean_dy = 0.0;
  double var_x = 1.0;
  double var_y = 1.0;

  // Log potential up to a constant: -(dx - mx)^2 / (2 vx) - (dy - my)^2 / (2 vy).
  double log_potential(double dx, double dy) const {
    double ex = dx - mean_dx, ey = dy - mean_dy;
    return -ex * ex / (2.0 * var_x) - ey * ey / (2.0 * var_y);
  }
};

// Tree over parts; parent[root] == -1.
struct PartGraph {
  std::vector<std::string> names;
  std::vector<int> parent;
  std::vector<Pairwise> pairwise;  // entry of the root is unused

  int num_parts() const { return static_cast<int>(names.size()); }
  int root() const;
  std::vector<int> children(int part) const;
  // Parents before children.
  std::vector<int> topological_order() const;
  // Throws ValidationError unless this is a spanning tree with positive variances.
  void validate() const;

  // CSV "part,parent,mean_dx,mean_dy,var_x,var_y"; the root's parent is "-".
  void save_csv(const std::filesystem::path& path) const;
  static PartGraph load_csv(const std::filesystem::path& path);
};

// Ten-part upper-body tree rooted at the torso; offsets in pixels, y down.
PartGraph default_part_graph();

}  // namespace actrec::psinfer
