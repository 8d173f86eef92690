#include "actrec/psinfer/part_graph.h"

#include <algorithm>
#include <sstream>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"
#include "actrec/posefeat/joint_tracks.h"

namespace actrec::psinfer {

int PartGraph::root() const {
  auto it = std::find(parent.begin(), parent.end(), -1);
  return it == parent.end() ? -1 : static_cast<int>(it - parent.begin());
}

std::vector<int> PartGraph::children(int part) const {
  std::vector<int> out;
  for (int p = 0; p < num_parts(); ++p) {
    if (parent[p] == part) out.push_back(p);
  }
  return out;
}

std::vector<int> PartGraph::topological_order() const {
  std::vector<int> order{root()};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int c : children(order[i])) order.push_back(c);
  }
  return order;
}

void PartGraph::validate() const {
  const int n = num_parts();
  if (n == 0) throw ValidationError("part graph: no parts");
  if (static_cast<int>(parent.size()) != n || static_cast<int>(pairwise.size()) != n) {
    throw ValidationError("part graph: inconsistent sizes");
  }
  if (std::count(parent.begin(), parent.end(), -1) != 1) throw ValidationError("part graph: needs exactly one root");
  for (int p = 0; p < n; ++p) {
    if (parent[p] < -1 || parent[p] >= n || parent[p] == p) throw ValidationError("part graph: bad parent of " + names[p]);
    if (parent[p] >= 0 && !(pairwise[p].var_x > 0 && pairwise[p].var_y > 0)) {
      throw ValidationError("part graph: non-positive variance on edge to " + names[p]);
    }
  }
  if (static_cast<int>(topological_order().size()) != n) throw ValidationError("part graph: not connected (cycle?)");
}

void PartGraph::save_csv(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "part,parent,mean_dx,mean_dy,var_x,var_y\n";
  for (int p = 0; p < num_parts(); ++p) {
    const auto& e = pairwise[p];
    out << names[p] << ',' << (parent[p] < 0 ? "-" : names[parent[p]]) << ',' << csv::format_exact(e.mean_dx) << ','
        << csv::format_exact(e.mean_dy) << ',' << csv::format_exact(e.var_x) << ',' << csv::format_exact(e.var_y)
        << '\n';
  }
  io::write_file(path, out.str());
}

PartGraph PartGraph::load_csv(const std::filesystem::path& path) {
  auto lines = io::read_lines(path);
  if (lines.empty() || io::trim(lines[0]) != "part,parent,mean_dx,mean_dy,var_x,var_y") {
    throw ValidationError(path.string() + ": expected header part,parent,mean_dx,mean_dy,var_x,var_y");
  }
  std::vector<std::vector<std::string>> rows;
  PartGraph g;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (io::trim(lines[l]).empty()) continue;
    auto f = csv::split(lines[l]);
    if (f.size() != 6) throw ValidationError(path.string() + ":" + std::to_string(l + 1) + ": expected 6 fields");
    g.names.push_back(f[0]);
    rows.push_back(f);
  }
  for (const auto& f : rows) {
    int parent = -1;
    if (f[1] != "-") {
      auto it = std::find(g.names.begin(), g.names.end(), f[1]);
      if (it == g.names.end()) throw ValidationError(path.string() + ": unknown parent '" + f[1] + "'");
      parent = static_cast<int>(it - g.names.begin());
    }
    g.parent.push_back(parent);
    g.pairwise.push_back({csv::parse_double(f[2], path.string()), csv::parse_double(f[3], path.string()),
                          csv::parse_double(f[4], path.string()), csv::parse_double(f[5], path.string())});
  }
  g.validate();
  return g;
}

PartGraph default_part_graph() {
  using posefeat::Part;
  PartGraph g;
  for (int p = 0; p < posefeat::kNumParts; ++p) g.names.emplace_back(posefeat::part_name(static_cast<Part>(p)));
  g.parent.assign(posefeat::kNumParts, -1);
  g.pairwise.assign(posefeat::kNumParts, Pairwise{});
  auto edge = [&](Part child, Part parent, double dx, double dy, double var) {
    g.parent[static_cast<int>(child)] = static_cast<int>(parent);
    g.pairwise[static_cast<int>(child)] = {dx, dy, var, var};
  };
  // Subject faces the camera, so its right side appears on the image left.
  edge(Part::kHead, Part::kTorso, 0, -70, 225);
  edge(Part::kRightShoulder, Part::kTorso, -35, -45, 100);
  edge(Part::kLeftShoulder, Part::kTorso, 35, -45, 100);
  edge(Part::kRightElbow, Part::kRightShoulder, -5, 45, 400);
  edge(Part::kLeftElbow, Part::kLeftShoulder, 5, 45, 400);
  edge(Part::kRightWrist, Part::kRightElbow, 0, 40, 625);
  edge(Part::kLeftWrist, Part::kLeftElbow, 0, 40, 625);
  edge(Part::kRightHand, Part::kRightWrist, 0, 12, 64);
  edge(Part::kLeftHand, Part::kLeftWrist, 0, 12, 64);
  return g;
}

}  // namespace actrec::psinfer
