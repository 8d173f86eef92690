#include "actrec/psinfer/hand_likelihood.h"

#include <cmath>
#include <sstream>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::psinfer {

HandHypothesisSet HandHypothesisSet::load_csv(const std::filesystem::path& path) {
  auto lines = io::read_lines(path);
  if (lines.empty() || io::trim(lines[0]) != "x,y,score") throw ValidationError(path.string() + ": expected header x,y,score");
  HandHypothesisSet set;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (io::trim(lines[l]).empty()) continue;
    auto f = csv::split(lines[l]);
    std::string where = path.string() + ":" + std::to_string(l + 1);
    if (f.size() != 3) throw ValidationError(where + ": expected 3 fields");
    set.hypotheses.push_back({csv::parse_double(f[0], where), csv::parse_double(f[1], where),
                              csv::parse_double(f[2], where)});
  }
  return set;
}

void HandHypothesisSet::save_csv(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "x,y,score\n";
  for (const auto& h : hypotheses) {
    out << csv::format_g9(h.x) << ',' << csv::format_g9(h.y) << ',' << csv::format_g9(h.score) << '\n';
  }
  io::write_file(path, out.str());
}

HandLikelihood hand_likelihood_map(const HandHypothesisSet& set, long height, long width) {
  if (height < 1 || width < 1) throw ValidationError("hand likelihood: grid dims must be positive");
  if (!(set.precision > 0)) throw ValidationError("hand likelihood: precision must be positive");
  HandLikelihood out;
  out.grid = Grid::Zero(height, width);
  bool any = false;
  for (const auto& h : set.hypotheses) {
    const double w = h.score - set.offset;
    if (w < 0) continue;
    any = true;
    // The kernel is separable: exp(-p dx^2) * exp(-p dy^2).
    Eigen::VectorXd ky(height), kx(width);
    for (long y = 0; y < height; ++y) ky[y] = std::exp(-set.precision * (y - h.y) * (y - h.y));
    for (long x = 0; x < width; ++x) kx[x] = std::exp(-set.precision * (x - h.x) * (x - h.x));
    out.grid.noalias() += w * ky * kx.transpose();
  }
  out.empty = !any;
  return out;
}

}  // namespace actrec::psinfer
