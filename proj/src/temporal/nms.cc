#include "actrec/temporal/nms.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::temporal {

long intersection(long s1, long e1, long s2, long e2) { return std::max(0L, std::min(e1, e2) - std::max(s1, s2) + 1); }

double iou(long s1, long e1, long s2, long e2) {
  long inter = intersection(s1, e1, s2, e2);
  long uni = (e1 - s1 + 1) + (e2 - s2 + 1) - inter;
  return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

std::vector<Detection> score_windows(const IntegralHistogram& integral, const attributes::LinearModelSet& models,
                                     const std::vector<WindowLevel>& schedule, const std::string& video) {
  if (models.dim != integral.num_bins()) {
    throw ValidationError("score_windows: models expect " + std::to_string(models.dim) + " dims, histogram has " +
                          std::to_string(integral.num_bins()));
  }
  std::vector<Detection> out;
  for (const auto& level : schedule) {
    auto starts = window_starts(integral.num_frames(), level);
    if (starts.empty()) continue;
    Eigen::MatrixXd x(static_cast<long>(starts.size()), integral.num_bins());
    for (std::size_t w = 0; w < starts.size(); ++w) {
      x.row(static_cast<long>(w)) = window_histogram(integral, starts[w], starts[w] + level.size - 1).transpose();
    }
    auto s = attributes::score_intervals(models, x);
    for (std::size_t i = 0; i < models.attributes.size(); ++i) {
      if (!models.models[i]) continue;
      for (std::size_t w = 0; w < starts.size(); ++w) {
        out.push_back({video, models.attributes[i], starts[w], starts[w] + level.size - 1,
                       s.values(static_cast<long>(i), static_cast<long>(w))});
      }
    }
  }
  return out;
}

std::vector<Detection> nms(std::vector<Detection> candidates, const NmsOptions& options) {
  std::stable_sort(candidates.begin(), candidates.end(), [](const Detection& a, const Detection& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.start != b.start) return a.start < b.start;
    return a.length() < b.length();
  });
  std::vector<Detection> kept;
  for (const auto& c : candidates) {
    bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
      if (options.use_iou) return iou(c.start, c.end, k.start, k.end) > options.iou_threshold;
      return intersection(c.start, c.end, k.start, k.end) > options.max_overlap_frames;
    });
    if (!suppressed) kept.push_back(c);
  }
  return kept;
}

std::vector<Detection> nms_grouped(const std::vector<Detection>& candidates, const NmsOptions& options) {
  std::map<std::pair<std::string, std::string>, std::vector<Detection>> groups;
  for (const auto& c : candidates) groups[{c.video, c.attribute}].push_back(c);
  std::vector<Detection> out;
  for (auto& [key, group] : groups) {
    auto kept = nms(std::move(group), options);
    out.insert(out.end(), kept.begin(), kept.end());
  }
  return out;
}

void save_detections(const std::filesystem::path& path, const std::vector<Detection>& detections) {
  std::ostringstream out;
  out << "video,attribute,start,end,score\n";
  for (const auto& d : detections) {
    out << d.video << ',' << d.attribute << ',' << d.start << ',' << d.end << ',' << csv::format_g9(d.score) << '\n';
  }
  io::write_file(path, out.str());
}

std::vector<Detection> load_detections(const std::filesystem::path& path) {
  auto lines = io::read_lines(path);
  if (lines.empty() || io::trim(lines[0]) != "video,attribute,start,end,score") {
    throw ValidationError(path.string() + ": expected header video,attribute,start,end,score");
  }
  std::vector<Detection> out;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (io::trim(lines[l]).empty()) continue;
    auto f = csv::split(lines[l]);
    std::string where = path.string() + ":" + std::to_string(l + 1);
    if (f.size() != 5) throw ValidationError(where + ": expected 5 fields");
    Detection d{f[0], f[1], csv::parse_int(f[2], where), csv::parse_int(f[3], where), csv::parse_double(f[4], where)};
    if (d.start < 0 || d.end < d.start) throw ValidationError(where + ": invalid frame range");
    out.push_back(d);
  }
  return out;
}

}  // namespace actrec::temporal
