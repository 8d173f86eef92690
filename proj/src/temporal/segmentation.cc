#include "actrec/temporal/segmentation.h"

#include <limits>
#include <sstream>

#include "json.hpp"

#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::temporal {

std::vector<std::pair<long, long>> uniform_intervals(long num_frames, long interval) {
  if (interval < 1) throw ValidationError("uniform intervals: interval must be >= 1");
  std::vector<std::pair<long, long>> out;
  for (long s = 0; s < num_frames; s += interval) out.emplace_back(s, std::min(num_frames, s + interval) - 1);
  return out;
}

double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

Rescorer mean_rescorer() {
  return [](const Segment& l, const Segment& r) -> Eigen::VectorXd {
    double wl = static_cast<double>(l.length()), wr = static_cast<double>(r.length());
    return (wl * l.scores + wr * r.scores) / (wl + wr);
  };
}

Rescorer histogram_rescorer(const IntegralHistogram& integral, const attributes::LinearModelSet& models) {
  return [&integral, &models](const Segment& l, const Segment& r) -> Eigen::VectorXd {
    Eigen::MatrixXd x = window_histogram(integral, l.start, r.end).transpose();
    return attributes::score_intervals(models, x).values.col(0);
  };
}

std::vector<Segment> segment_agglomerative(const attributes::ScoreMatrix& uniform, double threshold,
                                           const SegmentationOptions& options) {
  const long t = uniform.num_intervals();
  if (t < 1) throw ValidationError("segmentation: no intervals");
  long frames = options.num_frames < 0 ? t * options.interval : options.num_frames;
  auto spans = uniform_intervals(frames, options.interval);
  if (static_cast<long>(spans.size()) != t) {
    throw ValidationError("segmentation: " + std::to_string(t) + " score columns for " +
                          std::to_string(spans.size()) + " intervals");
  }
  Rescorer rescore = options.rescorer ? options.rescorer : mean_rescorer();

  std::vector<Segment> segs;
  for (long c = 0; c < t; ++c) segs.push_back({spans[c].first, spans[c].second, uniform.values.col(c), false});
  std::vector<double> sim;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) sim.push_back(cosine_similarity(segs[i].scores, segs[i + 1].scores));

  while (!sim.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < sim.size(); ++i) {
      if (sim[i] > sim[best]) best = i;
    }
    if (!(sim[best] >= threshold)) break;
    Segment merged{segs[best].start, segs[best + 1].end, rescore(segs[best], segs[best + 1]), false};
    segs[best] = std::move(merged);
    segs.erase(segs.begin() + static_cast<long>(best) + 1);
    sim.erase(sim.begin() + static_cast<long>(best));
    if (best > 0) sim[best - 1] = cosine_similarity(segs[best - 1].scores, segs[best].scores);
    if (best < sim.size()) sim[best] = cosine_similarity(segs[best].scores, segs[best + 1].scores);
  }
  return segs;
}

void BackgroundModel::save_json(const std::filesystem::path& path) const {
  nlohmann::json j{{"format", "actrec-background-1"},
                   {"weights", std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size())},
                   {"bias", model.bias},
                   {"threshold", threshold}};
  io::write_file(path, j.dump(2) + "\n");
}

BackgroundModel BackgroundModel::load_json(const std::filesystem::path& path) {
  try {
    auto j = nlohmann::json::parse(io::read_file(path));
    if (j.at("format") != "actrec-background-1") throw ValidationError(path.string() + ": unknown format");
    BackgroundModel m;
    auto w = j.at("weights").get<std::vector<double>>();
    m.model.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<long>(w.size()));
    m.model.bias = j.at("bias").get<double>();
    m.threshold = j.at("threshold").get<double>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

BackgroundModel train_background(const Eigen::MatrixXd& features, const std::vector<bool>& background,
                                 const attributes::TrainConfig& config) {
  if (static_cast<long>(background.size()) != features.rows()) {
    throw ValidationError("background training: label count does not match feature rows");
  }
  std::vector<int> y;
  for (bool b : background) y.push_back(b ? 1 : -1);
  BackgroundModel m;
  m.model = attributes::train_linear_binary(features, y, config);
  return m;
}

std::vector<Segment> filter_background(std::vector<Segment> segments, const BackgroundModel* model,
                                       const SegmentFeatures& features) {
  if (model == nullptr) return segments;
  for (auto& s : segments) s.background = model->is_background(features(s));
  return segments;
}

PooledFeature pool_segments(const std::vector<Segment>& segments, long num_attributes, double floor) {
  PooledFeature out;
  out.values = Eigen::VectorXd::Constant(num_attributes, -std::numeric_limits<double>::infinity());
  bool any = false;
  for (const auto& s : segments) {
    if (s.background) continue;
    if (s.scores.size() != num_attributes) throw ValidationError("pool_segments: score length mismatch");
    out.values = out.values.cwiseMax(s.scores);
    any = true;
  }
  if (!any) {
    out.values.setConstant(floor);
    out.all_background = true;
  }
  return out;
}

void save_segments(const std::filesystem::path& path, const std::vector<std::pair<std::string, Segment>>& segments) {
  std::ostringstream out;
  for (const auto& [video, s] : segments) {
    nlohmann::json j{{"video", video},
                     {"start", s.start},
                     {"end", s.end},
                     {"scores", std::vector<double>(s.scores.data(), s.scores.data() + s.scores.size())},
                     {"background", s.background}};
    out << j.dump() << '\n';
  }
  io::write_file(path, out.str());
}

std::vector<std::pair<std::string, Segment>> load_segments(const std::filesystem::path& path) {
  std::vector<std::pair<std::string, Segment>> out;
  auto lines = io::read_lines(path);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    if (io::trim(lines[l]).empty()) continue;
    try {
      auto j = nlohmann::json::parse(lines[l]);
      Segment s;
      s.start = j.at("start").get<long>();
      s.end = j.at("end").get<long>();
      auto v = j.at("scores").get<std::vector<double>>();
      s.scores = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
      s.background = j.value("background", false);
      out.emplace_back(j.at("video").get<std::string>(), std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path.string() + ":" + std::to_string(l + 1) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace actrec::temporal
