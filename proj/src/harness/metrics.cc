#include "actrec/harness/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "actrec/common/error.h"

namespace actrec::harness {

std::optional<double> average_precision(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw ValidationError("average precision: score and label counts differ");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double sum = 0.0;
  long hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (labels[order[k]] > 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  if (hits == 0) return std::nullopt;
  return sum / static_cast<double>(hits);
}

ApTable mean_average_precision(const std::vector<std::string>& categories,
                               const std::vector<std::vector<double>>& scores,
                               const std::vector<std::vector<int>>& labels) {
  if (scores.size() != categories.size() || labels.size() != categories.size()) {
    throw ValidationError("mean AP: category counts differ");
  }
  ApTable t;
  t.categories = categories;
  double sum = 0.0;
  for (std::size_t c = 0; c < categories.size(); ++c) {
    t.ap.push_back(average_precision(scores[c], labels[c]));
    if (t.ap.back()) {
      sum += *t.ap.back();
      ++t.evaluated;
    }
  }
  t.mean = t.evaluated > 0 ? sum / static_cast<double>(t.evaluated) : 0.0;
  return t;
}

bool detection_matches(long s, long e, long gs, long ge, const DetectionMatchOptions& options) {
  if (options.criterion == MatchCriterion::kIou) return temporal::iou(s, e, gs, ge) >= options.iou_threshold;
  // Midpoint in frame units; exact for odd and even lengths.
  long twice_mid = s + e;
  return twice_mid >= 2 * gs && twice_mid <= 2 * ge;
}

ApTable eval_detection(const std::vector<temporal::Detection>& detections,
                       const std::vector<IntervalAnnotation>& truth, const std::vector<std::string>& attributes,
                       const DetectionMatchOptions& options) {
  ApTable t;
  t.categories = attributes;
  double sum = 0.0;
  for (const auto& attr : attributes) {
    std::vector<const IntervalAnnotation*> gt;
    for (const auto& a : truth) {
      if (std::find(a.attributes.begin(), a.attributes.end(), attr) != a.attributes.end()) gt.push_back(&a);
    }
    std::stable_sort(gt.begin(), gt.end(), [](auto* a, auto* b) {
      return a->video != b->video ? a->video < b->video : a->start_frame < b->start_frame;
    });
    std::vector<const temporal::Detection*> dets;
    for (const auto& d : detections) {
      if (d.attribute == attr) dets.push_back(&d);
    }
    std::stable_sort(dets.begin(), dets.end(), [](auto* a, auto* b) { return a->score > b->score; });
    if (gt.empty()) {
      t.ap.emplace_back();
      continue;
    }
    std::vector<bool> used(gt.size(), false);
    double precision_sum = 0.0;
    long hits = 0;
    for (std::size_t k = 0; k < dets.size(); ++k) {
      for (std::size_t g = 0; g < gt.size(); ++g) {
        if (used[g] || gt[g]->video != dets[k]->video) continue;
        if (!detection_matches(dets[k]->start, dets[k]->end, gt[g]->start_frame, gt[g]->end_frame, options)) continue;
        used[g] = true;
        ++hits;
        precision_sum += static_cast<double>(hits) / static_cast<double>(k + 1);
        break;
      }
    }
    t.ap.push_back(precision_sum / static_cast<double>(gt.size()));
    sum += *t.ap.back();
    ++t.evaluated;
  }
  t.mean = t.evaluated > 0 ? sum / static_cast<double>(t.evaluated) : 0.0;
  return t;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw ValidationError("spearman: need two equal-length samples");
  auto ra = average_ranks(a), rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n, mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double cov = 0, va = 0, vb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    cov += (ra[i] - ma) * (rb[i] - mb);
    va += (ra[i] - ma) * (ra[i] - ma);
    vb += (rb[i] - mb) * (rb[i] - mb);
  }
  if (va == 0 || vb == 0) return 0.0;
  return cov / std::sqrt(va * vb);
}

}  // namespace actrec::harness
