#include <cmath>
#include <filesystem>
#include <random>
#include <set>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

#include "actrec/common/error.h"
#include "actrec/common/text_io.h"
#include "actrec/harness/bundle_io.h"
#include "actrec/harness/config.h"
#include "actrec/harness/experiment.h"
#include "actrec/harness/metrics.h"
#include "actrec/harness/synthetic.h"

using namespace actrec::harness;
namespace fs = std::filesystem;

namespace {

const fs::path kScratchRoot = fs::temp_directory_path() / ("actrec_harness_" + std::to_string(::getpid()));

struct ScratchCleanup {
  ~ScratchCleanup() {
    std::error_code ec;
    fs::remove_all(kScratchRoot, ec);
  }
} scratch_cleanup;

fs::path scratch(const std::string& name) {
  auto p = kScratchRoot / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// AP from ranks: each item's rank counts strictly higher scores plus equal
// scores at smaller indices.
std::optional<double> reference_ap(const std::vector<double>& s, const std::vector<int>& y) {
  double total = 0;
  long positives = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    ++positives;
    long rank = 1, above = 1;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (j == i) continue;
      bool ahead = s[j] > s[i] || (s[j] == s[i] && j < i);
      if (ahead) {
        ++rank;
        above += y[j] ? 1 : 0;
      }
    }
    total += static_cast<double>(above) / static_cast<double>(rank);
  }
  if (positives == 0) return std::nullopt;
  return total / static_cast<double>(positives);
}

// Brute-force matcher: walks detections best-first and, for each, searches
// every ground-truth interval for the earliest-starting unmatched match.
double reference_detection_ap(std::vector<actrec::temporal::Detection> dets,
                              const std::vector<IntervalAnnotation>& gt, const std::string& attr, bool iou) {
  std::vector<const IntervalAnnotation*> pool;
  for (const auto& g : gt) {
    for (const auto& a : g.attributes) {
      if (a == attr) pool.push_back(&g);
    }
  }
  std::vector<actrec::temporal::Detection> mine;
  for (const auto& d : dets) {
    if (d.attribute == attr) mine.push_back(d);
  }
  std::vector<std::size_t> order(mine.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (mine[order[j]].score > mine[order[i]].score ||
          (mine[order[j]].score == mine[order[i]].score && order[j] < order[i])) {
        std::swap(order[i], order[j]);
      }
    }
  }
  std::set<const IntervalAnnotation*> taken;
  double sum = 0;
  long hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& d = mine[order[k]];
    const IntervalAnnotation* best = nullptr;
    for (const auto* g : pool) {
      if (taken.count(g) || g->video != d.video) continue;
      bool ok;
      if (iou) {
        double inter = std::max(0L, std::min(d.end, g->end_frame) - std::max(d.start, g->start_frame) + 1);
        double uni = (d.end - d.start + 1) + (g->end_frame - g->start_frame + 1) - inter;
        ok = inter / uni >= 0.5;
      } else {
        double mid = 0.5 * static_cast<double>(d.start + d.end);
        ok = mid >= static_cast<double>(g->start_frame) && mid <= static_cast<double>(g->end_frame);
      }
      if (ok && (!best || g->start_frame < best->start_frame)) best = g;
    }
    if (best) {
      taken.insert(best);
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  return sum / static_cast<double>(pool.size());
}

IntervalAnnotation ann(const std::string& video, long s, long e, std::vector<std::string> attrs) {
  return {video, s, e, std::move(attrs), "c"};
}

actrec::temporal::Detection det(const std::string& video, const std::string& attr, long s, long e, double score) {
  return {video, attr, s, e, score};
}

bool same_tree(const fs::path& a, const fs::path& b) {
  std::vector<fs::path> fa, fb;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) fa.push_back(fs::relative(e.path(), a));
  }
  for (const auto& e : fs::recursive_directory_iterator(b)) {
    if (e.is_regular_file()) fb.push_back(fs::relative(e.path(), b));
  }
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  if (fa != fb) return false;
  for (const auto& f : fa) {
    if (actrec::io::read_file(a / f) != actrec::io::read_file(b / f)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("average precision hand examples") {
  CHECK(*average_precision({0.9, 0.8, 0.7}, {1, 0, 1}) == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0).epsilon(1e-15));
  CHECK(*average_precision({0.9, 0.8, 0.7, 0.1}, {1, 1, 0, 0}) == 1.0);
  CHECK(*average_precision({0.3, 0.2, 0.9}, {1, 1, 1}) == 1.0);
  CHECK_FALSE(average_precision({0.3, 0.2}, {0, 0}).has_value());
  // Ties keep input order.
  CHECK(*average_precision({0.5, 0.5}, {0, 1}) == doctest::Approx(0.5));
  CHECK(*average_precision({0.5, 0.5}, {1, 0}) == 1.0);
}

TEST_CASE("average precision matches a rank-count reference") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng() % 30;
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng() % 7);  // coarse values force ties
      y[i] = static_cast<int>(rng() % 2);
    }
    auto got = average_precision(s, y);
    auto want = reference_ap(s, y);
    REQUIRE(got.has_value() == want.has_value());
    if (got) {
      CHECK(*got == doctest::Approx(*want).epsilon(1e-12));
      CHECK(*got >= 0.0);
      CHECK(*got <= 1.0);
    }
  }
}

TEST_CASE("mean AP skips categories without positives") {
  auto t = mean_average_precision({"a", "b", "c"}, {{0.9, 0.1}, {0.2, 0.8}, {0.5, 0.4}}, {{1, 0}, {1, 0}, {0, 0}});
  CHECK(t.evaluated == 2);
  CHECK_FALSE(t.ap[2].has_value());
  CHECK(t.mean == doctest::Approx((1.0 + 0.5) / 2.0));
}

TEST_CASE("detection matching criteria") {
  DetectionMatchOptions mid;
  CHECK(detection_matches(0, 20, 10, 30, mid));    // midpoint 10
  CHECK_FALSE(detection_matches(0, 18, 10, 30, mid));
  CHECK(detection_matches(0, 21, 10, 30, mid));    // midpoint 10.5
  DetectionMatchOptions iou{MatchCriterion::kIou, 0.5};
  CHECK(detection_matches(0, 9, 0, 19, iou));       // 10 / 20
  CHECK_FALSE(detection_matches(0, 8, 0, 19, iou));
}

TEST_CASE("detection AP examples") {
  std::vector<IntervalAnnotation> gt{ann("v", 10, 40, {"a"})};
  CHECK(eval_detection({det("v", "a", 10, 40, 1.0)}, gt, {"a"}).ap[0] == 1.0);

  // Two detections on one interval: the second is a false positive.
  std::vector<IntervalAnnotation> two{ann("v", 10, 40, {"a"}), ann("v", 100, 140, {"a"})};
  auto t = eval_detection({det("v", "a", 10, 40, 0.9), det("v", "a", 12, 38, 0.8)}, two, {"a"});
  CHECK(*t.ap[0] == doctest::Approx(0.5));
  t = eval_detection({det("v", "a", 10, 40, 0.9), det("v", "a", 12, 38, 0.8), det("v", "a", 100, 140, 0.7)}, two,
                     {"a"});
  CHECK(*t.ap[0] == doctest::Approx((1.0 + 2.0 / 3.0) / 2.0));

  // Other videos and other attributes never match.
  t = eval_detection({det("w", "a", 10, 40, 0.9), det("v", "b", 10, 40, 0.8)}, gt, {"a", "b"});
  CHECK(*t.ap[0] == 0.0);
  CHECK_FALSE(t.ap[1].has_value());
  CHECK(t.evaluated == 1);
}

TEST_CASE("detection AP matches a brute-force matcher") {
  std::mt19937_64 rng(5);
  const std::vector<std::string> attrs{"a", "b"};
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<IntervalAnnotation> gt;
    std::vector<actrec::temporal::Detection> dets;
    for (int g = 0; g < 1 + static_cast<int>(rng() % 5); ++g) {
      long s = static_cast<long>(rng() % 60);
      gt.push_back(ann(rng() % 2 ? "v" : "w", s, s + 5 + static_cast<long>(rng() % 20), {attrs[rng() % 2]}));
    }
    for (int d = 0; d < static_cast<int>(rng() % 8); ++d) {
      long s = static_cast<long>(rng() % 70);
      dets.push_back(det(rng() % 2 ? "v" : "w", attrs[rng() % 2], s, s + 3 + static_cast<long>(rng() % 25),
                         static_cast<double>(rng() % 5)));
    }
    for (bool iou : {false, true}) {
      DetectionMatchOptions opt;
      if (iou) opt.criterion = MatchCriterion::kIou;
      auto t = eval_detection(dets, gt, attrs, opt);
      for (std::size_t a = 0; a < attrs.size(); ++a) {
        bool any = false;
        for (const auto& g : gt) any |= g.attributes[0] == attrs[a];
        REQUIRE(t.ap[a].has_value() == any);
        if (any) CHECK(*t.ap[a] == doctest::Approx(reference_detection_ap(dets, gt, attrs[a], iou)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("spearman with ties") {
  CHECK(spearman({1, 2, 3}, {10, 20, 30}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3}, {3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman({1, 1, 1}, {3, 2, 1}) == 0.0);
  CHECK(spearman({1, 2, 2, 3}, {1, 2, 3, 4}) == doctest::Approx(0.9486832980505139).epsilon(1e-12));
  CHECK_THROWS_AS(spearman({1}, {1}), actrec::ValidationError);
}

TEST_CASE("synthetic config validation") {
  SyntheticConfig c;
  c.support_activities = c.activities + 1;
  CHECK_THROWS_AS(c.validate(), actrec::ValidationError);
  c = SyntheticConfig{};
  c.noise = -1;
  CHECK_THROWS_AS(c.validate(), actrec::ValidationError);
  c = SyntheticConfig{};
  c.composites = 0;
  CHECK_THROWS_AS(c.validate(), actrec::ValidationError);
  actrec::kv::KeyValues kv;
  kv.set("no_such_key", "1");
  CHECK_THROWS_AS(SyntheticConfig::from_kv(kv), actrec::ValidationError);
  // to_kv round-trips.
  c = SyntheticConfig{};
  c.noise = 0.3;
  c.seed = 99;
  auto back = SyntheticConfig::from_kv(c.to_kv());
  CHECK(back.noise == 0.3);
  CHECK(back.seed == 99);
}

TEST_CASE("planted weights are sparse, non-negative and L1-normalized") {
  SyntheticConfig c;
  auto b = gen_synthetic(c);
  REQUIRE(b.planted.rows() == static_cast<std::size_t>(c.composites));
  for (std::size_t z = 0; z < b.planted.rows(); ++z) {
    auto row = b.planted.values.row(static_cast<long>(z));
    CHECK(row.minCoeff() >= 0.0);
    CHECK(row.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((row.array() > 0).count() == c.support_activities + c.support_objects);
  }
  CHECK(b.composites().size() == static_cast<std::size_t>(c.composites));
  CHECK(b.videos.size() == static_cast<std::size_t>(c.composites * c.videos_per_composite));
  for (const auto& a : b.annotations) {
    long activities = 0;
    for (const auto& l : a.attributes) activities += b.vocab[static_cast<std::size_t>(b.vocab.find(l))].kind == actrec::corpus::AttributeKind::kActivity;
    CHECK(activities == 1);
    CHECK(a.attributes.size() <= 4);
  }
}

TEST_CASE("noiseless score bundles carry the signal exactly") {
  SyntheticConfig c;
  c.noise = 0.0;
  c.signal = 2.5;
  auto b = gen_synthetic(c);
  for (const auto& v : b.videos) {
    const auto& s = b.scores.at(v.id);
    auto anns = b.annotations_of(v.id);
    REQUIRE(s.num_intervals() == static_cast<long>(anns.size()));
    auto labels = interval_labels(b, anns);
    for (long t = 0; t < s.num_intervals(); ++t) {
      for (long i = 0; i < s.num_attributes(); ++i) {
        bool present = std::find(labels[t].begin(), labels[t].end(), i) != labels[t].end();
        CHECK(s.values(i, t) == (present ? 2.5 : 0.0));
      }
    }
  }
}

TEST_CASE("same seed gives byte-identical bundles") {
  for (auto rep : {Representation::kScores, Representation::kFrames}) {
    SyntheticConfig c;
    c.representation = rep;
    c.videos_per_composite = 4;
    auto a = scratch("det_a"), b = scratch("det_b");
    save_bundle(a, gen_synthetic(c));
    save_bundle(b, gen_synthetic(c));
    CHECK(same_tree(a, b));
    c.seed += 1;
    auto d = scratch("det_c");
    save_bundle(d, gen_synthetic(c));
    CHECK_FALSE(same_tree(a, d));
  }
}

TEST_CASE("bundles round-trip through disk") {
  SyntheticConfig c;
  c.representation = Representation::kFrames;
  c.videos_per_composite = 4;
  auto b = gen_synthetic(c);
  auto a = scratch("rt_a"), a2 = scratch("rt_b");
  save_bundle(a, b);
  auto back = load_bundle(a);
  CHECK(back.videos.size() == b.videos.size());
  CHECK(back.annotations.size() == b.annotations.size());
  CHECK(back.frames == b.frames);
  CHECK(back.num_words == b.num_words);
  save_bundle(a2, back);
  CHECK(same_tree(a, a2));
  CHECK_THROWS_AS(load_bundle(a / "missing"), actrec::ValidationError);
}

TEST_CASE("mined weights rank-correlate with the planted weights") {
  auto b = gen_synthetic(SyntheticConfig{});
  auto w = mine_weights(b, "tfidf", actrec::corpus::MatchMode::kLiteral);
  double sum = 0;
  for (std::size_t z = 0; z < w.rows(); ++z) {
    long pz = b.planted.row_of(w.row_labels[z]);
    REQUIRE(pz >= 0);
    Eigen::VectorXd x = w.values.row(static_cast<long>(z)).transpose();
    Eigen::VectorXd y = b.planted.values.row(pz).transpose();
    sum += spearman({x.data(), x.data() + x.size()}, {y.data(), y.data() + y.size()});
  }
  CHECK(sum / static_cast<double>(w.rows()) >= 0.8);
}

TEST_CASE("noiseless zero-shot with planted weights is exact") {
  SyntheticConfig c;
  c.noise = 0.0;
  auto b = gen_synthetic(c);
  auto scores = score_annotated(b, nullptr);
  auto train = sequence_set(b, scores, b.videos_in("train"));
  auto test = sequence_set(b, scores, b.videos_in("test"));
  auto out = classify_composites(CompositeMode::kScript, train, test, b.composites(), b.planted, {}, {});
  CHECK(accuracy(out, test) == 1.0);
}

TEST_CASE("pst zero-shot without propagation reproduces script predictions") {
  auto b = gen_synthetic(SyntheticConfig{});
  auto scores = score_annotated(b, nullptr);
  auto train = sequence_set(b, scores, b.videos_in("train"));
  auto test = sequence_set(b, scores, b.videos_in("test"));
  auto w = mine_weights(b, "tfidf", actrec::corpus::MatchMode::kLiteral);
  actrec::composites::PstConfig pst;
  pst.alpha = 0.0;
  pst.delta = 1.0;
  auto script = classify_composites(CompositeMode::kScript, train, test, b.composites(), w, {}, pst);
  auto zero = classify_composites(CompositeMode::kPstZeroShot, train, test, b.composites(), w, {}, pst);
  for (long d = 0; d < test.size(); ++d) CHECK(zero.predict(d) == script.predict(d));
}

TEST_CASE("experiment config parsing") {
  auto dir = scratch("cfg");
  actrec::io::write_file(dir / "run.conf", "bundle = data\nmode = pst+script\nalpha_grid = 0.5, 0.9\n");
  auto c = ExperimentConfig::load(dir / "run.conf");
  CHECK(c.bundle == dir / "data");
  CHECK(c.output == dir / "out");
  CHECK(c.mode == CompositeMode::kPst);
  CHECK(c.alpha_grid == std::vector<double>{0.5, 0.9});
  auto resolved = c.resolved();
  for (const auto& k : ExperimentConfig::keys()) CHECK_MESSAGE(resolved.has(k), k);

  actrec::io::write_file(dir / "bad.conf", "bundle = data\nmode = svm\nalhpa = 1\n");
  CHECK_THROWS_WITH_AS(ExperimentConfig::load(dir / "bad.conf"), doctest::Contains("alhpa"), actrec::ValidationError);
  actrec::io::write_file(dir / "nobundle.conf", "mode = svm\n");
  CHECK_THROWS_AS(ExperimentConfig::load(dir / "nobundle.conf"), actrec::ValidationError);
  actrec::io::write_file(dir / "mode.conf", "bundle = d\nmode = magic\n");
  CHECK_THROWS_AS(ExperimentConfig::load(dir / "mode.conf"), actrec::ValidationError);
  CHECK(parse_composite_mode("nn+script") == CompositeMode::kNnScript);
  CHECK(parse_composite_mode("pst-zero-shot") == CompositeMode::kPstZeroShot);
}

TEST_CASE("run_experiment writes a complete report") {
  SyntheticConfig c;
  c.videos_per_composite = 8;
  auto dir = scratch("run");
  save_bundle(dir / "bundle", gen_synthetic(c));
  actrec::io::write_file(dir / "run.conf",
                         "bundle = bundle\noutput = out\nmode = pst-zero-shot\nalpha_grid = 0.5,0.9\n"
                         "delta_grid = 0.25\nk_grid = 3\n");
  auto cfg = ExperimentConfig::load(dir / "run.conf");
  auto report = run_experiment(cfg);
  for (const char* f : {"report.json", "report.txt", "predictions.csv", "weights.csv"}) {
    CHECK_MESSAGE(fs::exists(dir / "out" / f), f);
  }
  auto j = nlohmann::json::parse(actrec::io::read_file(dir / "out" / "report.json"));
  CHECK(j["mode"] == "pst-zero-shot");
  CHECK(j["config"]["alpha_grid"] == "0.5,0.9");
  CHECK(j["accuracy"].get<double>() >= 0.0);
  for (auto& [name, ap] : j["composite_ap"]["per_category"].items()) {
    if (!ap.is_null()) {
      CHECK(ap.get<double>() >= 0.0);
      CHECK(ap.get<double>() <= 1.0);
    }
  }
  long total = report.confusion.sum();
  CHECK(total == static_cast<long>(load_bundle(dir / "bundle").videos_in("test").size()));
  // Deterministic: a second run reproduces the predictions.
  auto first = actrec::io::read_file(dir / "out" / "predictions.csv");
  run_experiment(cfg);
  CHECK(actrec::io::read_file(dir / "out" / "predictions.csv") == first);
}

TEST_CASE("frame bundles run classification, detection and segmentation") {
  SyntheticConfig c;
  c.representation = Representation::kFrames;
  c.videos_per_composite = 8;
  auto dir = scratch("frames");
  save_bundle(dir / "bundle", gen_synthetic(c));
  actrec::io::write_file(dir / "run.conf",
                         "bundle = bundle\noutput = out\nmode = svm\nsequence_source = segmented\n"
                         "segment_thresholds = 0.5,0.9\nstack_mode = base+cooccurrence\n");
  auto report = run_experiment(ExperimentConfig::load(dir / "run.conf"));
  REQUIRE(report.detection_ap.has_value());
  REQUIRE(report.stacked_ap.has_value());
  CHECK(report.attribute_ap->mean > 0.5);
  CHECK(fs::exists(dir / "out" / "segments.jsonl"));
  CHECK(fs::exists(dir / "out" / "detections.csv"));
  CHECK(fs::exists(dir / "out" / "background_model.json"));
  auto stack_on_scores = dir / "scores.conf";
  SyntheticConfig sc;
  sc.videos_per_composite = 4;
  save_bundle(dir / "sbundle", gen_synthetic(sc));
  actrec::io::write_file(stack_on_scores, "bundle = sbundle\nstack_mode = base+context\n");
  CHECK_THROWS_AS(run_experiment(ExperimentConfig::load(stack_on_scores)), actrec::ValidationError);
}
