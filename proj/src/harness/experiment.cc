#include "actrec/harness/experiment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "actrec/attributes/stacking.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"
#include "actrec/composites/pst.h"
#include "actrec/composites/script_transfer.h"
#include "actrec/corpus/script_corpus.h"
#include "actrec/temporal/nms.h"
#include "actrec/temporal/window.h"

namespace actrec::harness {

namespace fs = std::filesystem;
using composites::CompositeScores;
using composites::SequenceSet;

std::vector<std::vector<int>> interval_labels(const Bundle& bundle, const std::vector<IntervalAnnotation>& anns) {
  std::vector<std::vector<int>> out;
  for (const auto& a : anns) {
    std::vector<int> ids;
    for (const auto& l : a.attributes) ids.push_back(static_cast<int>(bundle.vocab.find(l)));
    out.push_back(std::move(ids));
  }
  return out;
}

temporal::IntegralHistogram integral_of(const Bundle& bundle, const std::string& video) {
  auto it = bundle.frames.find(video);
  if (it == bundle.frames.end()) throw ValidationError("no frame stream for video " + video);
  std::vector<std::vector<long>> bins;
  bins.reserve(it->second.size());
  for (long w : it->second) bins.push_back(w < 0 ? std::vector<long>{} : std::vector<long>{w});
  return temporal::IntegralHistogram(bins, BlockLayout{{static_cast<std::size_t>(bundle.num_words)}});
}

Eigen::MatrixXd interval_features(const temporal::IntegralHistogram& integral,
                                  const std::vector<IntervalAnnotation>& anns) {
  Eigen::MatrixXd x(static_cast<long>(anns.size()), integral.num_bins());
  for (std::size_t t = 0; t < anns.size(); ++t) {
    x.row(static_cast<long>(t)) = temporal::window_histogram(integral, anns[t].start_frame, anns[t].end_frame).transpose();
  }
  return x;
}

attributes::LinearModelSet train_attribute_models(const Bundle& bundle, const attributes::TrainConfig& config) {
  if (!bundle.has_frames()) throw ValidationError("attribute training needs a frame bundle");
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<std::vector<int>> labels;
  long rows = 0;
  for (const auto& id : bundle.videos_in("train")) {
    auto anns = bundle.annotations_of(id);
    blocks.push_back(interval_features(integral_of(bundle, id), anns));
    rows += blocks.back().rows();
    auto l = interval_labels(bundle, anns);
    labels.insert(labels.end(), l.begin(), l.end());
  }
  if (rows == 0) throw ValidationError("no annotated training intervals");
  Eigen::MatrixXd x(rows, bundle.num_words);
  long r = 0;
  for (const auto& b : blocks) {
    x.middleRows(r, b.rows()) = b;
    r += b.rows();
  }
  return attributes::train_linear_ova(x, labels, bundle.vocab.labels(), config);
}

ScoresByVideo score_annotated(const Bundle& bundle, const attributes::LinearModelSet* models) {
  ScoresByVideo out;
  for (const auto& v : bundle.videos) {
    auto anns = bundle.annotations_of(v.id);
    if (bundle.has_scores()) {
      const auto& s = bundle.scores.at(v.id);
      if (s.num_intervals() != static_cast<long>(anns.size())) {
        throw ValidationError("video " + v.id + ": " + std::to_string(s.num_intervals()) + " score columns for " +
                              std::to_string(anns.size()) + " annotated intervals");
      }
      out.emplace(v.id, s);
    } else {
      if (models == nullptr) throw ValidationError("frame bundle needs attribute models");
      std::vector<std::string> ids;
      for (std::size_t t = 0; t < anns.size(); ++t) ids.push_back(std::to_string(t));
      out.emplace(v.id, attributes::score_intervals(*models, interval_features(integral_of(bundle, v.id), anns), ids));
    }
  }
  return out;
}

ApTable interval_ap(const Bundle& bundle, const ScoresByVideo& scores, const std::vector<std::string>& videos) {
  const auto labels = bundle.vocab.labels();
  std::vector<std::vector<double>> s(labels.size());
  std::vector<std::vector<int>> y(labels.size());
  for (const auto& id : videos) {
    const auto& m = scores.at(id);
    auto present = interval_labels(bundle, bundle.annotations_of(id));
    for (long t = 0; t < m.num_intervals(); ++t) {
      for (std::size_t i = 0; i < labels.size(); ++i) {
        s[i].push_back(m.values(static_cast<long>(i), t));
        y[i].push_back(std::count(present[t].begin(), present[t].end(), static_cast<int>(i)) > 0 ? 1 : 0);
      }
    }
  }
  return mean_average_precision(labels, s, y);
}

ScoresByVideo stack_scores(const Bundle& bundle, const ScoresByVideo& base, attributes::StackMode mode,
                           const attributes::TrainConfig& config) {
  const bool needs_features = mode == attributes::StackMode::kBaseContext ||
                              mode == attributes::StackMode::kBaseCooccurrence || mode == attributes::StackMode::kAll;
  if (needs_features && !bundle.has_frames()) {
    throw ValidationError("stack_mode " + std::string(attributes::stack_mode_name(mode)) +
                          " needs interval features (frame bundle)");
  }
  std::vector<attributes::StackSequence> train, all;
  std::vector<std::string> ids;
  for (const auto& v : bundle.videos) {
    auto anns = bundle.annotations_of(v.id);
    attributes::StackSequence seq;
    seq.scores = base.at(v.id);
    if (needs_features) seq.features = interval_features(integral_of(bundle, v.id), anns);
    seq.labels = interval_labels(bundle, anns);
    if (v.split == "train") train.push_back(seq);
    all.push_back(std::move(seq));
    ids.push_back(v.id);
  }
  auto refined = attributes::train_and_score_stacked(train, all, mode, config);
  ScoresByVideo out;
  for (std::size_t k = 0; k < ids.size(); ++k) out.emplace(ids[k], std::move(refined[k]));
  return out;
}

corpus::WeightMatrix mine_weights(const Bundle& bundle, const std::string& kind, corpus::MatchMode mode) {
  auto docs = corpus::build_documents(bundle.scripts);
  if (docs.empty()) throw ValidationError("bundle has no script data to mine");
  auto w = kind == "freq" ? corpus::freq_weights(docs, bundle.vocab, bundle.lexicon, mode)
                          : corpus::tfidf_weights(docs, bundle.vocab, bundle.lexicon, mode);
  return corpus::normalize_l1(w);
}

SequenceSet sequence_set(const Bundle& bundle, const ScoresByVideo& scores, const std::vector<std::string>& videos) {
  SequenceSet set;
  set.attributes = bundle.vocab.labels();
  set.features.resize(0, static_cast<long>(bundle.vocab.size()));
  for (const auto& id : videos) set.add(id, composites::seq_feature(scores.at(id)), bundle.video(id).composite);
  return set;
}

temporal::BackgroundModel train_background_model(const Bundle& bundle, const attributes::TrainConfig& config) {
  std::vector<Eigen::VectorXd> rows;
  std::vector<bool> background;
  for (const auto& id : bundle.videos_in("train")) {
    auto integral = integral_of(bundle, id);
    auto anns = bundle.annotations_of(id);
    long cursor = 0;
    auto gap = [&](long s, long e) {
      if (e - s + 1 < 5) return;
      rows.push_back(temporal::window_histogram(integral, s, e));
      background.push_back(true);
    };
    for (const auto& a : anns) {
      gap(cursor, a.start_frame - 1);
      rows.push_back(temporal::window_histogram(integral, a.start_frame, a.end_frame));
      background.push_back(false);
      cursor = std::max(cursor, a.end_frame + 1);
    }
    gap(cursor, integral.num_frames() - 1);
  }
  Eigen::MatrixXd x(static_cast<long>(rows.size()), bundle.num_words);
  for (std::size_t r = 0; r < rows.size(); ++r) x.row(static_cast<long>(r)) = rows[r].transpose();
  return temporal::train_background(x, background, config);
}

SequenceSet segmented_sequence_set(const Bundle& bundle, const std::vector<std::string>& videos,
                                   const attributes::LinearModelSet& models,
                                   const temporal::BackgroundModel* background, double threshold, long interval,
                                   std::vector<std::pair<std::string, temporal::Segment>>* segments) {
  SequenceSet set;
  set.attributes = bundle.vocab.labels();
  set.features.resize(0, static_cast<long>(bundle.vocab.size()));
  for (const auto& id : videos) {
    auto integral = integral_of(bundle, id);
    auto spans = temporal::uniform_intervals(integral.num_frames(), interval);
    Eigen::MatrixXd x(static_cast<long>(spans.size()), integral.num_bins());
    for (std::size_t t = 0; t < spans.size(); ++t) {
      x.row(static_cast<long>(t)) = temporal::window_histogram(integral, spans[t].first, spans[t].second).transpose();
    }
    auto uniform = attributes::score_intervals(models, x);
    temporal::SegmentationOptions opts;
    opts.interval = interval;
    opts.num_frames = integral.num_frames();
    opts.rescorer = temporal::histogram_rescorer(integral, models);
    auto segs = temporal::segment_agglomerative(uniform, threshold, opts);
    segs = temporal::filter_background(std::move(segs), background, [&](const temporal::Segment& s) {
      return Eigen::VectorXd(temporal::window_histogram(integral, s.start, s.end));
    });
    auto pooled = temporal::pool_segments(segs, static_cast<long>(bundle.vocab.size()), models.config.floor);
    set.add(id, pooled.values, bundle.video(id).composite);
    if (segments) {
      for (auto& s : segs) segments->emplace_back(id, std::move(s));
    }
  }
  return set;
}

namespace {

CompositeScores align(const CompositeScores& in, const std::vector<std::string>& composites) {
  CompositeScores out;
  out.sequences = in.sequences;
  out.composites = composites;
  out.flagged = in.flagged;
  out.values = Eigen::MatrixXd::Constant(in.values.rows(), static_cast<long>(composites.size()),
                                         -std::numeric_limits<double>::infinity());
  for (std::size_t z = 0; z < composites.size(); ++z) {
    auto it = std::find(in.composites.begin(), in.composites.end(), composites[z]);
    if (it == in.composites.end()) {
      if (std::find(out.flagged.begin(), out.flagged.end(), composites[z]) == out.flagged.end()) {
        out.flagged.push_back(composites[z]);
      }
      continue;
    }
    out.values.col(static_cast<long>(z)) = in.values.col(it - in.composites.begin());
  }
  return out;
}

SequenceSet unlabeled(SequenceSet s) {
  for (auto& c : s.composites) c.clear();
  return s;
}

std::string fmt(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

CompositeScores classify_composites(CompositeMode mode, const SequenceSet& train, const SequenceSet& test,
                                    const std::vector<std::string>& composites, const corpus::WeightMatrix& weights,
                                    const attributes::TrainConfig& train_config, const composites::PstConfig& pst) {
  switch (mode) {
    case CompositeMode::kSvm:
      return composites::classify_svm(train, test, composites, train_config);
    case CompositeMode::kNn:
      return composites::nn_scores(train, test, composites);
    case CompositeMode::kScript:
      return align(composites::script_scores(test, weights), composites);
    case CompositeMode::kNnScript:
      return align(composites::nn_script_scores(train, test, corpus::binarize_weights(weights)), composites);
    case CompositeMode::kPst: {
      auto cfg = pst;
      cfg.zero_shot = false;
      return align(composites::run_pst(train, SequenceSet{}, test, weights, cfg), composites);
    }
    case CompositeMode::kPstZeroShot: {
      auto cfg = pst;
      cfg.zero_shot = true;
      return align(composites::run_pst(SequenceSet{}, unlabeled(train), test, weights, cfg), composites);
    }
  }
  throw ValidationError("unknown composite mode");
}

double accuracy(const CompositeScores& scores, const SequenceSet& truth) {
  if (truth.size() == 0) return 0.0;
  long correct = 0;
  for (long d = 0; d < truth.size(); ++d) correct += scores.predict(d) == truth.composites[d];
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

ApTable composite_ap(const CompositeScores& scores, const SequenceSet& truth) {
  std::vector<std::vector<double>> s(scores.composites.size());
  std::vector<std::vector<int>> y(scores.composites.size());
  for (std::size_t z = 0; z < scores.composites.size(); ++z) {
    for (long d = 0; d < truth.size(); ++d) {
      s[z].push_back(scores.values(d, static_cast<long>(z)));
      y[z].push_back(truth.composites[d] == scores.composites[z] ? 1 : 0);
    }
  }
  return mean_average_precision(scores.composites, s, y);
}

namespace {

nlohmann::json ap_json(const ApTable& t) {
  nlohmann::json per = nlohmann::json::object();
  for (std::size_t c = 0; c < t.categories.size(); ++c) {
    per[t.categories[c]] = t.ap[c] ? nlohmann::json(*t.ap[c]) : nlohmann::json(nullptr);
  }
  return {{"mean", t.mean}, {"evaluated", t.evaluated}, {"per_category", per}};
}

void ap_table(std::ostringstream& out, const std::string& title, const ApTable& t) {
  out << title << " (mean AP " << fmt(t.mean) << " over " << t.evaluated << " categories)\n";
  for (std::size_t c = 0; c < t.categories.size(); ++c) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-24s %s\n", t.categories[c].c_str(), t.ap[c] ? fmt(*t.ap[c]).c_str() : "-");
    out << line;
  }
}

}  // namespace

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["mode"] = mode;
  j["config"] = config.entries();
  j["accuracy"] = accuracy;
  j["composite_ap"] = ap_json(composite_ap);
  if (attribute_ap) j["attribute_ap"] = ap_json(*attribute_ap);
  if (stacked_ap) j["stacked_attribute_ap"] = ap_json(*stacked_ap);
  if (detection_ap) j["detection_ap"] = ap_json(*detection_ap);
  std::vector<std::vector<int>> m;
  for (long r = 0; r < confusion.rows(); ++r) {
    m.emplace_back();
    for (long c = 0; c < confusion.cols(); ++c) m.back().push_back(confusion(r, c));
  }
  j["confusion"] = {{"labels", composites}, {"matrix", m}};
  nlohmann::json sel = nlohmann::json::object();
  for (const auto& [k, v] : selected) sel[k] = v;
  j["selected"] = sel;
  j["warnings"] = warnings;
  if (weight_spearman) j["weight_spearman"] = *weight_spearman;
  j["seconds"] = seconds;
  return j.dump(2) + "\n";
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  out << "mode: " << mode << "\n";
  out << "composite accuracy: " << fmt(accuracy) << "\n";
  ap_table(out, "composite AP", composite_ap);
  if (attribute_ap) ap_table(out, "attribute AP (test intervals)", *attribute_ap);
  if (stacked_ap) ap_table(out, "stacked attribute AP (test intervals)", *stacked_ap);
  if (detection_ap) ap_table(out, "detection AP", *detection_ap);
  if (weight_spearman) out << "mined vs planted weights, mean Spearman: " << fmt(*weight_spearman) << "\n";
  out << "confusion (rows true, columns predicted):\n";
  for (long r = 0; r < confusion.rows(); ++r) {
    char head[40];
    std::snprintf(head, sizeof head, "  %-12s", composites[r].c_str());
    out << head;
    for (long c = 0; c < confusion.cols(); ++c) {
      char cell[12];
      std::snprintf(cell, sizeof cell, "%4d", confusion(r, c));
      out << cell;
    }
    out << "\n";
  }
  for (const auto& [k, v] : selected) out << "selected " << k << " = " << v << "\n";
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  out << "elapsed: " << fmt(seconds, 2) << " s\n";
  return out.str();
}

namespace {

struct Candidate {
  composites::PstConfig pst;
  double acc = -1.0;
  double map = -1.0;
};

// Grid search over PST parameters on the validation split.
composites::PstConfig select_pst(const ExperimentConfig& cfg, const SequenceSet& train, const SequenceSet& val,
                                 const std::vector<std::string>& comps, const corpus::WeightMatrix& w,
                                 EvalReport& report) {
  if (!cfg.grid_search) return cfg.pst;
  const bool zero_shot = cfg.mode == CompositeMode::kPstZeroShot;
  const long nodes = train.size() + val.size();
  std::vector<double> gammas = zero_shot ? std::vector<double>{cfg.pst.gamma} : cfg.gamma_grid;
  Candidate best;
  long tried = 0;
  for (double alpha : cfg.alpha_grid) {
    for (double gamma : gammas) {
      for (double delta : cfg.delta_grid) {
        for (double k : cfg.k_grid) {
          if (static_cast<long>(k) >= nodes) continue;
          composites::PstConfig p = cfg.pst;
          p.alpha = alpha;
          p.gamma = gamma;
          p.delta = delta;
          p.k = static_cast<int>(k);
          p.validate();
          auto s = classify_composites(cfg.mode, train, val, comps, w, cfg.train, p);
          Candidate c{p, harness::accuracy(s, val), composite_ap(s, val).mean};
          ++tried;
          if (c.acc > best.acc || (c.acc == best.acc && c.map > best.map)) best = c;
        }
      }
    }
  }
  if (tried == 0) throw ValidationError("PST grid: every k is too large for the validation graph");
  report.selected.emplace_back("alpha", fmt(best.pst.alpha, 3));
  if (!zero_shot) report.selected.emplace_back("gamma", fmt(best.pst.gamma, 3));
  report.selected.emplace_back("delta", fmt(best.pst.delta, 3));
  report.selected.emplace_back("k", std::to_string(best.pst.k));
  report.selected.emplace_back("validation_accuracy", fmt(best.acc));
  return best.pst;
}

bool needs_weights(CompositeMode m) { return m != CompositeMode::kSvm && m != CompositeMode::kNn; }

}  // namespace

EvalReport run_experiment(const ExperimentConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  EvalReport report;
  report.mode = composite_mode_name(cfg.mode);
  report.config = cfg.resolved();
  Bundle bundle = load_bundle(cfg.bundle);
  fs::create_directories(cfg.output);
  const auto comps = bundle.composites();
  const auto train_ids = bundle.videos_in("train"), val_ids = bundle.videos_in("val"),
             test_ids = bundle.videos_in("test");
  if (train_ids.empty() || test_ids.empty()) throw ValidationError("bundle needs train and test videos");

  // Attribute scores on annotated intervals.
  std::optional<attributes::LinearModelSet> models;
  if (bundle.has_frames()) {
    models = train_attribute_models(bundle, cfg.train);
    models->save_json(cfg.output / "attribute_models.json");
    for (const auto& s : models->skipped) report.warnings.push_back("attribute without training data: " + s);
  }
  ScoresByVideo scores = score_annotated(bundle, models ? &*models : nullptr);
  report.attribute_ap = interval_ap(bundle, scores, test_ids);
  if (cfg.stack_mode != "none") {
    auto refined = stack_scores(bundle, scores, attributes::parse_stack_mode(cfg.stack_mode), cfg.train);
    report.stacked_ap = interval_ap(bundle, refined, test_ids);
    if (cfg.sequence_source == "segmented") {
      report.warnings.push_back("stacked scores cover annotated intervals only; segmented sequences use base scores");
    } else {
      scores = std::move(refined);
    }
  }

  // Detection.
  if (bundle.has_frames() && cfg.detection) {
    auto schedule = temporal::window_schedule(cfg.window_min_size, cfg.window_min_step, std::sqrt(2.0),
                                              cfg.window_max_size);
    std::vector<temporal::Detection> kept;
    std::vector<IntervalAnnotation> truth;
    temporal::NmsOptions nms;
    nms.use_iou = cfg.nms_iou;
    for (const auto& id : test_ids) {
      auto d = temporal::nms_grouped(temporal::score_windows(integral_of(bundle, id), *models, schedule, id), nms);
      kept.insert(kept.end(), d.begin(), d.end());
      auto a = bundle.annotations_of(id);
      truth.insert(truth.end(), a.begin(), a.end());
    }
    temporal::save_detections(cfg.output / "detections.csv", kept);
    report.detection_ap = eval_detection(kept, truth, bundle.vocab.labels(), cfg.match);
  }

  // Composite weights.
  corpus::WeightMatrix weights;
  if (needs_weights(cfg.mode)) {
    if (cfg.weights == "mined") {
      weights = mine_weights(bundle, cfg.weight_kind, cfg.match_mode);
      for (const auto& z : weights.empty_row_ids()) report.warnings.push_back("composite with no mined weight: " + z);
      if (bundle.planted.rows() > 0) {
        double sum = 0;
        long rows = 0;
        for (std::size_t z = 0; z < weights.rows(); ++z) {
          long pz = bundle.planted.row_of(weights.row_labels[z]);
          if (pz < 0 || bundle.planted.col_labels != weights.col_labels) continue;
          const Eigen::VectorXd a = weights.values.row(static_cast<long>(z)).transpose();
          const Eigen::VectorXd b = bundle.planted.values.row(pz).transpose();
          sum += spearman({a.data(), a.data() + a.size()}, {b.data(), b.data() + b.size()});
          ++rows;
        }
        if (rows > 0) report.weight_spearman = sum / static_cast<double>(rows);
      }
    } else if (cfg.weights == "planted") {
      if (bundle.planted.rows() == 0) throw ValidationError("weights = planted but the bundle ships no planted weights");
      weights = bundle.planted;
    } else {
      weights = corpus::normalize_l1(corpus::WeightMatrix::load_csv(cfg.weights));
    }
    composites::check_alignment(weights, bundle.vocab.labels());
    weights.save_csv(cfg.output / "weights.csv");
  }

  // Sequence features.
  SequenceSet train = sequence_set(bundle, scores, train_ids);
  SequenceSet val = sequence_set(bundle, scores, val_ids);
  SequenceSet test = sequence_set(bundle, scores, test_ids);
  if (cfg.sequence_source == "segmented") {
    if (!bundle.has_frames()) throw ValidationError("sequence_source = segmented needs a frame bundle");
    std::optional<temporal::BackgroundModel> background;
    if (cfg.background_filter) {
      background = train_background_model(bundle, cfg.train);
      background->save_json(cfg.output / "background_model.json");
    }
    const auto* bg = background ? &*background : nullptr;
    double best_t = cfg.segment_thresholds.front(), best_acc = -1;
    const CompositeMode probe = cfg.mode == CompositeMode::kPst || cfg.mode == CompositeMode::kPstZeroShot
                                    ? CompositeMode::kScript
                                    : cfg.mode;
    if (cfg.segment_thresholds.size() > 1 && !val_ids.empty()) {
      for (double th : cfg.segment_thresholds) {
        auto v = segmented_sequence_set(bundle, val_ids, *models, bg, th, cfg.segment_interval, nullptr);
        double acc = accuracy(classify_composites(probe, train, v, comps, weights, cfg.train, cfg.pst), v);
        if (acc > best_acc) {
          best_acc = acc;
          best_t = th;
        }
      }
    }
    report.selected.emplace_back("segment_threshold", fmt(best_t, 3));
    std::vector<std::pair<std::string, temporal::Segment>> segs;
    if (!val_ids.empty()) val = segmented_sequence_set(bundle, val_ids, *models, bg, best_t, cfg.segment_interval, nullptr);
    test = segmented_sequence_set(bundle, test_ids, *models, bg, best_t, cfg.segment_interval, &segs);
    temporal::save_segments(cfg.output / "segments.jsonl", segs);
  }

  // Composite classification.
  composites::PstConfig pst = cfg.pst;
  if (cfg.mode == CompositeMode::kPst || cfg.mode == CompositeMode::kPstZeroShot) {
    if (val.size() == 0) {
      report.warnings.push_back("no validation videos; PST uses the configured parameters");
    } else {
      pst = select_pst(cfg, train, val, comps, weights, report);
    }
  }
  auto result = classify_composites(cfg.mode, train, test, comps, weights, cfg.train, pst);
  for (const auto& f : result.flagged) report.warnings.push_back("composite without a usable model: " + f);
  result.save_csv(cfg.output / "predictions.csv");

  report.composites = comps;
  report.accuracy = accuracy(result, test);
  report.composite_ap = composite_ap(result, test);
  report.confusion = Eigen::MatrixXi::Zero(static_cast<long>(comps.size()), static_cast<long>(comps.size()));
  for (long d = 0; d < test.size(); ++d) {
    long truth = std::find(comps.begin(), comps.end(), test.composites[d]) - comps.begin();
    report.confusion(truth, result.predict_index(d)) += 1;
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  io::write_file(cfg.output / "report.json", report.to_json());
  io::write_file(cfg.output / "report.txt", report.to_table());
  return report;
}

}  // namespace actrec::harness
