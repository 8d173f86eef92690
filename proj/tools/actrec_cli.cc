// Command-line entry point. Exit codes: 0 success, 1 validation error,
// 2 runtime failure.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "actrec/attributes/score_matrix.h"
#include "actrec/attributes/stacking.h"
#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/kv.h"
#include "actrec/common/text_io.h"
#include "actrec/composites/sequence.h"
#include "actrec/harness/bundle_io.h"
#include "actrec/harness/config.h"
#include "actrec/harness/experiment.h"
#include "actrec/harness/metrics.h"
#include "actrec/harness/synthetic.h"
#include "actrec/posefeat/joint_tracks.h"
#include "actrec/psinfer/grid.h"
#include "actrec/psinfer/inference.h"
#include "actrec/psinfer/part_graph.h"
#include "actrec/psinfer/pcp.h"
#include "actrec/temporal/nms.h"
#include "actrec/temporal/segmentation.h"
#include "actrec/temporal/window.h"

namespace fs = std::filesystem;
using namespace actrec;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

json ap_json(const harness::ApTable& t) {
  json per = json::object();
  for (std::size_t c = 0; c < t.categories.size(); ++c) {
    per[t.categories[c]] = t.ap[c] ? json(*t.ap[c]) : json(nullptr);
  }
  return {{"mean", t.mean}, {"evaluated", t.evaluated}, {"per_category", per}};
}

std::string ap_table(const std::string& title, const harness::ApTable& t) {
  std::ostringstream out;
  out << title << ": mean AP " << fmt(t.mean) << " over " << t.evaluated << " categories\n";
  for (std::size_t c = 0; c < t.categories.size(); ++c) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-24s %s\n", t.categories[c].c_str(), t.ap[c] ? fmt(*t.ap[c]).c_str() : "-");
    out << line;
  }
  return out.str();
}

// Prints the table and, when `path` is set, writes the JSON report.
void emit(const json& report, const std::string& table, const fs::path& path) {
  std::cout << table;
  if (!path.empty()) io::write_file(path, report.dump(2) + "\n");
}

// "key=value" overrides on top of an optional key-value file.
kv::KeyValues merged(const std::string& file, const std::vector<std::string>& sets) {
  kv::KeyValues out = file.empty() ? kv::KeyValues{} : kv::KeyValues::load(file);
  for (const auto& s : sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
    out.set(io::trim(s.substr(0, eq)), io::trim(s.substr(eq + 1)));
  }
  return out;
}

attributes::TrainConfig train_config(double lambda, int epochs) {
  attributes::TrainConfig cfg;
  cfg.lambda = lambda;
  cfg.epochs = epochs;
  if (!(lambda > 0) || epochs < 1) throw ValidationError("lambda must be > 0 and epochs >= 1");
  return cfg;
}

harness::ScoresByVideo annotated_scores(const harness::Bundle& b, const std::string& models_path) {
  if (b.has_scores()) return harness::score_annotated(b, nullptr);
  if (models_path.empty()) throw ValidationError("frame bundle needs --models");
  auto models = attributes::LinearModelSet::load_json(models_path);
  return harness::score_annotated(b, &models);
}

struct Options {
  std::string bundle, out, models, config, weights = "mined", kind = "tfidf", match = "literal", mode;
  std::string predictions, detections, grids, graph, truth, split = "test", algo = "distance_transform";
  std::vector<std::string> sets;
  double lambda = 1e-2, threshold = 0.7, iou_threshold = 0.5;
  int epochs = 300;
  long interval = 60;
  bool background = true, nms_iou = false, iou_match = false;
};

void cmd_gen_synthetic(const Options& o) {
  auto cfg = harness::SyntheticConfig::from_kv(merged(o.config, o.sets));
  auto bundle = harness::gen_synthetic(cfg);
  harness::save_bundle(o.out, bundle);
  json j{{"out", o.out},
         {"videos", bundle.videos.size()},
         {"annotations", bundle.annotations.size()},
         {"config", cfg.to_kv().entries()}};
  emit(j, "wrote " + std::to_string(bundle.videos.size()) + " videos, " + std::to_string(bundle.annotations.size()) +
              " intervals to " + o.out + "\n",
       fs::path(o.out) / "gen_report.json");
}

void cmd_mine_scripts(const Options& o) {
  auto bundle = harness::load_bundle(o.bundle);
  auto w = harness::mine_weights(bundle, o.kind, corpus::parse_match_mode(o.match));
  w.save_csv(o.out);
  json j{{"out", o.out}, {"composites", w.row_labels}, {"empty_rows", w.empty_row_ids()}};
  std::string table = "mined " + o.kind + " weights for " + std::to_string(w.rows()) + " composites -> " + o.out + "\n";
  if (bundle.planted.rows() > 0 && bundle.planted.col_labels == w.col_labels) {
    double sum = 0;
    long n = 0;
    for (std::size_t z = 0; z < w.rows(); ++z) {
      long pz = bundle.planted.row_of(w.row_labels[z]);
      if (pz < 0) continue;
      const Eigen::VectorXd a = w.values.row(static_cast<long>(z)).transpose();
      const Eigen::VectorXd b = bundle.planted.values.row(pz).transpose();
      sum += harness::spearman({a.data(), a.data() + a.size()}, {b.data(), b.data() + b.size()});
      ++n;
    }
    if (n > 0) {
      j["planted_spearman"] = sum / static_cast<double>(n);
      table += "mean Spearman vs planted weights: " + fmt(sum / static_cast<double>(n)) + "\n";
    }
  }
  emit(j, table, fs::path(o.out).replace_extension(".json"));
}

void cmd_train_attributes(const Options& o) {
  auto bundle = harness::load_bundle(o.bundle);
  auto models = harness::train_attribute_models(bundle, train_config(o.lambda, o.epochs));
  models.save_json(o.out);
  json j{{"out", o.out}, {"attributes", models.attributes}, {"skipped", models.skipped}};
  std::string table = "trained " + std::to_string(models.attributes.size() - models.skipped.size()) + " of " +
                      std::to_string(models.attributes.size()) + " attribute classifiers -> " + o.out + "\n";
  for (const auto& s : models.skipped) table += "  skipped (no positives or negatives): " + s + "\n";
  emit(j, table, "");
}

void cmd_score(const Options& o) {
  auto bundle = harness::load_bundle(o.bundle);
  auto scores = annotated_scores(bundle, o.models);
  for (const auto& [id, s] : scores) s.save_csv(fs::path(o.out) / (id + ".csv"));
  auto ap = harness::interval_ap(bundle, scores, bundle.videos_in(o.split));
  emit({{"split", o.split}, {"attribute_ap", ap_json(ap)}}, ap_table("attribute AP (" + o.split + ")", ap),
       fs::path(o.out) / "score_report.json");
}

void cmd_stack(const Options& o) {
  auto bundle = harness::load_bundle(o.bundle);
  auto base = annotated_scores(bundle, o.models);
  auto mode = attributes::parse_stack_mode(o.mode);
  auto refined = harness::stack_scores(bundle, base, mode, train_config(o.lambda, o.epochs));
  for (const auto& [id, s] : refined) s.save_csv(fs::path(o.out) / (id + ".csv"));
  auto ids = bundle.videos_in(o.split);
  auto before = harness::interval_ap(bundle, base, ids), after = harness::interval_ap(bundle, refined, ids);
  emit({{"mode", o.mode}, {"split", o.split}, {"base_ap", ap_json(before)}, {"stacked_ap", ap_json(after)}},
       ap_table("base attribute AP", before) + ap_table("stacked attribute AP (" + o.mode + ")", after),
       fs::path(o.out) / "stack_report.json");
}

void cmd_detect(const Options& o) {
  auto bundle = harness::load_bundle(o.bundle);
  if (o.models.empty()) throw ValidationError("detect needs --models");
  auto models = attributes::LinearModelSet::load_json(o.models);
  auto schedule = temporal::window_schedule();
  temporal::NmsOptions nms;
  nms.use_iou = o.nms_iou;
  std::vector<temporal::Detection> kept;
  std::vector<harness::IntervalAnnotation> truth;
  for (const auto& id : bundle.videos_in(o.split)) {
    auto d = temporal::nms_grouped(
        temporal::score_windows(harness::integral_of(bundle, id), models, schedule, id), nms);
    kept.insert(kept.end(), d.begin(), d.end());
    auto a = bundle.annotations_of(id);
    truth.insert(truth.end(), a.begin(), a.end());
  }
  temporal::save_detections(o.out, kept);
  harness::DetectionMatchOptions match;
  match.criterion = o.iou_match ? harness::MatchCriterion::kIou : harness::MatchCriterion::kMidpoint;
  match.iou_threshold = o.iou_threshold;
  auto ap = harness::eval_detection(kept, truth, bundle.vocab.labels(), match);
  emit({{"detections", kept.size()}, {"detection_ap", ap_json(ap)}},
       std::to_string(kept.size()) + " detections -> " + o.out + "\n" + ap_table("detection AP", ap),
       fs::path(o.out).replace_extension(".json"));
}

void cmd_segment(const Options& o) {
  auto bundle = harness::load_bundle(o.bundle);
  if (o.models.empty()) throw ValidationError("segment needs --models");
  auto models = attributes::LinearModelSet::load_json(o.models);
  std::optional<temporal::BackgroundModel> bg;
  if (o.background) bg = harness::train_background_model(bundle, models.config);
  std::vector<std::pair<std::string, temporal::Segment>> segs;
  harness::segmented_sequence_set(bundle, bundle.videos_in(o.split), models, bg ? &*bg : nullptr, o.threshold,
                                  o.interval, &segs);
  temporal::save_segments(o.out, segs);
  long flagged = 0;
  for (const auto& s : segs) flagged += s.second.background;
  emit({{"segments", segs.size()}, {"background", flagged}, {"threshold", o.threshold}},
       std::to_string(segs.size()) + " segments (" + std::to_string(flagged) + " background) -> " + o.out + "\n",
       "");
}

harness::ExperimentConfig experiment_config(const Options& o) {
  kv::KeyValues kv = merged(o.config, o.sets);
  fs::path base = o.config.empty() ? fs::current_path() : fs::absolute(o.config).parent_path();
  if (!o.bundle.empty()) kv.set("bundle", fs::absolute(o.bundle).string());
  if (!o.out.empty()) kv.set("output", fs::absolute(o.out).string());
  if (!o.mode.empty()) kv.set("mode", o.mode);
  return harness::ExperimentConfig::from_kv(kv, base);
}

void cmd_run(const Options& o) {
  auto report = harness::run_experiment(experiment_config(o));
  std::cout << report.to_table();
}

void cmd_eval(const Options& o) {
  auto bundle = harness::load_bundle(o.bundle);
  json j;
  std::string table;
  if (!o.predictions.empty()) {
    auto scores = composites::CompositeScores::load_csv(o.predictions);
    composites::SequenceSet truth;
    for (const auto& id : scores.sequences) truth.add(id, Eigen::VectorXd(), bundle.video(id).composite);
    double acc = harness::accuracy(scores, truth);
    auto ap = harness::composite_ap(scores, truth);
    j["accuracy"] = acc;
    j["composite_ap"] = ap_json(ap);
    table += "composite accuracy: " + fmt(acc) + "\n" + ap_table("composite AP", ap);
  }
  if (!o.detections.empty()) {
    auto dets = temporal::load_detections(o.detections);
    std::vector<harness::IntervalAnnotation> truth;
    for (const auto& id : bundle.videos_in(o.split)) {
      auto a = bundle.annotations_of(id);
      truth.insert(truth.end(), a.begin(), a.end());
    }
    harness::DetectionMatchOptions match;
    match.criterion = o.iou_match ? harness::MatchCriterion::kIou : harness::MatchCriterion::kMidpoint;
    match.iou_threshold = o.iou_threshold;
    auto ap = harness::eval_detection(dets, truth, bundle.vocab.labels(), match);
    j["detection_ap"] = ap_json(ap);
    table += ap_table("detection AP", ap);
  }
  if (j.is_null()) throw ValidationError("eval needs --predictions and/or --detections");
  emit(j, table, o.out);
}

void cmd_pose_infer(const Options& o) {
  auto grids = psinfer::load_grids(o.grids);
  auto graph = o.graph.empty() ? psinfer::default_part_graph() : psinfer::PartGraph::load_csv(o.graph);
  auto algo = psinfer::parse_message_algorithm(o.algo);
  auto mode = psinfer::parse_inference_mode(o.mode.empty() ? "map" : o.mode);
  auto result = psinfer::infer(grids, graph, mode, algo);
  json j;
  std::string table;
  if (mode == psinfer::InferenceMode::kMarginal) {
    // Report each marginal's mode as the placement.
    for (std::size_t p = 0; p < result.marginals.size(); ++p) {
      Eigen::Index y, x;
      result.marginals[p].maxCoeff(&y, &x);
      result.placements.push_back({static_cast<long>(x), static_cast<long>(y)});
    }
  }
  psinfer::save_placements(o.out, graph, result.placements);
  for (std::size_t p = 0; p < graph.names.size(); ++p) {
    j["placements"][graph.names[p]] = {result.placements[p].x, result.placements[p].y};
    table += "  " + graph.names[p] + " (" + std::to_string(result.placements[p].x) + ", " +
             std::to_string(result.placements[p].y) + ")\n";
  }
  if (mode == psinfer::InferenceMode::kMap) j["log_score"] = result.log_score;
  if (!o.truth.empty()) {
    if (graph.names.size() != static_cast<std::size_t>(posefeat::kNumParts)) {
      throw ValidationError("PCP needs the full " + std::to_string(posefeat::kNumParts) + "-part graph");
    }
    psinfer::Pose pred{}, truth{};
    for (std::size_t p = 0; p < graph.names.size(); ++p) {
      auto part = static_cast<std::size_t>(posefeat::parse_part(graph.names[p]));
      pred[part] = {static_cast<double>(result.placements[p].x), static_cast<double>(result.placements[p].y)};
    }
    auto lines = io::read_lines(o.truth);
    std::vector<bool> seen(posefeat::kNumParts, false);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (io::trim(lines[i]).empty()) continue;
      auto f = csv::split(lines[i]);
      if (f.size() != 3) throw ValidationError(o.truth + ": expected part,x,y on line " + std::to_string(i + 1));
      auto part = static_cast<std::size_t>(posefeat::parse_part(f[0]));
      truth[part] = {csv::parse_double(f[1], o.truth), csv::parse_double(f[2], o.truth)};
      seen[part] = true;
    }
    for (int p = 0; p < posefeat::kNumParts; ++p) {
      if (!seen[p]) throw ValidationError(o.truth + ": missing part " +
                                          std::string(posefeat::part_name(static_cast<posefeat::Part>(p))));
    }
    auto pcp = psinfer::pcp_eval({pred}, {truth});
    for (std::size_t s = 0; s < pcp.sticks.size(); ++s) {
      j["pcp"][pcp.sticks[s]] = pcp.pcp[s];
      table += "  PCP " + pcp.sticks[s] + " " + fmt(pcp.pcp[s]) + "\n";
    }
    j["pcp_mean"] = pcp.mean;
    table += "  PCP mean " + fmt(pcp.mean) + "\n";
  }
  emit(j, table, fs::path(o.out).replace_extension(".json"));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite activity recognition toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_bundle = [&](CLI::App* c) { c->add_option("--bundle", o.bundle, "Dataset bundle directory")->required(); };
  auto add_train = [&](CLI::App* c) {
    c->add_option("--lambda", o.lambda, "SVM regularization");
    c->add_option("--epochs", o.epochs, "SVM epochs");
  };
  auto add_config = [&](CLI::App* c) {
    c->add_option("--config", o.config, "Key-value config file");
    c->add_option("--set", o.sets, "Override key=value (repeatable)");
  };

  auto* gen = app.add_subcommand("gen-synthetic", "Generate a synthetic bundle with planted ground truth");
  add_config(gen);
  gen->add_option("--out", o.out, "Output bundle directory")->required();
  gen->callback([&] { cmd_gen_synthetic(o); });

  auto* mine = app.add_subcommand("mine-scripts", "Mine composite-attribute weights from scripts");
  add_bundle(mine);
  mine->add_option("--kind", o.kind, "tfidf or freq")->check(CLI::IsMember({"tfidf", "freq"}));
  mine->add_option("--match", o.match, "literal or synonym")->check(CLI::IsMember({"literal", "synonym"}));
  mine->add_option("--out", o.out, "Output weights CSV")->required();
  mine->callback([&] { cmd_mine_scripts(o); });

  auto* train = app.add_subcommand("train-attributes", "Train one-vs-all attribute classifiers");
  add_bundle(train);
  add_train(train);
  train->add_option("--out", o.out, "Output model JSON")->required();
  train->callback([&] { cmd_train_attributes(o); });

  auto* score = app.add_subcommand("score", "Score annotated intervals");
  add_bundle(score);
  score->add_option("--models", o.models, "Attribute model JSON (frame bundles)");
  score->add_option("--split", o.split, "Split for the AP report");
  score->add_option("--out", o.out, "Output directory of score CSVs")->required();
  score->callback([&] { cmd_score(o); });

  auto* stack = app.add_subcommand("stack", "Refine attribute scores with context or co-occurrence stacking");
  add_bundle(stack);
  add_train(stack);
  stack->add_option("--models", o.models, "Attribute model JSON (frame bundles)");
  stack->add_option("--mode", o.mode, "context, cooccurrence, base+context, base+cooccurrence, all")->required();
  stack->add_option("--split", o.split, "Split for the AP report");
  stack->add_option("--out", o.out, "Output directory of refined score CSVs")->required();
  stack->callback([&] { cmd_stack(o); });

  auto* detect = app.add_subcommand("detect", "Sliding-window attribute detection with NMS");
  add_bundle(detect);
  detect->add_option("--models", o.models, "Attribute model JSON")->required();
  detect->add_option("--split", o.split, "Videos to scan");
  detect->add_flag("--nms-iou", o.nms_iou, "Suppress by IoU > 0.5 instead of any overlap");
  detect->add_flag("--iou-match", o.iou_match, "Match ground truth by IoU instead of midpoint");
  detect->add_option("--iou-threshold", o.iou_threshold, "IoU threshold for --iou-match");
  detect->add_option("--out", o.out, "Output detections CSV")->required();
  detect->callback([&] { cmd_detect(o); });

  auto* segment = app.add_subcommand("segment", "Agglomerative segmentation with background filtering");
  add_bundle(segment);
  segment->add_option("--models", o.models, "Attribute model JSON")->required();
  segment->add_option("--threshold", o.threshold, "Cosine-similarity merge threshold");
  segment->add_option("--interval", o.interval, "Uniform interval length in frames");
  segment->add_option("--background", o.background, "Train and apply the background filter (true/false)");
  segment->add_option("--split", o.split, "Videos to segment");
  segment->add_option("--out", o.out, "Output segments JSONL")->required();
  segment->callback([&] { cmd_segment(o); });

  auto* classify = app.add_subcommand("classify-composites", "Composite classification in one mode");
  add_config(classify);
  classify->add_option("--bundle", o.bundle, "Dataset bundle directory (overrides the config)");
  classify->add_option("--mode", o.mode, "Composite mode")
      ->required()
      ->check(CLI::IsMember({"svm", "nn", "script", "nn-script", "pst", "pst-zero-shot"}));
  classify->add_option("--out", o.out, "Output directory (overrides the config)");
  classify->callback([&] { cmd_run(o); });

  auto* pose = app.add_subcommand("pose-infer", "Pictorial-structures inference on likelihood grids");
  pose->add_option("--grids", o.grids, "Binary likelihood grids")->required();
  pose->add_option("--graph", o.graph, "Part graph CSV (default: 10-part upper body)");
  pose->add_option("--mode", o.mode, "map or marginal");
  pose->add_option("--algo", o.algo, "naive or distance_transform");
  pose->add_option("--truth", o.truth, "Ground-truth pose CSV part,x,y for PCP");
  pose->add_option("--out", o.out, "Output placements CSV")->required();
  pose->callback([&] { cmd_pose_infer(o); });

  auto* eval = app.add_subcommand("eval", "Evaluate composite predictions or detections");
  add_bundle(eval);
  eval->add_option("--predictions", o.predictions, "Composite score CSV");
  eval->add_option("--detections", o.detections, "Detections CSV");
  eval->add_option("--split", o.split, "Ground-truth split for detections");
  eval->add_flag("--iou-match", o.iou_match, "Match ground truth by IoU instead of midpoint");
  eval->add_option("--iou-threshold", o.iou_threshold, "IoU threshold for --iou-match");
  eval->add_option("--out", o.out, "Output JSON report");
  eval->callback([&] { cmd_eval(o); });

  auto* run = app.add_subcommand("run", "Full pipeline from a config file");
  run->add_option("--config", o.config, "Key-value config file")->required();
  run->add_option("--set", o.sets, "Override key=value (repeatable)");
  run->callback([&] { cmd_run(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
