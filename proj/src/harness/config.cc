#include "actrec/harness/config.h"

#include <cmath>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"

namespace actrec::harness {

namespace fs = std::filesystem;

CompositeMode parse_composite_mode(const std::string& s) {
  if (s == "svm") return CompositeMode::kSvm;
  if (s == "nn") return CompositeMode::kNn;
  if (s == "script") return CompositeMode::kScript;
  if (s == "nn-script" || s == "nn+script") return CompositeMode::kNnScript;
  if (s == "pst" || s == "pst+script") return CompositeMode::kPst;
  if (s == "pst-zero-shot") return CompositeMode::kPstZeroShot;
  throw ValidationError("mode: unknown composite mode '" + s + "' (svm|nn|script|nn-script|pst|pst-zero-shot)");
}

std::string composite_mode_name(CompositeMode m) {
  switch (m) {
    case CompositeMode::kSvm: return "svm";
    case CompositeMode::kNn: return "nn";
    case CompositeMode::kScript: return "script";
    case CompositeMode::kNnScript: return "nn-script";
    case CompositeMode::kPst: return "pst";
    case CompositeMode::kPstZeroShot: return "pst-zero-shot";
  }
  return "?";
}

std::vector<std::string> ExperimentConfig::keys() {
  return {"bundle", "output", "mode", "weights", "weight_kind", "match_mode", "sequence_source", "stack_mode",
          "lambda", "epochs", "seed", "balanced", "z_normalize", "floor", "alpha", "gamma", "delta", "k", "tol",
          "max_iters", "squared_distance", "sigma_knn_mean", "grid_search", "alpha_grid", "gamma_grid",
          "delta_grid", "k_grid", "segment_interval", "segment_thresholds", "background_filter", "detection",
          "detection_criterion", "detection_iou", "nms_iou", "window_min_size", "window_min_step",
          "window_max_size"};
}

namespace {

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += (i ? "," : "") + csv::format_exact(v[i]);
  }
  return out;
}

std::string num(double v) { return csv::format_exact(v); }

}  // namespace

ExperimentConfig ExperimentConfig::from_kv(const kv::KeyValues& kv, const fs::path& base_dir) {
  auto unknown = kv.unknown_keys(keys());
  if (!unknown.empty()) throw ValidationError("config: unknown key '" + unknown.front() + "'");
  ExperimentConfig c;
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };
  if (!kv.has("bundle")) throw ValidationError("config: missing key 'bundle'");
  c.bundle = resolve(kv.get_string("bundle", ""));
  c.output = resolve(kv.get_string("output", "out"));
  c.mode = parse_composite_mode(kv.get_string("mode", "svm"));
  c.weights = kv.get_string("weights", c.weights);
  if (c.weights != "mined" && c.weights != "planted") c.weights = resolve(c.weights).string();
  c.weight_kind = kv.get_string("weight_kind", c.weight_kind);
  if (c.weight_kind != "tfidf" && c.weight_kind != "freq") throw ValidationError("config: weight_kind must be tfidf or freq");
  c.match_mode = corpus::parse_match_mode(kv.get_string("match_mode", "literal"));
  c.sequence_source = kv.get_string("sequence_source", c.sequence_source);
  if (c.sequence_source != "annotated" && c.sequence_source != "segmented") {
    throw ValidationError("config: sequence_source must be annotated or segmented");
  }
  c.stack_mode = kv.get_string("stack_mode", c.stack_mode);
  if (c.stack_mode != "none") attributes::parse_stack_mode(c.stack_mode);
  c.train.lambda = kv.get_double("lambda", c.train.lambda);
  c.train.epochs = static_cast<int>(kv.get_int("epochs", c.train.epochs));
  c.train.seed = static_cast<std::uint64_t>(kv.get_int("seed", 0));
  c.train.balanced = kv.get_bool("balanced", c.train.balanced);
  c.train.z_normalize = kv.get_bool("z_normalize", c.train.z_normalize);
  c.train.floor = kv.get_double("floor", c.train.floor);
  if (!(c.train.lambda > 0) || c.train.epochs < 1) throw ValidationError("config: lambda must be > 0 and epochs >= 1");
  kv::KeyValues pst_kv;
  for (const char* key : {"alpha", "gamma", "delta", "k", "tol", "max_iters", "squared_distance", "sigma_knn_mean"}) {
    if (auto v = kv.get(key)) pst_kv.set(key, *v);
  }
  c.pst = composites::PstConfig::from_kv(pst_kv);
  c.grid_search = kv.get_bool("grid_search", c.grid_search);
  c.alpha_grid = kv.get_doubles("alpha_grid", c.alpha_grid);
  c.gamma_grid = kv.get_doubles("gamma_grid", c.gamma_grid);
  c.delta_grid = kv.get_doubles("delta_grid", c.delta_grid);
  c.k_grid = kv.get_doubles("k_grid", c.k_grid);
  for (double k : c.k_grid) {
    if (k < 1 || k != std::floor(k)) throw ValidationError("config: k_grid entries must be positive integers");
  }
  if (c.alpha_grid.empty() || c.gamma_grid.empty() || c.delta_grid.empty() || c.k_grid.empty()) {
    throw ValidationError("config: PST grids must not be empty");
  }
  c.segment_interval = kv.get_int("segment_interval", c.segment_interval);
  c.segment_thresholds = kv.get_doubles("segment_thresholds", c.segment_thresholds);
  if (c.segment_interval < 1 || c.segment_thresholds.empty()) throw ValidationError("config: invalid segmentation settings");
  c.background_filter = kv.get_bool("background_filter", c.background_filter);
  c.detection = kv.get_bool("detection", c.detection);
  auto crit = kv.get_string("detection_criterion", "midpoint");
  if (crit == "midpoint") {
    c.match.criterion = MatchCriterion::kMidpoint;
  } else if (crit == "iou") {
    c.match.criterion = MatchCriterion::kIou;
  } else {
    throw ValidationError("config: detection_criterion must be midpoint or iou");
  }
  c.match.iou_threshold = kv.get_double("detection_iou", c.match.iou_threshold);
  c.nms_iou = kv.get_bool("nms_iou", c.nms_iou);
  c.window_min_size = kv.get_int("window_min_size", c.window_min_size);
  c.window_min_step = kv.get_int("window_min_step", c.window_min_step);
  c.window_max_size = kv.get_int("window_max_size", c.window_max_size);
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  auto kv = kv::KeyValues::load(path);
  return from_kv(kv, fs::absolute(path).parent_path());
}

kv::KeyValues ExperimentConfig::resolved() const {
  kv::KeyValues kv;
  kv.set("bundle", bundle.string());
  kv.set("output", output.string());
  kv.set("mode", composite_mode_name(mode));
  kv.set("weights", weights);
  kv.set("weight_kind", weight_kind);
  kv.set("match_mode", match_mode == corpus::MatchMode::kLiteral ? "literal" : "synonym");
  kv.set("sequence_source", sequence_source);
  kv.set("stack_mode", stack_mode);
  kv.set("lambda", num(train.lambda));
  kv.set("epochs", std::to_string(train.epochs));
  kv.set("seed", std::to_string(train.seed));
  kv.set("balanced", train.balanced ? "true" : "false");
  kv.set("z_normalize", train.z_normalize ? "true" : "false");
  kv.set("floor", num(train.floor));
  const kv::KeyValues pst_kv = pst.to_kv();
  for (const auto& [k, v] : pst_kv.entries()) {
    if (k != "zero_shot") kv.set(k, v);
  }
  kv.set("grid_search", grid_search ? "true" : "false");
  kv.set("alpha_grid", join_doubles(alpha_grid));
  kv.set("gamma_grid", join_doubles(gamma_grid));
  kv.set("delta_grid", join_doubles(delta_grid));
  kv.set("k_grid", join_doubles(k_grid));
  kv.set("segment_interval", std::to_string(segment_interval));
  kv.set("segment_thresholds", join_doubles(segment_thresholds));
  kv.set("background_filter", background_filter ? "true" : "false");
  kv.set("detection", detection ? "true" : "false");
  kv.set("detection_criterion", match.criterion == MatchCriterion::kMidpoint ? "midpoint" : "iou");
  kv.set("detection_iou", num(match.iou_threshold));
  kv.set("nms_iou", nms_iou ? "true" : "false");
  kv.set("window_min_size", std::to_string(window_min_size));
  kv.set("window_min_step", std::to_string(window_min_step));
  kv.set("window_max_size", std::to_string(window_max_size));
  return kv;
}

}  // namespace actrec::harness
