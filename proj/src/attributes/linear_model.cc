#include "actrec/attributes/linear_model.h"

#include <cmath>
#include <limits>

#include "json.hpp"

#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::attributes {

namespace {

Eigen::VectorXd class_weights(const std::vector<int>& labels, bool balanced) {
  const long m = static_cast<long>(labels.size());
  Eigen::VectorXd c = Eigen::VectorXd::Ones(m);
  if (!balanced) return c;
  long pos = 0;
  for (int y : labels) pos += y > 0;
  const long neg = m - pos;
  for (long j = 0; j < m; ++j) {
    c[j] = static_cast<double>(m) / (2.0 * static_cast<double>(labels[static_cast<std::size_t>(j)] > 0 ? pos : neg));
  }
  return c;
}

void check_finite(const Eigen::MatrixXd& features) {
  if (!features.allFinite()) throw ValidationError("features contain NaN or infinite values");
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t global_seed, std::uint64_t index) {
  // splitmix64 step over the pair.
  std::uint64_t z = global_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double hinge_objective(const LinearModel& model, const Eigen::MatrixXd& features, const std::vector<int>& labels,
                       const TrainConfig& config) {
  Eigen::VectorXd c = class_weights(labels, config.balanced);
  Eigen::VectorXd scores = (features * model.weights).array() + model.bias;
  double loss = 0.0;
  for (long j = 0; j < features.rows(); ++j) {
    loss += c[j] * std::max(0.0, 1.0 - labels[static_cast<std::size_t>(j)] * scores[j]);
  }
  return 0.5 * config.lambda * (model.weights.squaredNorm() + model.bias * model.bias) +
         loss / static_cast<double>(features.rows());
}

LinearModel train_linear_binary(const Eigen::MatrixXd& features, const std::vector<int>& labels,
                                const TrainConfig& config) {
  check_finite(features);
  const long m = features.rows();
  if (static_cast<long>(labels.size()) != m) throw ValidationError("label count does not match feature rows");
  if (config.lambda <= 0.0 || config.epochs < 1) throw ValidationError("need lambda > 0 and epochs >= 1");
  long pos = 0;
  for (int y : labels) {
    if (y != 1 && y != -1) throw ValidationError("binary labels must be +1 or -1");
    pos += y > 0;
  }
  if (pos == 0 || pos == m) throw ValidationError("binary training needs both classes");

  const Eigen::VectorXd c = class_weights(labels, config.balanced);
  Eigen::VectorXd y(m);
  for (long j = 0; j < m; ++j) y[j] = labels[static_cast<std::size_t>(j)];
  const double radius = 1.0 / std::sqrt(config.lambda);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(features.cols());
  double b = 0.0;
  LinearModel best;
  double best_obj = std::numeric_limits<double>::infinity();

  // Each pass evaluates the current iterate, records it if best, then steps.
  for (int t = 1; t <= config.epochs + 1; ++t) {
    Eigen::VectorXd margins = y.cwiseProduct((features * w).array().matrix() + Eigen::VectorXd::Constant(m, b));
    Eigen::VectorXd active = (margins.array() < 1.0).cast<double>().matrix().cwiseProduct(c).cwiseProduct(y);
    double loss = 0.0;
    for (long j = 0; j < m; ++j) loss += c[j] * std::max(0.0, 1.0 - margins[j]);
    double obj = 0.5 * config.lambda * (w.squaredNorm() + b * b) + loss / static_cast<double>(m);
    if (!std::isfinite(obj)) throw RuntimeError("linear training diverged");
    if (obj < best_obj) {
      best_obj = obj;
      best.weights = w;
      best.bias = b;
    }
    if (t > 1) best.objective_history.push_back(best_obj);
    if (t == config.epochs + 1) break;

    const double eta = 1.0 / (config.lambda * t);
    Eigen::VectorXd grad_w = config.lambda * w - features.transpose() * active / static_cast<double>(m);
    double grad_b = config.lambda * b - active.sum() / static_cast<double>(m);
    w -= eta * grad_w;
    b -= eta * grad_b;
    double norm = std::sqrt(w.squaredNorm() + b * b);
    if (norm > radius) {
      w *= radius / norm;
      b *= radius / norm;
    }
  }

  Eigen::VectorXd train_scores = (features * best.weights).array() + best.bias;
  best.score_mean = train_scores.mean();
  double var = (train_scores.array() - best.score_mean).square().mean();
  best.score_std = std::sqrt(var);
  best.constant_scores = !(best.score_std > 1e-12);
  if (best.constant_scores) best.score_std = 1.0;
  return best;
}

LinearModelSet train_linear_ova(const Eigen::MatrixXd& features, const std::vector<std::vector<int>>& labels,
                                const std::vector<std::string>& attributes, const TrainConfig& config) {
  check_finite(features);
  if (static_cast<long>(labels.size()) != features.rows()) {
    throw ValidationError("got " + std::to_string(labels.size()) + " label sets for " +
                          std::to_string(features.rows()) + " feature rows");
  }
  const long n = static_cast<long>(attributes.size());
  LinearModelSet set;
  set.attributes = attributes;
  set.config = config;
  set.dim = features.cols();
  set.models.resize(attributes.size());
  for (long i = 0; i < n; ++i) {
    std::vector<int> y(labels.size(), -1);
    long pos = 0;
    for (std::size_t t = 0; t < labels.size(); ++t) {
      for (int a : labels[t]) {
        if (a < 0 || a >= n) throw ValidationError("attribute index " + std::to_string(a) + " out of range");
        if (a == i) y[t] = 1;
      }
      pos += y[t] > 0;
    }
    if (pos == 0 || pos == static_cast<long>(y.size())) {
      set.skipped.push_back(attributes[static_cast<std::size_t>(i)]);
      continue;
    }
    TrainConfig cfg = config;
    cfg.seed = derive_seed(config.seed, static_cast<std::uint64_t>(i));
    set.models[static_cast<std::size_t>(i)] = train_linear_binary(features, y, cfg);
  }
  return set;
}

ScoreMatrix score_intervals(const LinearModelSet& models, const Eigen::MatrixXd& features,
                            const std::vector<std::string>& interval_ids) {
  check_finite(features);
  if (features.cols() != models.dim) {
    throw ValidationError("feature dimension " + std::to_string(features.cols()) + " does not match model dimension " +
                          std::to_string(models.dim));
  }
  const long n = static_cast<long>(models.attributes.size());
  ScoreMatrix s;
  s.attributes = models.attributes;
  s.values.resize(n, features.rows());
  s.flagged_rows.assign(static_cast<std::size_t>(n), false);
  if (interval_ids.empty()) {
    for (long t = 0; t < features.rows(); ++t) s.interval_ids.push_back(std::to_string(t));
  } else {
    if (static_cast<long>(interval_ids.size()) != features.rows()) throw ValidationError("interval id count mismatch");
    s.interval_ids = interval_ids;
  }
  for (long i = 0; i < n; ++i) {
    const auto& m = models.models[static_cast<std::size_t>(i)];
    if (!m) {
      s.values.row(i).setConstant(models.config.floor);
      s.flagged_rows[static_cast<std::size_t>(i)] = true;
      continue;
    }
    Eigen::VectorXd raw = (features * m->weights).array() + m->bias;
    if (models.config.z_normalize) {
      for (long t = 0; t < raw.size(); ++t) raw[t] = m->normalized_score(raw[t]);
    }
    s.values.row(i) = raw.transpose();
  }
  return s;
}

void LinearModelSet::save_json(const std::filesystem::path& path) const {
  nlohmann::json j;
  j["format"] = "actrec-linear-models-1";
  j["dim"] = dim;
  j["config"] = {{"lambda", config.lambda}, {"epochs", config.epochs}, {"seed", config.seed},
                 {"balanced", config.balanced}, {"z_normalize", config.z_normalize}, {"floor", config.floor}};
  j["skipped"] = skipped;
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    nlohmann::json e{{"attribute", attributes[i]}, {"trained", models[i].has_value()}};
    if (models[i]) {
      const auto& m = *models[i];
      e["weights"] = std::vector<double>(m.weights.data(), m.weights.data() + m.weights.size());
      e["bias"] = m.bias;
      e["score_mean"] = m.score_mean;
      e["score_std"] = m.score_std;
      e["constant_scores"] = m.constant_scores;
    }
    arr.push_back(std::move(e));
  }
  j["models"] = std::move(arr);
  io::write_file(path, j.dump(1) + "\n");
}

LinearModelSet LinearModelSet::load_json(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
    LinearModelSet set;
    set.dim = j.at("dim").get<long>();
    const auto& c = j.at("config");
    set.config.lambda = c.at("lambda").get<double>();
    set.config.epochs = c.at("epochs").get<int>();
    set.config.seed = c.at("seed").get<std::uint64_t>();
    set.config.balanced = c.at("balanced").get<bool>();
    set.config.z_normalize = c.at("z_normalize").get<bool>();
    set.config.floor = c.at("floor").get<double>();
    set.skipped = j.at("skipped").get<std::vector<std::string>>();
    for (const auto& e : j.at("models")) {
      set.attributes.push_back(e.at("attribute").get<std::string>());
      if (!e.at("trained").get<bool>()) {
        set.models.emplace_back();
        continue;
      }
      LinearModel m;
      auto w = e.at("weights").get<std::vector<double>>();
      if (static_cast<long>(w.size()) != set.dim) throw ValidationError(path.string() + ": weight length mismatch");
      m.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<long>(w.size()));
      m.bias = e.at("bias").get<double>();
      m.score_mean = e.at("score_mean").get<double>();
      m.score_std = e.at("score_std").get<double>();
      m.constant_scores = e.at("constant_scores").get<bool>();
      set.models.emplace_back(std::move(m));
    }
    return set;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(path.string() + ": " + ex.what());
  }
}

}  // namespace actrec::attributes
