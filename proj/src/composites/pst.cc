#include "actrec/composites/pst.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/composites/script_transfer.h"

namespace actrec::composites {

void PstConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("pst: gamma must lie in [0, 1]");
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("pst: delta must lie in (0, 1]");
  if (k < 1) throw ValidationError("pst: k must be at least 1");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ValidationError("pst: alpha must lie in [0, 1)");
  if (!(tol > 0.0)) throw ValidationError("pst: tol must be positive");
  if (max_iters < 1) throw ValidationError("pst: max_iters must be at least 1");
}

PstConfig PstConfig::from_kv(const kv::KeyValues& kv) {
  PstConfig c;
  c.gamma = kv.get_double("gamma", c.gamma);
  c.delta = kv.get_double("delta", c.delta);
  c.k = static_cast<int>(kv.get_int("k", c.k));
  c.alpha = kv.get_double("alpha", c.alpha);
  c.tol = kv.get_double("tol", c.tol);
  c.max_iters = static_cast<int>(kv.get_int("max_iters", c.max_iters));
  c.zero_shot = kv.get_bool("zero_shot", c.zero_shot);
  c.squared_distance = kv.get_bool("squared_distance", c.squared_distance);
  c.sigma_knn_mean = kv.get_bool("sigma_knn_mean", c.sigma_knn_mean);
  c.validate();
  return c;
}

PstConfig PstConfig::load(const std::filesystem::path& path) {
  auto kv = kv::KeyValues::load(path);
  auto unknown = kv.unknown_keys(
      {"gamma", "delta", "k", "alpha", "tol", "max_iters", "zero_shot", "squared_distance", "sigma_knn_mean"});
  if (!unknown.empty()) throw ValidationError(path.string() + ": unknown key '" + unknown.front() + "'");
  return from_kv(kv);
}

kv::KeyValues PstConfig::to_kv() const {
  kv::KeyValues kv;
  auto num = [](double v) { return csv::format_exact(v); };
  kv.set("gamma", num(gamma));
  kv.set("delta", num(delta));
  kv.set("k", std::to_string(k));
  kv.set("alpha", num(alpha));
  kv.set("tol", num(tol));
  kv.set("max_iters", std::to_string(max_iters));
  kv.set("zero_shot", zero_shot ? "true" : "false");
  kv.set("squared_distance", squared_distance ? "true" : "false");
  kv.set("sigma_knn_mean", sigma_knn_mean ? "true" : "false");
  return kv;
}

LabelSet make_label_set(long num_composites, const std::vector<long>& composite_of_sequence) {
  LabelSet l = LabelSet::Constant(num_composites, static_cast<long>(composite_of_sequence.size()), kUnlabeled);
  for (std::size_t d = 0; d < composite_of_sequence.size(); ++d) {
    long z = composite_of_sequence[d];
    if (z < 0) continue;
    if (z >= num_composites) throw ValidationError("label set: composite index out of range");
    l.col(static_cast<long>(d)).setZero();
    l(z, static_cast<long>(d)) = 1;
  }
  return l;
}

Eigen::MatrixXd pst_init(const Eigen::MatrixXd& script_scores, const LabelSet& labels, const PstConfig& config) {
  if (!script_scores.allFinite()) throw ValidationError("pst_init: non-finite script score");
  if (labels.rows() != script_scores.rows() || labels.cols() != script_scores.cols()) {
    throw ValidationError("pst_init: label table shape does not match scores");
  }
  const double gamma = config.zero_shot ? 0.0 : config.gamma;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(script_scores.rows(), script_scores.cols());
  for (long z = 0; z < script_scores.rows(); ++z) {
    std::vector<long> unlabeled;
    for (long d = 0; d < script_scores.cols(); ++d) {
      if (!config.zero_shot && labels(z, d) != kUnlabeled) {
        out(z, d) = gamma * labels(z, d);
      } else {
        unlabeled.push_back(d);
      }
    }
    if (unlabeled.empty()) continue;
    std::stable_sort(unlabeled.begin(), unlabeled.end(),
                     [&](long a, long b) { return script_scores(z, a) > script_scores(z, b); });
    auto keep = static_cast<std::size_t>(std::ceil(config.delta * static_cast<double>(unlabeled.size()) - 1e-12));
    keep = std::clamp<std::size_t>(keep, 1, unlabeled.size());
    const double cutoff = script_scores(z, unlabeled[keep - 1]);
    for (long d : unlabeled) {
      if (script_scores(z, d) < cutoff) break;
      out(z, d) = (1.0 - gamma) * script_scores(z, d);
    }
  }
  return out;
}

NeighborGraph build_knn_graph(const Eigen::MatrixXd& features, int k, const PstConfig& options,
                              const std::vector<std::string>& ids) {
  const long n = features.rows();
  if (k < 1 || k >= n) {
    throw ValidationError("knn graph: k = " + std::to_string(k) + " needs at least k + 1 nodes, have " +
                          std::to_string(n));
  }
  if (!features.allFinite()) throw ValidationError("knn graph: non-finite feature");
  if (!ids.empty() && static_cast<long>(ids.size()) != n) throw ValidationError("knn graph: id count mismatch");

  Eigen::MatrixXd dist(n, n);
  for (long a = 0; a < n; ++a) {
    for (long b = a; b < n; ++b) dist(a, b) = dist(b, a) = (features.row(a) - features.row(b)).norm();
  }
  std::vector<std::vector<long>> nearest(n);
  double sigma_sum = 0.0;
  long sigma_count = 0;
  for (long a = 0; a < n; ++a) {
    std::vector<long> order;
    order.reserve(n - 1);
    for (long b = 0; b < n; ++b) {
      if (b != a) order.push_back(b);
    }
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](long x, long y) {
      return dist(a, x) < dist(a, y) || (dist(a, x) == dist(a, y) && x < y);
    });
    nearest[a].assign(order.begin(), order.begin() + k);
    if (options.sigma_knn_mean) {
      for (long b : nearest[a]) sigma_sum += dist(a, b);
      sigma_count += k;
    } else {
      sigma_sum += dist(a, nearest[a][0]);
      sigma_count += 1;
    }
  }

  NeighborGraph g;
  g.k = k;
  g.sigma = sigma_sum / static_cast<double>(sigma_count);
  g.nodes = ids;
  const double scale = 0.5 * std::sqrt(g.sigma);
  auto weight = [&](double d) {
    if (options.squared_distance) return g.sigma > 0.0 ? std::exp(-d * d / (2.0 * g.sigma * g.sigma)) : 1.0;
    return std::exp(-scale * d);
  };
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
  for (long a = 0; a < n; ++a) {
    for (long b : nearest[a]) {
      if (seen[a][b]) continue;
      seen[a][b] = seen[b][a] = true;
      double w = weight(dist(a, b));
      if (w <= 0.0) continue;
      triplets.emplace_back(a, b, w);
      triplets.emplace_back(b, a, w);
    }
  }
  g.weights.resize(n, n);
  g.weights.setFromTriplets(triplets.begin(), triplets.end());
  g.weights.makeCompressed();
  return g;
}

Eigen::SparseMatrix<double> normalized_adjacency(const NeighborGraph& graph) {
  Eigen::VectorXd degree = Eigen::VectorXd::Zero(graph.num_nodes());
  for (long c = 0; c < graph.weights.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(graph.weights, c); it; ++it) degree[it.row()] += it.value();
  }
  Eigen::VectorXd inv_sqrt = degree.unaryExpr([](double v) { return v > 0.0 ? 1.0 / std::sqrt(v) : 0.0; });
  Eigen::SparseMatrix<double> s = graph.weights;
  for (long c = 0; c < s.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(s, c); it; ++it) {
      it.valueRef() *= inv_sqrt[it.row()] * inv_sqrt[it.col()];
    }
  }
  return s;
}

Propagation propagate(const NeighborGraph& graph, const Eigen::MatrixXd& init, const PstConfig& config) {
  if (init.cols() != graph.num_nodes()) {
    throw ValidationError("propagate: init has " + std::to_string(init.cols()) + " columns for " +
                          std::to_string(graph.num_nodes()) + " nodes");
  }
  if (!init.allFinite()) throw ValidationError("propagate: non-finite initial scores");
  const Eigen::SparseMatrix<double> s = normalized_adjacency(graph);
  // Nodes in rows: F is D x Z.
  const Eigen::MatrixXd y = init.transpose();
  Eigen::MatrixXd f = y;
  Propagation out;
  for (out.iterations = 0; out.iterations < config.max_iters;) {
    Eigen::MatrixXd next = config.alpha * (s * f) + (1.0 - config.alpha) * y;
    ++out.iterations;
    if (!next.allFinite()) throw RuntimeError("propagate: non-finite value at iteration " +
                                              std::to_string(out.iterations));
    double change = (next - f).cwiseAbs().maxCoeff();
    f.swap(next);
    if (change < config.tol) {
      out.converged = true;
      break;
    }
  }
  out.scores = f.transpose();
  return out;
}

CompositeScores run_pst(const SequenceSet& labeled, const SequenceSet& unlabeled, const SequenceSet& test,
                        const corpus::WeightMatrix& w, const PstConfig& config) {
  config.validate();
  const std::vector<const SequenceSet*> parts{&labeled, &unlabeled, &test};
  SequenceSet all;
  all.attributes = test.attributes;
  std::vector<long> composite_of;
  for (const auto* part : parts) {
    for (long d = 0; d < part->size(); ++d) {
      bool has_label = part == &labeled && !config.zero_shot;
      long z = -1;
      if (has_label) {
        z = w.row_of(part->composites[d]);
        if (z < 0) throw ValidationError("pst: composite '" + part->composites[d] + "' has no weight row");
      }
      all.add(part->ids[d], part->features.row(d).transpose(), has_label ? part->composites[d] : "");
      composite_of.push_back(z);
    }
  }
  auto scripts = script_scores(all, w);
  auto init = pst_init(scripts.values.transpose(), make_label_set(static_cast<long>(w.rows()), composite_of), config);
  auto graph = build_knn_graph(all.features, config.k, config, all.ids);
  auto result = propagate(graph, init, config);

  CompositeScores out;
  out.sequences = test.ids;
  out.composites = w.row_labels;
  out.flagged = w.empty_row_ids();
  out.values = result.scores.rightCols(test.size()).transpose();
  return out;
}

}  // namespace actrec::composites
