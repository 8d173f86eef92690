#include "actrec/psinfer/inference.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::psinfer {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum(const std::vector<double>& v) {
  double m = *std::max_element(v.begin(), v.end());
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

Grid log_grid(const Grid& g) {
  return g.unaryExpr([](double v) { return v > 0.0 ? std::log(v) : kNegInf; });
}

// Child-to-parent message over parent positions, with child argmax per parent cell.
struct Message {
  Grid values;
  Eigen::MatrixXi arg_y, arg_x;
};

Message max_message_naive(const Grid& belief, const Pairwise& e) {
  const long h = belief.rows(), w = belief.cols();
  Message m{Grid::Constant(h, w, kNegInf), Eigen::MatrixXi::Constant(h, w, -1), Eigen::MatrixXi::Constant(h, w, -1)};
  for (long qy = 0; qy < h; ++qy) {
    for (long qx = 0; qx < w; ++qx) {
      for (long py = 0; py < h; ++py) {
        for (long px = 0; px < w; ++px) {
          if (belief(py, px) == kNegInf) continue;
          double v = belief(py, px) + e.log_potential(px - qx, py - qy);
          if (v > m.values(qy, qx)) {
            m.values(qy, qx) = v;
            m.arg_y(qy, qx) = static_cast<int>(py);
            m.arg_x(qy, qx) = static_cast<int>(px);
          }
        }
      }
    }
  }
  return m;
}

Message max_message_dt(const Grid& belief, const Pairwise& e) {
  const long h = belief.rows(), w = belief.cols();
  const double ax = 1.0 / (2.0 * e.var_x), ay = 1.0 / (2.0 * e.var_y);
  // Pass along x for every child row: g(cy, qx) and its best child x.
  Grid g(h, w);
  Eigen::MatrixXi gx(h, w);
  std::vector<double> f(w), out;
  std::vector<long> arg;
  for (long cy = 0; cy < h; ++cy) {
    for (long x = 0; x < w; ++x) f[x] = belief(cy, x);
    distance_transform_1d(f, ax, e.mean_dx, out, arg);
    for (long x = 0; x < w; ++x) {
      g(cy, x) = out[x];
      gx(cy, x) = static_cast<int>(arg[x]);
    }
  }
  // Pass along y for every parent column.
  Message m{Grid(h, w), Eigen::MatrixXi(h, w), Eigen::MatrixXi(h, w)};
  std::vector<double> col(h);
  for (long qx = 0; qx < w; ++qx) {
    for (long y = 0; y < h; ++y) col[y] = g(y, qx);
    distance_transform_1d(col, ay, e.mean_dy, out, arg);
    for (long qy = 0; qy < h; ++qy) {
      if (arg[qy] < 0) {
        m.values(qy, qx) = kNegInf;
        m.arg_y(qy, qx) = m.arg_x(qy, qx) = -1;
        continue;
      }
      // Recompute from the chosen cell so both algorithms produce identical sums.
      long cy = arg[qy], cx = gx(cy, qx);
      m.values(qy, qx) = belief(cy, cx) + e.log_potential(cx - qx, cy - qy);
      m.arg_y(qy, qx) = static_cast<int>(cy);
      m.arg_x(qy, qx) = static_cast<int>(cx);
    }
  }
  return m;
}

// out[q] = log sum_p exp(belief(p) + log psi(sign * (p - q))).
Grid sum_message_naive(const Grid& belief, const Pairwise& e, double sign) {
  const long h = belief.rows(), w = belief.cols();
  Grid out(h, w);
  std::vector<double> terms(static_cast<std::size_t>(h * w));
  for (long qy = 0; qy < h; ++qy) {
    for (long qx = 0; qx < w; ++qx) {
      std::size_t k = 0;
      for (long py = 0; py < h; ++py) {
        for (long px = 0; px < w; ++px) {
          terms[k++] = belief(py, px) + e.log_potential(sign * (px - qx), sign * (py - qy));
        }
      }
      out(qy, qx) = log_sum(terms);
    }
  }
  return out;
}

// out[j] = log sum_i exp(f[i] - a (i - j - shift)^2)
std::vector<double> lse_pass(const std::vector<double>& f, double a, double shift) {
  const long n = static_cast<long>(f.size());
  std::vector<double> out(n), terms(n);
  for (long j = 0; j < n; ++j) {
    for (long i = 0; i < n; ++i) {
      double d = i - j - shift;
      terms[i] = f[i] - a * d * d;
    }
    out[j] = log_sum(terms);
  }
  return out;
}

Grid sum_message_separable(const Grid& belief, const Pairwise& e, double sign) {
  const long h = belief.rows(), w = belief.cols();
  const double ax = 1.0 / (2.0 * e.var_x), ay = 1.0 / (2.0 * e.var_y);
  // (p - q) * sign - mean = 0  <=>  p = q + sign * mean
  Grid g(h, w), out(h, w);
  std::vector<double> f(w);
  for (long y = 0; y < h; ++y) {
    for (long x = 0; x < w; ++x) f[x] = belief(y, x);
    auto r = lse_pass(f, ax, sign * e.mean_dx);
    for (long x = 0; x < w; ++x) g(y, x) = r[x];
  }
  std::vector<double> col(h);
  for (long x = 0; x < w; ++x) {
    for (long y = 0; y < h; ++y) col[y] = g(y, x);
    auto r = lse_pass(col, ay, sign * e.mean_dy);
    for (long y = 0; y < h; ++y) out(y, x) = r[y];
  }
  return out;
}

}  // namespace

InferenceMode parse_inference_mode(const std::string& s) {
  if (s == "map") return InferenceMode::kMap;
  if (s == "marginal") return InferenceMode::kMarginal;
  throw ValidationError("unknown inference mode '" + s + "' (map|marginal)");
}

MessageAlgorithm parse_message_algorithm(const std::string& s) {
  if (s == "naive") return MessageAlgorithm::kNaive;
  if (s == "distance_transform" || s == "dt") return MessageAlgorithm::kDistanceTransform;
  throw ValidationError("unknown message algorithm '" + s + "' (naive|distance_transform)");
}

void distance_transform_1d(const std::vector<double>& f, double a, double shift, std::vector<double>& out,
                           std::vector<long>& arg) {
  const long n = static_cast<long>(f.size());
  out.assign(n, kNegInf);
  arg.assign(n, -1);
  // Lower envelope of parabolas a (t - i)^2 - f[i] over the finite cells.
  std::vector<long> v;
  std::vector<double> z;
  for (long i = 0; i < n; ++i) {
    if (f[i] == kNegInf) continue;
    const double hi = a * static_cast<double>(i) * static_cast<double>(i) - f[i];
    while (!v.empty()) {
      long k = v.back();
      const double hk = a * static_cast<double>(k) * static_cast<double>(k) - f[k];
      double s = (hi - hk) / (2.0 * a * static_cast<double>(i - k));
      if (s <= z.back()) {
        v.pop_back();
        z.pop_back();
        continue;
      }
      v.push_back(i);
      z.push_back(s);
      break;
    }
    if (v.empty()) {
      v.push_back(i);
      z.push_back(kNegInf);
    }
  }
  if (v.empty()) return;
  std::size_t k = 0;
  for (long j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) + shift;
    while (k + 1 < v.size() && z[k + 1] < t) ++k;
    const double d = static_cast<double>(v[k]) - t;
    out[j] = f[v[k]] - a * d * d;
    arg[j] = v[k];
  }
}

double configuration_log_score(const LikelihoodGrids& grids, const PartGraph& graph,
                               const std::vector<Placement>& placements) {
  double s = 0.0;
  for (int p = 0; p < graph.num_parts(); ++p) {
    double u = grids[p](placements[p].y, placements[p].x);
    if (u <= 0.0) return kNegInf;
    s += std::log(u);
    int q = graph.parent[p];
    if (q >= 0) {
      s += graph.pairwise[p].log_potential(static_cast<double>(placements[p].x - placements[q].x),
                                           static_cast<double>(placements[p].y - placements[q].y));
    }
  }
  return s;
}

InferenceResult infer(const LikelihoodGrids& grids, const PartGraph& graph, InferenceMode mode,
                      MessageAlgorithm algorithm) {
  graph.validate();
  if (static_cast<int>(grids.size()) != graph.num_parts()) {
    throw ValidationError("inference: " + std::to_string(grids.size()) + " grids for " +
                          std::to_string(graph.num_parts()) + " parts");
  }
  validate_grids(grids);
  const int n = graph.num_parts();
  const auto order = graph.topological_order();
  std::vector<Grid> unary(n);
  for (int p = 0; p < n; ++p) unary[p] = log_grid(grids[p]);

  InferenceResult result;
  if (mode == InferenceMode::kMap) {
    std::vector<Grid> belief = unary;
    std::vector<Message> msg(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int c = *it;
      int p = graph.parent[c];
      if (p < 0) continue;
      msg[c] = algorithm == MessageAlgorithm::kNaive ? max_message_naive(belief[c], graph.pairwise[c])
                                                     : max_message_dt(belief[c], graph.pairwise[c]);
      belief[p] += msg[c].values;
    }
    const Grid& rb = belief[graph.root()];
    Placement best{-1, -1};
    double best_v = kNegInf;
    for (long y = 0; y < rb.rows(); ++y) {
      for (long x = 0; x < rb.cols(); ++x) {
        if (rb(y, x) > best_v) {
          best_v = rb(y, x);
          best = {x, y};
        }
      }
    }
    if (best.x < 0) throw ValidationError("inference: no configuration with positive likelihood");
    result.placements.assign(n, Placement{});
    result.placements[graph.root()] = best;
    for (int c : order) {
      int p = graph.parent[c];
      if (p < 0) continue;
      const Placement q = result.placements[p];
      result.placements[c] = {msg[c].arg_x(q.y, q.x), msg[c].arg_y(q.y, q.x)};
    }
    result.log_score = best_v;
    return result;
  }

  auto message = [&](const Grid& b, const Pairwise& e, double sign) {
    return algorithm == MessageAlgorithm::kNaive ? sum_message_naive(b, e, sign) : sum_message_separable(b, e, sign);
  };
  std::vector<Grid> up(n), down(n);
  std::vector<Grid> inward = unary;  // unary plus messages from children
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int c = *it;
    int p = graph.parent[c];
    if (p < 0) continue;
    up[c] = message(inward[c], graph.pairwise[c], 1.0);
    inward[p] += up[c];
  }
  for (int p : order) {
    for (int c : graph.children(p)) {
      Grid b = inward[p] - up[c];
      if (graph.parent[p] >= 0) b += down[p];
      // Cells where up[c] is -inf: recompute the sum without subtraction.
      for (long i = 0; i < b.size(); ++i) {
        if (std::isnan(b.data()[i])) {
          double v = unary[p].data()[i];
          for (int k : graph.children(p)) {
            if (k != c) v += up[k].data()[i];
          }
          if (graph.parent[p] >= 0) v += down[p].data()[i];
          b.data()[i] = v;
        }
      }
      down[c] = message(b, graph.pairwise[c], -1.0);
    }
  }
  result.marginals.resize(n);
  for (int p = 0; p < n; ++p) {
    Grid lb = inward[p];
    if (graph.parent[p] >= 0) lb += down[p];
    std::vector<double> flat(lb.data(), lb.data() + lb.size());
    double z = log_sum(flat);
    if (z == kNegInf) throw ValidationError("inference: part " + graph.names[p] + " has zero posterior mass");
    result.marginals[p] = lb.unaryExpr([z](double v) { return std::exp(v - z); });
    result.marginals[p] /= result.marginals[p].sum();
  }
  return result;
}

void save_placements(const std::filesystem::path& path, const PartGraph& graph, const std::vector<Placement>& p) {
  std::ostringstream out;
  out << "part,x,y\n";
  for (int i = 0; i < graph.num_parts(); ++i) out << graph.names[i] << ',' << p[i].x << ',' << p[i].y << '\n';
  io::write_file(path, out.str());
}

}  // namespace actrec::psinfer
