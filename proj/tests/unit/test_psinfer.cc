#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"

#include "actrec/common/error.h"
#include "actrec/psinfer/hand_likelihood.h"
#include "actrec/psinfer/inference.h"
#include "actrec/psinfer/part_graph.h"
#include "actrec/psinfer/pcp.h"

using namespace actrec::psinfer;
using actrec::posefeat::Part;

namespace {

PartGraph chain(int parts, double var, double mdx = 0, double mdy = 0) {
  PartGraph g;
  for (int p = 0; p < parts; ++p) {
    g.names.push_back("p" + std::to_string(p));
    g.parent.push_back(p - 1);
    g.pairwise.push_back({mdx, mdy, var, var * 1.5});
  }
  return g;
}

LikelihoodGrids random_grids(std::mt19937_64& rng, int parts, long h, long w) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  LikelihoodGrids g(parts, Grid(h, w));
  for (auto& m : g) {
    for (long i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  }
  return g;
}

// Enumerates every joint configuration of a small graph.
template <typename Fn>
void enumerate(int parts, long h, long w, Fn&& fn) {
  std::vector<Placement> p(parts);
  const long cells = h * w;
  long total = 1;
  for (int i = 0; i < parts; ++i) total *= cells;
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = 0; i < parts; ++i) {
      p[i] = {(c % cells) % w, (c % cells) / w};
      c /= cells;
    }
    fn(p);
  }
}

}  // namespace

TEST_CASE("hand likelihood map") {
  HandHypothesisSet one;
  one.hypotheses = {{5, 5, 0}};
  auto m = hand_likelihood_map(one, 12, 12);
  CHECK(m.grid(5, 5) == 1.0);
  CHECK(m.grid(5, 6) == doctest::Approx(std::exp(-0.005)));
  CHECK(m.grid.maxCoeff() == 1.0);

  HandHypothesisSet low;
  low.hypotheses = {{5, 5, -1.5}};
  auto z = hand_likelihood_map(low, 12, 12);
  CHECK(z.empty);
  CHECK(z.grid.isZero());

  HandHypothesisSet a, b, both;
  a.hypotheses = {{2.5, 7, 0.3}};
  b.hypotheses = {{9, 1, 1.2}};
  both.hypotheses = {b.hypotheses[0], a.hypotheses[0]};
  Grid sum = hand_likelihood_map(a, 10, 12).grid + hand_likelihood_map(b, 10, 12).grid;
  CHECK((hand_likelihood_map(both, 10, 12).grid - sum).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(hand_likelihood_map(a, 0, 3), actrec::ValidationError);
}

TEST_CASE("1-D distance transform matches brute force") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 3);
  std::uniform_int_distribution<int> coin(0, 4);
  for (int trial = 0; trial < 500; ++trial) {
    long n = 1 + trial % 17;
    std::vector<double> f(n);
    for (auto& v : f) v = coin(rng) == 0 ? -INFINITY : g(rng);
    double a = 0.05 + std::abs(g(rng)) / 3, shift = g(rng);
    std::vector<double> out;
    std::vector<long> arg;
    distance_transform_1d(f, a, shift, out, arg);
    for (long j = 0; j < n; ++j) {
      double best = -INFINITY;
      for (long i = 0; i < n; ++i) best = std::max(best, f[i] - a * (i - j - shift) * (i - j - shift));
      if (best == -INFINITY) {
        CHECK(arg[j] == -1);
      } else {
        CHECK(out[j] == doctest::Approx(best).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("part graph validation and default tree") {
  auto g = default_part_graph();
  CHECK_NOTHROW(g.validate());
  CHECK(g.num_parts() == 10);
  CHECK(g.names[g.root()] == "torso");
  int edges = 0;
  for (int p : g.parent) edges += p >= 0;
  CHECK(edges == 9);
  CHECK(g.parent[static_cast<int>(Part::kRightHand)] == static_cast<int>(Part::kRightWrist));

  auto cyc = chain(3, 1.0);
  cyc.parent[0] = 2;
  CHECK_THROWS_AS(cyc.validate(), actrec::ValidationError);
  auto neg = chain(2, 1.0);
  neg.pairwise[1].var_x = 0;
  CHECK_THROWS_AS(neg.validate(), actrec::ValidationError);

  auto path = std::filesystem::temp_directory_path() / "actrec_graph.csv";
  g.save_csv(path);
  auto back = PartGraph::load_csv(path);
  CHECK(back.parent == g.parent);
  CHECK(back.pairwise[0].mean_dy == g.pairwise[0].mean_dy);
  std::filesystem::remove(path);
}

TEST_CASE("MAP examples") {
  // Delta unaries with a wide zero-mean pairwise.
  LikelihoodGrids delta(3, Grid::Zero(8, 9));
  delta[0](2, 3) = 1;
  delta[1](6, 1) = 1;
  delta[2](0, 8) = 1;
  auto r = infer(delta, chain(3, 1e4), InferenceMode::kMap);
  CHECK(r.placements[0].x == 3);
  CHECK(r.placements[1].y == 6);
  CHECK(r.placements[2].x == 8);

  // 2-part chain on a 1x5 grid against all 25 configurations.
  LikelihoodGrids line(2, Grid(1, 5));
  line[0] << 0.1, 0.5, 0.2, 0.9, 0.3;
  line[1] << 0.8, 0.1, 0.4, 0.2, 0.6;
  auto g2 = chain(2, 0.7, 1.0, 0.0);
  double best = -INFINITY;
  std::vector<Placement> arg;
  enumerate(2, 1, 5, [&](const std::vector<Placement>& p) {
    double s = configuration_log_score(line, g2, p);
    if (s > best) {
      best = s;
      arg = p;
    }
  });
  for (auto algo : {MessageAlgorithm::kNaive, MessageAlgorithm::kDistanceTransform}) {
    auto m = infer(line, g2, InferenceMode::kMap, algo);
    CHECK(m.placements[0].x == arg[0].x);
    CHECK(m.placements[1].x == arg[1].x);
    CHECK(m.log_score == doctest::Approx(best).epsilon(1e-12));
  }

  // Single part: argmax with lowest (y, x) on ties.
  LikelihoodGrids single(1, Grid::Constant(3, 3, 0.5));
  single[0](2, 0) = 0.9;
  single[0](1, 2) = 0.9;
  auto s = infer(single, chain(1, 1.0), InferenceMode::kMap);
  CHECK(s.placements[0].y == 1);
  CHECK(s.placements[0].x == 2);

  LikelihoodGrids dead = single;
  dead[0].setZero();
  CHECK_THROWS_AS(infer(dead, chain(1, 1.0), InferenceMode::kMap), actrec::ValidationError);
}

TEST_CASE("MAP agrees with enumeration and between algorithms") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    auto grids = random_grids(rng, 3, 3, 4);
    PartGraph g = chain(3, 0.5 + trial * 0.3, 0.7, -0.4);
    if (trial % 2) g.parent[2] = 0;  // star instead of chain
    double best = -INFINITY;
    std::vector<Placement> arg;
    enumerate(3, 3, 4, [&](const std::vector<Placement>& p) {
      double s = configuration_log_score(grids, g, p);
      if (s > best) {
        best = s;
        arg = p;
      }
    });
    auto m = infer(grids, g, InferenceMode::kMap, MessageAlgorithm::kDistanceTransform);
    for (int p = 0; p < 3; ++p) {
      CHECK(m.placements[p].x == arg[p].x);
      CHECK(m.placements[p].y == arg[p].y);
    }
    CHECK(m.log_score == doctest::Approx(best).epsilon(1e-12));
  }
  for (int trial = 0; trial < 10; ++trial) {
    long h = 4 + trial % 9, w = 12 - trial % 5;
    auto grids = random_grids(rng, 3, h, w);
    PartGraph g = chain(3, 1.0 + trial, 1.5 * (trial % 3), -2.0);
    auto naive = infer(grids, g, InferenceMode::kMap, MessageAlgorithm::kNaive);
    auto dt = infer(grids, g, InferenceMode::kMap, MessageAlgorithm::kDistanceTransform);
    CHECK(std::abs(naive.log_score - dt.log_score) < 1e-9);
    for (int p = 0; p < 3; ++p) {
      CHECK(naive.placements[p].x == dt.placements[p].x);
      CHECK(naive.placements[p].y == dt.placements[p].y);
    }
    // Scaling one part's grid leaves the configuration unchanged.
    auto scaled = grids;
    scaled[1] *= 7.5;
    auto sm = infer(scaled, g, InferenceMode::kMap);
    for (int p = 0; p < 3; ++p) CHECK(sm.placements[p].x == dt.placements[p].x);
  }
}

TEST_CASE("marginals match enumeration and sum to one") {
  std::mt19937_64 rng(3);
  auto grids = random_grids(rng, 3, 3, 4);
  PartGraph g = chain(3, 0.8, 0.5, 0.25);
  g.parent[2] = 0;
  std::vector<Grid> oracle(3, Grid::Zero(3, 4));
  double z = 0;
  enumerate(3, 3, 4, [&](const std::vector<Placement>& p) {
    double w = std::exp(configuration_log_score(grids, g, p));
    z += w;
    for (int i = 0; i < 3; ++i) oracle[i](p[i].y, p[i].x) += w;
  });
  for (auto algo : {MessageAlgorithm::kNaive, MessageAlgorithm::kDistanceTransform}) {
    auto r = infer(grids, g, InferenceMode::kMarginal, algo);
    for (int i = 0; i < 3; ++i) {
      CHECK((r.marginals[i] - oracle[i] / z).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(r.marginals[i].sum() - 1.0) < 1e-12);
      CHECK((r.marginals[i].array() >= 0).all());
    }
  }
  for (int trial = 0; trial < 5; ++trial) {
    auto big = random_grids(rng, 3, 12, 12);
    auto pg = chain(3, 2.0 + trial, 1, 1);
    auto a = infer(big, pg, InferenceMode::kMarginal, MessageAlgorithm::kNaive);
    auto b = infer(big, pg, InferenceMode::kMarginal, MessageAlgorithm::kDistanceTransform);
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(b.marginals[i].sum() - 1.0) < 1e-12);
      CHECK((a.marginals[i] - b.marginals[i]).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  // Zero cells keep zero posterior mass.
  auto sparse = grids;
  sparse[2](1, 1) = 0;
  auto r = infer(sparse, g, InferenceMode::kMarginal);
  CHECK(r.marginals[2](1, 1) == 0.0);
}

TEST_CASE("PCP") {
  std::vector<Pose> truth(3);
  for (auto& p : truth) {
    p[static_cast<int>(Part::kHead)] = {50, 10};
    p[static_cast<int>(Part::kTorso)] = {50, 80};
    p[static_cast<int>(Part::kRightShoulder)] = {30, 40};
    p[static_cast<int>(Part::kLeftShoulder)] = {70, 40};
    p[static_cast<int>(Part::kRightElbow)] = {30, 80};
    p[static_cast<int>(Part::kLeftElbow)] = {70, 80};
    p[static_cast<int>(Part::kRightWrist)] = {30, 120};
    p[static_cast<int>(Part::kLeftWrist)] = {70, 120};
  }
  auto same = pcp_eval(truth, truth);
  for (double v : same.pcp) CHECK(v == 1.0);
  CHECK(same.mean == 1.0);

  auto moved = truth;
  moved[0][static_cast<int>(Part::kRightWrist)].y += 0.6 * 40;  // lower arm length 40
  moved[1][static_cast<int>(Part::kRightWrist)].y += 0.4 * 40;
  auto r = pcp_eval(moved, truth);
  CHECK(r.pcp[4] == doctest::Approx(2.0 / 3));
  CHECK(r.pcp[2] == 1.0);

  auto degenerate = truth;
  degenerate[2][static_cast<int>(Part::kLeftElbow)] = degenerate[2][static_cast<int>(Part::kLeftWrist)];
  auto d = pcp_eval(degenerate, degenerate);
  CHECK(d.excluded[5] == 1);
  CHECK(d.evaluated[5] == 2);
  CHECK_THROWS_AS(pcp_eval(truth, std::vector<Pose>(2)), actrec::ValidationError);
}

TEST_CASE("grid and placement files") {
  std::mt19937_64 rng(4);
  auto grids = random_grids(rng, 2, 5, 7);
  auto path = std::filesystem::temp_directory_path() / "actrec_grids.bin";
  save_grids(path, grids);
  auto back = load_grids(path);
  REQUIRE(back.size() == 2);
  CHECK(back[1] == grids[1]);
  std::filesystem::remove(path);

  auto hp = std::filesystem::temp_directory_path() / "actrec_hands.csv";
  HandHypothesisSet set;
  set.hypotheses = {{1.5, 2, -0.25}};
  set.save_csv(hp);
  CHECK(HandHypothesisSet::load_csv(hp).hypotheses[0].score == -0.25);
  std::filesystem::remove(hp);
}
