#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"

#include "actrec/common/error.h"
#include "actrec/common/text_io.h"
#include "actrec/posefeat/bow.h"
#include "actrec/posefeat/codebook.h"
#include "actrec/posefeat/features.h"
#include "actrec/posefeat/joint_tracks.h"

using namespace actrec::posefeat;
namespace fs = std::filesystem;

namespace {

// Upright skeleton with independent random-walk wiggles per joint.
JointTrackSet random_tracks(std::uint64_t seed, int frames, long first = 0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> step(0.0, 1.5);
  const std::array<Point, kNumParts> rest{{{100, 40}, {100, 100}, {80, 70}, {120, 70}, {70, 100},
                                           {130, 100}, {65, 130}, {135, 130}, {62, 140}, {138, 140}}};
  std::vector<std::array<Point, kNumParts>> data(static_cast<std::size_t>(frames));
  std::array<Point, kNumParts> cur = rest;
  for (auto& f : data) {
    for (auto& p : cur) {
      p.x += step(rng);
      p.y += step(rng);
    }
    f = cur;
  }
  return JointTrackSet(first, data);
}

JointTrackSet transform(const JointTrackSet& in, double a, double b, double c, double d, double tx, double ty) {
  std::vector<std::array<Point, kNumParts>> data(in.num_frames());
  for (std::size_t f = 0; f < data.size(); ++f) {
    for (int p = 0; p < kNumParts; ++p) {
      const Point& q = in.at(in.first_frame() + static_cast<long>(f), static_cast<Part>(p));
      data[f][static_cast<std::size_t>(p)] = {a * q.x + b * q.y + tx, c * q.x + d * q.y + ty};
    }
  }
  return JointTrackSet(in.first_frame(), data);
}

}  // namespace

TEST_CASE("direction and rate-of-change bins") {
  CHECK(direction_bin(1, 0) == 0);
  CHECK(direction_bin(0, 1) == 2);
  CHECK(direction_bin(-1, 0) == 4);
  CHECK(direction_bin(0, -1) == 6);
  CHECK(direction_bin(1, 1) == 1);
  CHECK(direction_bin(1, -0.1) == 0);
  CHECK(direction_bin(1, -0.5) == 7);
  CHECK(rate_of_change_bin(-10) == 0);
  CHECK(rate_of_change_bin(-3) == 1);
  CHECK(rate_of_change_bin(-0.5) == 3);
  CHECK(rate_of_change_bin(0) == 4);
  CHECK(rate_of_change_bin(1.5) == 5);
  CHECK(rate_of_change_bin(100) == 7);
}

TEST_CASE("summary stats") {
  std::vector<double> v{3, 1, 2, 10};
  auto s = summary_stats(v);
  CHECK(s[0] == doctest::Approx(4.0));
  CHECK(s[1] == doctest::Approx(2.5));
  CHECK(s[2] == doctest::Approx(std::sqrt((1 + 9 + 4 + 36) / 4.0)));
  CHECK(s[3] == 1);
  CHECK(s[4] == 10);
}

TEST_CASE("BM dimension accounting") {
  int total = 0;
  for (const auto& s : bm_sub_features()) total += s.dim;
  CHECK(total == kBmDim);
  auto tracks = random_tracks(1, 120);
  auto subs = bm_feature(tracks, 60, 50);
  REQUIRE(subs.size() == bm_sub_features().size());
  long n = 0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    CHECK(subs[i].name == bm_sub_features()[i].name);
    CHECK(subs[i].values.size() == bm_sub_features()[i].dim);
    CHECK(subs[i].values.allFinite());
    n += subs[i].values.size();
  }
  CHECK(n == kBmDim);
}

TEST_CASE("BM velocity histogram of a joint moving along +x") {
  std::vector<std::array<Point, kNumParts>> data(20);
  for (int t = 0; t < 20; ++t) {
    for (int p = 0; p < kNumParts; ++p) data[t][p] = {10.0 * p, 5.0 * p + 3};
    data[t][static_cast<int>(Part::kRightHand)] = {2.0 * t, 0};
  }
  JointTrackSet tracks(0, data);
  auto subs = bm_feature(tracks, 10, 20);
  Eigen::VectorXd hand = subs[0].values.segment(8 * static_cast<int>(Part::kRightHand), 8);
  CHECK(hand[0] == doctest::Approx(38.0));
  CHECK(hand.tail(7).isZero(0.0));
  // Stationary joints: no velocity, no acceleration.
  CHECK(subs[0].values.segment(0, 8).isZero(0.0));
  CHECK(subs[1].values.isZero(0.0));
}

TEST_CASE("BM constant distance trajectory") {
  std::vector<std::array<Point, kNumParts>> data(30);
  for (int t = 0; t < 30; ++t) {
    for (int p = 0; p < kNumParts; ++p) data[t][p] = {static_cast<double>(t), 7.0 * p};
    data[t][static_cast<int>(Part::kRightShoulder)] = {t + 0.0, 0.0};
    data[t][static_cast<int>(Part::kLeftShoulder)] = {t + 50.0, 0.0};
  }
  auto subs = bm_feature(JointTrackSet(0, data), 15, 30);
  Eigen::VectorXd stats = subs[2].values.segment(0, 5);
  CHECK(stats[0] == doctest::Approx(50));
  CHECK(stats[1] == doctest::Approx(50));
  CHECK(stats[2] == doctest::Approx(0).epsilon(1e-12));
  CHECK(stats[3] == doctest::Approx(50));
  CHECK(stats[4] == doctest::Approx(50));
  CHECK(subs[3].values.segment(0, 8).isZero(1e-12));
}

TEST_CASE("BM features are translation invariant and velocity is rotation covariant") {
  auto tracks = random_tracks(3, 60);
  auto base = bm_feature(tracks, 30, 50);
  auto shifted = bm_feature(transform(tracks, 1, 0, 0, 1, 123.5, -42.25), 30, 50);
  for (std::size_t i = 0; i < base.size(); ++i) {
    CHECK((base[i].values - shifted[i].values).cwiseAbs().maxCoeff() < 1e-8);
  }
  // (x, y) -> (-y, x) adds 90 degrees to every displacement direction.
  auto rotated = bm_feature(transform(tracks, 0, -1, 1, 0, 0, 0), 30, 50);
  for (int p = 0; p < kNumParts; ++p) {
    for (int b = 0; b < 8; ++b) {
      CHECK(rotated[0].values[8 * p + (b + 2) % 8] == doctest::Approx(base[0].values[8 * p + b]).epsilon(1e-9));
      CHECK(rotated[1].values[8 * p + (b + 2) % 8] == doctest::Approx(base[1].values[8 * p + b]).epsilon(1e-9));
    }
  }
}

TEST_CASE("window out of range throws") {
  auto tracks = random_tracks(4, 40, 100);
  CHECK(window_fits(tracks, 120, 20));
  CHECK_FALSE(window_fits(tracks, 105, 20));
  CHECK_THROWS_AS(bm_feature(tracks, 105, 20), actrec::ValidationError);
  CHECK_THROWS_AS(fft_feature(tracks, 139, 20), actrec::ValidationError);
}

TEST_CASE("FFT descriptor") {
  std::vector<double> constant(20, 7.5);
  auto d = fft_descriptor(constant);
  CHECK(d.size() == 16);
  for (int b = 0; b < 4; ++b) CHECK(d[b] == 0.0);
  CHECK(d[14] == 0.0);
  CHECK(d[15] == 0.0);

  // cos at DFT bin 2 of a 20-sample window: |X_2| = N/2, so power N^2/4 = 100
  // sits entirely in band [2,4).
  const int n = 20;
  std::vector<double> sine(n);
  for (int t = 0; t < n; ++t) sine[t] = 3.0 + std::cos(2.0 * std::numbers::pi * 2.0 * t / n);
  auto s = fft_descriptor(sine);
  CHECK(s[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(s[1] == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(s[2] < 1e-18);
  CHECK(s[3] < 1e-18);
  CHECK(s[15] == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(s[14] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("FFT feature is 256-dimensional") {
  auto tracks = random_tracks(5, 120);
  for (int len : kTrajectoryLengths) {
    auto subs = fft_feature(tracks, 60, len);
    long n = 0;
    for (const auto& s : subs) n += s.values.size();
    CHECK(n == kFftDim);
    CHECK(n / 16 == 16);
  }
}

TEST_CASE("2-means on four 1-D points") {
  Eigen::MatrixXd x(4, 1);
  x << 0, 0.1, 10, 10.1;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto cb = build_codebook(x, seed);
    REQUIRE(cb.k() == 2);
    double lo = std::min(cb.centers(0, 0), cb.centers(1, 0));
    double hi = std::max(cb.centers(0, 0), cb.centers(1, 0));
    CHECK(lo == doctest::Approx(0.05));
    CHECK(hi == doctest::Approx(10.05));
  }
}

TEST_CASE("codebook error paths and determinism") {
  Eigen::MatrixXd same = Eigen::MatrixXd::Constant(10, 2, 3.0);
  CHECK_THROWS_AS(build_codebook(same, 1), actrec::ValidationError);
  Eigen::MatrixXd few = Eigen::MatrixXd::Random(3, 2);
  CHECK_THROWS_AS(build_codebook(few, 1), actrec::ValidationError);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(200, 3);
  for (long i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  auto a = build_codebook(x, 42), b = build_codebook(x, 42);
  CHECK(a.centers == b.centers);
  CHECK(a.k() == 6);
  for (std::size_t i = 1; i < a.inertia_history.size(); ++i) {
    CHECK(a.inertia_history[i] <= a.inertia_history[i - 1] * (1 + 1e-12));
  }
  for (long i = 0; i < a.k(); ++i)
    for (long j = i + 1; j < a.k(); ++j) CHECK((a.centers.row(i) - a.centers.row(j)).norm() > 0);
}

TEST_CASE("quantization agrees with a brute-force scan") {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(100, 4);
  for (long i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  auto cb = build_codebook(x, 1);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd s(4);
    for (long i = 0; i < 4; ++i) s[i] = 2 * g(rng);
    long best = 0;
    double best_d = 1e300;
    for (long c = 0; c < cb.k(); ++c) {
      double d = 0;
      for (long j = 0; j < 4; ++j) d += (s[j] - cb.centers(c, j)) * (s[j] - cb.centers(c, j));
      if (d < best_d) best_d = d, best = c;
    }
    CHECK(cb.quantize(s) == best);
  }
  CHECK_THROWS_AS(cb.quantize(Eigen::VectorXd::Zero(3)), actrec::ValidationError);
}

TEST_CASE("encode_bow one-hot, empty interval and layout sizes") {
  Codebook cb;
  cb.centers.resize(4, 2);
  cb.centers << 0, 0, 1, 0, 0, 1, 5, 5;
  CodebookBundle bundle{{cb}};
  std::vector<FrameDescriptor> frames{{Eigen::Vector2d(4.8, 5.1)}};
  auto h = encode_bow(frames, bundle);
  CHECK(h.values == Eigen::Vector4d(0, 0, 0, 1));
  CHECK(encode_bow(std::vector<FrameDescriptor>{}, bundle).values.isZero(0.0));
  std::vector<FrameDescriptor> wrong{{Eigen::Vector3d(1, 2, 3)}};
  CHECK_THROWS_AS(encode_bow(wrong, bundle), actrec::ValidationError);

  CHECK(bow_layout(PoseFeatureKind::kFft).total() == 1536);
  CHECK(bow_layout(PoseFeatureKind::kBm).total() == static_cast<std::size_t>(2 * kBmDim * 3));
  std::size_t per_length = 0;
  for (const auto& s : bm_sub_features()) per_length += 2 * s.dim;
  CHECK(per_length == 2 * kBmDim);
}

TEST_CASE("bundle built from tracks encodes normalized blocks and round-trips") {
  auto tracks = random_tracks(6, 400);
  const std::array<int, 1> lengths{20};
  std::vector<FrameDescriptor> frames;
  for (long f = 10; f < 390; ++f) frames.push_back(describe_frame(tracks, f, PoseFeatureKind::kFft, lengths));
  auto bundle = build_bundle(frames, PoseFeatureKind::kFft, 7, lengths);
  REQUIRE(bundle.blocks.size() == fft_sub_features().size());
  auto h = encode_bow(std::span(frames).subspan(0, 50), bundle);
  auto layout = bundle.layout();
  for (std::size_t b = 0; b < layout.num_blocks(); ++b) {
    double s = h.values.segment(static_cast<long>(layout.offset(b)), static_cast<long>(layout.sizes[b])).sum();
    CHECK(s == doctest::Approx(1.0));
  }
  CHECK((h.values.array() >= 0).all());

  auto path = fs::temp_directory_path() / "actrec_bundle.txt";
  bundle.save(path);
  auto back = CodebookBundle::load(path);
  REQUIRE(back.blocks.size() == bundle.blocks.size());
  for (std::size_t b = 0; b < back.blocks.size(); ++b) {
    CHECK(back.blocks[b].centers == bundle.blocks[b].centers);
    CHECK(back.blocks[b].sub_feature == bundle.blocks[b].sub_feature);
    CHECK(back.blocks[b].length == 20);
  }
  fs::remove(path);
}

TEST_CASE("joint track CSV") {
  auto tracks = random_tracks(8, 5, 17);
  auto path = fs::temp_directory_path() / "actrec_tracks.csv";
  tracks.save_csv(path);
  auto back = JointTrackSet::load_csv(path);
  CHECK(back.first_frame() == 17);
  CHECK(back.num_frames() == 5);
  CHECK(back.at(19, Part::kLeftHand).x == tracks.at(19, Part::kLeftHand).x);
  actrec::io::write_file(path, "frame,part,x,y\n0,head,1,2\n");
  CHECK_THROWS_AS(JointTrackSet::load_csv(path), actrec::ValidationError);
  fs::remove(path);
}
