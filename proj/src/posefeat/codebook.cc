#include "actrec/posefeat/codebook.h"

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::posefeat {

namespace {

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

long count_distinct_rows(const Eigen::MatrixXd& m, long stop_at) {
  std::set<std::vector<double>> seen;
  for (long r = 0; r < m.rows() && static_cast<long>(seen.size()) < stop_at; ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (long c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
    seen.insert(std::move(row));
  }
  return static_cast<long>(seen.size());
}

// Squared distance to nearest center and its index, ties to lowest index.
std::pair<long, double> nearest(const Eigen::MatrixXd& centers, const Eigen::Ref<const Eigen::RowVectorXd>& x) {
  long best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (long c = 0; c < centers.rows(); ++c) {
    double d = (centers.row(c) - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return {best, best_d};
}

}  // namespace

long Codebook::quantize(const Eigen::Ref<const Eigen::VectorXd>& sample) const {
  if (sample.size() != dim()) {
    throw ValidationError("codebook '" + sub_feature + "' expects dimension " + std::to_string(dim()) +
                          ", got " + std::to_string(sample.size()));
  }
  return nearest(centers, sample.transpose()).first;
}

Codebook kmeans(const Eigen::MatrixXd& samples, long k, std::uint64_t seed, const KMeansOptions& options) {
  const long m = samples.rows();
  if (k < 1) throw ValidationError("k-means needs k >= 1");
  if (m < k) {
    throw ValidationError("k-means with k = " + std::to_string(k) + " needs at least k samples, got " +
                          std::to_string(m));
  }
  if (!samples.allFinite()) throw ValidationError("k-means samples contain non-finite values");
  if (count_distinct_rows(samples, k) < k) {
    throw ValidationError("k-means with k = " + std::to_string(k) + " needs at least k distinct samples");
  }

  std::mt19937_64 rng(seed);
  Codebook cb;
  cb.seed = seed;
  cb.centers.resize(k, samples.cols());

  // k-means++ seeding.
  Eigen::VectorXd d2(m);
  long first = static_cast<long>(unit_uniform(rng) * static_cast<double>(m));
  cb.centers.row(0) = samples.row(std::min(first, m - 1));
  for (long i = 0; i < m; ++i) d2[i] = (samples.row(i) - cb.centers.row(0)).squaredNorm();
  for (long c = 1; c < k; ++c) {
    double total = d2.sum();
    double target = unit_uniform(rng) * total;
    long pick = -1;
    double acc = 0.0;
    for (long i = 0; i < m; ++i) {
      if (d2[i] <= 0.0) continue;
      acc += d2[i];
      pick = i;
      if (acc > target) break;
    }
    cb.centers.row(c) = samples.row(pick);
    for (long i = 0; i < m; ++i) d2[i] = std::min(d2[i], (samples.row(i) - cb.centers.row(c)).squaredNorm());
  }

  std::vector<long> assign(static_cast<std::size_t>(m));
  Eigen::VectorXd dist(m);
  auto assign_all = [&] {
    double inertia = 0.0;
    for (long i = 0; i < m; ++i) {
      auto [c, d] = nearest(cb.centers, samples.row(i));
      assign[static_cast<std::size_t>(i)] = c;
      dist[i] = d;
      inertia += d;
    }
    cb.inertia_history.push_back(inertia);
    return inertia;
  };

  double inertia = assign_all();
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, samples.cols());
    std::vector<long> counts(static_cast<std::size_t>(k), 0);
    for (long i = 0; i < m; ++i) {
      sums.row(assign[static_cast<std::size_t>(i)]) += samples.row(i);
      ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
    }
    for (long c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        cb.centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
    }
    for (long i = 0; i < m; ++i) dist[i] = (samples.row(i) - cb.centers.row(assign[static_cast<std::size_t>(i)])).squaredNorm();
    for (long c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      long far = 0;
      dist.maxCoeff(&far);
      cb.centers.row(c) = samples.row(far);
      for (long i = 0; i < m; ++i) dist[i] = std::min(dist[i], (samples.row(i) - cb.centers.row(c)).squaredNorm());
    }
    double next = assign_all();
    bool converged = inertia <= 0.0 || (inertia - next) / inertia < options.relative_tolerance;
    inertia = next;
    if (converged) break;
  }
  return cb;
}

Codebook build_codebook(const Eigen::MatrixXd& samples, std::uint64_t seed, const std::string& sub_feature,
                        int length, const KMeansOptions& options) {
  if (samples.cols() < 1) throw ValidationError("codebook samples have zero dimension");
  Codebook cb = kmeans(samples, 2 * samples.cols(), seed, options);
  cb.sub_feature = sub_feature;
  cb.length = length;
  return cb;
}

BlockLayout CodebookBundle::layout() const {
  BlockLayout l;
  for (const auto& b : blocks) l.sizes.push_back(static_cast<std::size_t>(b.k()));
  return l;
}

void CodebookBundle::save(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "codebook-bundle 1\n";
  out << "blocks " << blocks.size() << '\n';
  for (const auto& b : blocks) {
    out << "block " << b.length << ' ' << (b.sub_feature.empty() ? "-" : b.sub_feature) << ' ' << b.dim()
        << ' ' << b.k() << ' ' << b.seed << '\n';
    for (long r = 0; r < b.k(); ++r) {
      for (long c = 0; c < b.dim(); ++c) out << (c ? "," : "") << csv::format_exact(b.centers(r, c));
      out << '\n';
    }
  }
  io::write_file(path, out.str());
}

CodebookBundle CodebookBundle::load(const std::filesystem::path& path) {
  auto lines = io::read_lines(path);
  std::size_t pos = 0;
  auto next = [&]() -> const std::string& {
    if (pos >= lines.size()) throw ValidationError(path.string() + ": truncated codebook bundle");
    return lines[pos++];
  };
  if (io::trim(next()) != "codebook-bundle 1") throw ValidationError(path.string() + ": not a codebook bundle");
  std::istringstream hdr(next());
  std::string word;
  std::size_t count = 0;
  if (!(hdr >> word >> count) || word != "blocks") throw ValidationError(path.string() + ": missing block count");
  CodebookBundle bundle;
  for (std::size_t b = 0; b < count; ++b) {
    std::istringstream bh(next());
    Codebook cb;
    long dim = 0, k = 0;
    if (!(bh >> word >> cb.length >> cb.sub_feature >> dim >> k >> cb.seed) || word != "block" || dim < 1 || k < 1) {
      throw ValidationError(path.string() + ":" + std::to_string(pos) + ": bad block header");
    }
    if (cb.sub_feature == "-") cb.sub_feature.clear();
    cb.centers.resize(k, dim);
    for (long r = 0; r < k; ++r) {
      auto fields = csv::split(next());
      if (static_cast<long>(fields.size()) != dim) {
        throw ValidationError(path.string() + ":" + std::to_string(pos) + ": wrong center dimension");
      }
      for (long c = 0; c < dim; ++c) {
        cb.centers(r, c) = csv::parse_double(fields[static_cast<std::size_t>(c)], path.string());
      }
    }
    bundle.blocks.push_back(std::move(cb));
  }
  return bundle;
}

}  // namespace actrec::posefeat
