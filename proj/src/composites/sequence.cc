#include "actrec/composites/sequence.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::composites {

Eigen::VectorXd seq_feature(const Eigen::MatrixXd& scores) {
  if (scores.rows() == 0 || scores.cols() == 0) throw ValidationError("seq_feature: empty score matrix");
  return scores.rowwise().maxCoeff();
}

Eigen::VectorXd seq_feature(const attributes::ScoreMatrix& scores) { return seq_feature(scores.values); }

void SequenceSet::add(const std::string& id, const Eigen::VectorXd& g, const std::string& composite) {
  if (features.rows() == 0) {
    features.resize(0, g.size());
  } else if (features.cols() != g.size()) {
    throw ValidationError("sequence " + id + ": feature length " + std::to_string(g.size()) + " != " +
                          std::to_string(features.cols()));
  }
  features.conservativeResize(features.rows() + 1, g.size());
  features.row(features.rows() - 1) = g.transpose();
  ids.push_back(id);
  composites.push_back(composite);
}

SequenceSet SequenceSet::subset(const std::vector<long>& rows) const {
  SequenceSet out;
  out.attributes = attributes;
  out.features.resize(static_cast<long>(rows.size()), features.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.features.row(static_cast<long>(r)) = features.row(rows[r]);
    out.ids.push_back(ids[rows[r]]);
    out.composites.push_back(composites[rows[r]]);
  }
  return out;
}

void SequenceSet::validate() const {
  if (features.rows() != size() || static_cast<long>(composites.size()) != size()) {
    throw ValidationError("sequence set: inconsistent sizes");
  }
  if (!attributes.empty() && features.rows() > 0 && static_cast<long>(attributes.size()) != features.cols()) {
    throw ValidationError("sequence set: feature length does not match attribute list");
  }
  if (!features.allFinite()) throw ValidationError("sequence set: non-finite feature");
}

long CompositeScores::predict_index(long row) const {
  long best = 0;
  for (long z = 1; z < values.cols(); ++z) {
    if (values(row, z) > values(row, best)) best = z;
  }
  return best;
}

void CompositeScores::save_csv(const std::filesystem::path& path) const {
  std::vector<long> rows(sequences.size());
  std::iota(rows.begin(), rows.end(), 0);
  std::stable_sort(rows.begin(), rows.end(), [&](long a, long b) { return sequences[a] < sequences[b]; });
  std::ostringstream out;
  out << "sequence,composite,score\n";
  for (long d : rows) {
    std::vector<long> cols(composites.size());
    std::iota(cols.begin(), cols.end(), 0);
    std::stable_sort(cols.begin(), cols.end(), [&](long a, long b) { return values(d, a) > values(d, b); });
    for (long z : cols) out << sequences[d] << ',' << composites[z] << ',' << csv::format_g9(values(d, z)) << '\n';
  }
  io::write_file(path, out.str());
}

CompositeScores CompositeScores::load_csv(const std::filesystem::path& path) {
  auto lines = io::read_lines(path);
  if (lines.empty() || io::trim(lines[0]) != "sequence,composite,score") {
    throw ValidationError(path.string() + ": expected header sequence,composite,score");
  }
  std::map<std::string, long> seq_index, comp_index;
  std::vector<std::tuple<long, long, double>> cells;
  CompositeScores out;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (io::trim(lines[l]).empty()) continue;
    auto f = csv::split(lines[l]);
    if (f.size() != 3) throw ValidationError(path.string() + ":" + std::to_string(l + 1) + ": expected 3 fields");
    auto [si, new_s] = seq_index.emplace(f[0], static_cast<long>(out.sequences.size()));
    if (new_s) out.sequences.push_back(f[0]);
    auto [ci, new_c] = comp_index.emplace(f[1], static_cast<long>(out.composites.size()));
    if (new_c) out.composites.push_back(f[1]);
    cells.emplace_back(si->second, ci->second, csv::parse_double(f[2], path.string()));
  }
  out.values = Eigen::MatrixXd::Constant(static_cast<long>(out.sequences.size()),
                                         static_cast<long>(out.composites.size()),
                                         -std::numeric_limits<double>::infinity());
  for (auto [s, c, v] : cells) out.values(s, c) = v;
  return out;
}

namespace {

std::vector<std::vector<int>> composite_labels(const SequenceSet& train, const std::vector<std::string>& composites) {
  std::vector<std::vector<int>> labels(train.ids.size());
  for (std::size_t d = 0; d < train.ids.size(); ++d) {
    auto it = std::find(composites.begin(), composites.end(), train.composites[d]);
    if (it == composites.end()) {
      throw ValidationError("training sequence " + train.ids[d] + " has unknown composite '" +
                            train.composites[d] + "'");
    }
    labels[d] = {static_cast<int>(it - composites.begin())};
  }
  return labels;
}

}  // namespace

CompositeScores classify_svm(const SequenceSet& train, const SequenceSet& test,
                             const std::vector<std::string>& composites, const attributes::TrainConfig& config) {
  train.validate();
  test.validate();
  if (train.size() == 0) throw ValidationError("classify_svm: no training sequences");
  auto models = attributes::train_linear_ova(train.features, composite_labels(train, composites), composites, config);
  auto s = attributes::score_intervals(models, test.features, test.ids);
  CompositeScores out;
  out.sequences = test.ids;
  out.composites = composites;
  out.values = s.values.transpose();
  out.flagged = models.skipped;
  return out;
}

NnMatch classify_nn(const SequenceSet& train, const Eigen::Ref<const Eigen::VectorXd>& g) {
  if (train.size() == 0) throw ValidationError("classify_nn: no training sequences");
  if (train.features.cols() != g.size()) throw ValidationError("classify_nn: feature length mismatch");
  NnMatch best;
  double best_sq = std::numeric_limits<double>::infinity();
  for (long d = 0; d < train.size(); ++d) {
    double sq = (train.features.row(d).transpose() - g).squaredNorm();
    if (sq < best_sq || (sq == best_sq && train.ids[d] < train.ids[best.index])) {
      best_sq = sq;
      best.index = d;
    }
  }
  best.composite = train.composites[best.index];
  best.distance = std::sqrt(best_sq);
  return best;
}

CompositeScores nn_scores(const SequenceSet& train, const SequenceSet& test,
                          const std::vector<std::string>& composites) {
  composite_labels(train, composites);  // validates labels
  if (train.features.cols() != test.features.cols()) throw ValidationError("nn_scores: feature length mismatch");
  const double inf = std::numeric_limits<double>::infinity();
  CompositeScores out;
  out.sequences = test.ids;
  out.composites = composites;
  out.values = Eigen::MatrixXd::Constant(test.size(), static_cast<long>(composites.size()), -inf);
  for (std::size_t z = 0; z < composites.size(); ++z) {
    if (std::find(train.composites.begin(), train.composites.end(), composites[z]) == train.composites.end()) {
      out.flagged.push_back(composites[z]);
    }
  }
  for (long t = 0; t < test.size(); ++t) {
    for (long d = 0; d < train.size(); ++d) {
      long z = std::find(composites.begin(), composites.end(), train.composites[d]) - composites.begin();
      double dist = (train.features.row(d) - test.features.row(t)).norm();
      out.values(t, z) = std::max(out.values(t, z), -dist);
    }
  }
  return out;
}

}  // namespace actrec::composites
