#include "actrec/corpus/weights.h"

#include <cmath>
#include <sstream>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::corpus {

long WeightMatrix::row_of(const std::string& composite) const {
  for (std::size_t z = 0; z < row_labels.size(); ++z) {
    if (row_labels[z] == composite) return static_cast<long>(z);
  }
  return -1;
}

std::vector<std::string> WeightMatrix::empty_row_ids() const {
  std::vector<std::string> out;
  for (std::size_t z = 0; z < empty_rows.size(); ++z) {
    if (empty_rows[z]) out.push_back(row_labels[z]);
  }
  return out;
}

void WeightMatrix::save_csv(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "composite";
  for (const auto& c : col_labels) out << ',' << c;
  out << '\n';
  for (std::size_t z = 0; z < rows(); ++z) {
    out << row_labels[z];
    for (std::size_t i = 0; i < cols(); ++i) out << ',' << csv::format_g9(values(z, i));
    out << '\n';
  }
  io::write_file(path, out.str());
}

WeightMatrix WeightMatrix::load_csv(const std::filesystem::path& path) {
  auto lines = io::read_lines(path);
  if (lines.empty()) throw ValidationError(path.string() + ": empty weight file");
  auto header = csv::split(lines[0]);
  if (header.size() < 2) throw ValidationError(path.string() + ": header needs attribute columns");
  WeightMatrix w;
  w.col_labels.assign(header.begin() + 1, header.end());
  std::vector<std::vector<double>> rows;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (io::trim(lines[l]).empty()) continue;
    auto fields = csv::split(lines[l]);
    if (fields.size() != header.size()) {
      throw ValidationError(path.string() + ":" + std::to_string(l + 1) + ": wrong column count");
    }
    w.row_labels.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      row.push_back(csv::parse_double(fields[i], path.string() + ":" + std::to_string(l + 1)));
    }
    rows.push_back(std::move(row));
  }
  w.values.resize(static_cast<long>(rows.size()), static_cast<long>(w.col_labels.size()));
  for (std::size_t z = 0; z < rows.size(); ++z) {
    for (std::size_t i = 0; i < rows[z].size(); ++i) w.values(z, i) = rows[z][i];
  }
  check_weights(w);
  w.empty_rows.assign(w.rows(), false);
  bool normalized = w.rows() > 0;
  for (std::size_t z = 0; z < w.rows(); ++z) {
    double s = w.values.row(z).sum();
    if (s == 0.0) {
      w.empty_rows[z] = true;
    } else if (std::abs(s - 1.0) > 1e-6) {
      normalized = false;
    }
  }
  w.normalized = normalized;
  return w;
}

namespace {

WeightMatrix empty_like(const DocumentSet& documents, const AttributeVocab& vocab) {
  WeightMatrix w;
  w.values = Eigen::MatrixXd::Zero(static_cast<long>(documents.size()), static_cast<long>(vocab.size()));
  for (const auto& [id, doc] : documents) w.row_labels.push_back(id);
  w.col_labels = vocab.labels();
  w.empty_rows.assign(documents.size(), false);
  return w;
}

}  // namespace

WeightMatrix freq_weights(const DocumentSet& documents, const AttributeVocab& vocab,
                          const SynonymLexicon& lexicon, MatchMode mode) {
  WeightMatrix w = empty_like(documents, vocab);
  long z = 0;
  for (const auto& [id, doc] : documents) {
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      w.values(z, static_cast<long>(i)) = static_cast<double>(match_count(vocab, i, doc, lexicon, mode));
    }
    ++z;
  }
  return w;
}

WeightMatrix tfidf_weights(const DocumentSet& documents, const AttributeVocab& vocab,
                           const SynonymLexicon& lexicon, MatchMode mode) {
  if (documents.empty()) throw ValidationError("tf*idf needs at least one document");
  WeightMatrix w = freq_weights(documents, vocab, lexicon, mode);
  const double num_docs = static_cast<double>(documents.size());
  for (long i = 0; i < w.values.cols(); ++i) {
    long df = (w.values.col(i).array() > 0.0).count();
    double idf = df == 0 ? 0.0 : std::log(num_docs / static_cast<double>(df));
    w.values.col(i) *= idf;
  }
  return w;
}

WeightMatrix normalize_l1(const WeightMatrix& w) {
  check_weights(w);
  WeightMatrix out = w;
  out.empty_rows.assign(w.rows(), false);
  for (long z = 0; z < out.values.rows(); ++z) {
    double s = out.values.row(z).sum();
    if (s > 0.0) {
      out.values.row(z) /= s;
    } else {
      out.empty_rows[static_cast<std::size_t>(z)] = true;
    }
  }
  out.normalized = true;
  return out;
}

WeightMatrix binarize_weights(const WeightMatrix& w) {
  check_weights(w);
  WeightMatrix bin = w;
  bin.values = (w.values.array() != 0.0).cast<double>().matrix();
  return normalize_l1(bin);
}

void check_weights(const WeightMatrix& w) {
  if (w.row_labels.size() != w.rows() || w.col_labels.size() != w.cols()) {
    throw ValidationError("weight matrix labels do not match its shape");
  }
  if (!w.values.allFinite() || (w.values.array() < 0.0).any()) {
    throw ValidationError("weight matrix has negative or non-finite entries");
  }
}

}  // namespace actrec::corpus
