#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "actrec/corpus/lexicon.h"
#include "actrec/corpus/tokenize.h"
#include "actrec/corpus/vocab.h"

namespace actrec::corpus {

// Composite-to-attribute association weights, Z rows x n columns.
struct WeightMatrix {
  Eigen::MatrixXd values;
  std::vector<std::string> row_labels;  // composite ids
  std::vector<std::string> col_labels;  // attribute labels, vocab order
  bool normalized = false;
  std::vector<bool> empty_rows;  // set by normalize_l1 / binarize_weights

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
  long row_of(const std::string& composite) const;
  std::vector<std::string> empty_row_ids() const;

  // CSV: header "composite,<label>,...", one row per composite, %.9g values.
  void save_csv(const std::filesystem::path& path) const;
  static WeightMatrix load_csv(const std::filesystem::path& path);
};

using DocumentSet = std::map<std::string, TokenList>;

// values[z][i] = match_count(a_i, doc_z).
WeightMatrix freq_weights(const DocumentSet& documents, const AttributeVocab& vocab,
                          const SynonymLexicon& lexicon, MatchMode mode);

// values[z][i] = freq(a_i, doc_z) * ln(|D| / df_i), 0 when df_i = 0.
WeightMatrix tfidf_weights(const DocumentSet& documents, const AttributeVocab& vocab,
                           const SynonymLexicon& lexicon, MatchMode mode);

// Divides each row by its sum. All-zero rows stay zero and are flagged in
// empty_rows (inspect empty_row_ids() to report them).
WeightMatrix normalize_l1(const WeightMatrix& w);

// Non-zero entries become 1, then rows are L1-normalized.
WeightMatrix binarize_weights(const WeightMatrix& w);

// Throws ValidationError when any entry is negative or non-finite.
void check_weights(const WeightMatrix& w);

}  // namespace actrec::corpus
