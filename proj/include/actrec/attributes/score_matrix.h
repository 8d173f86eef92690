#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace actrec::attributes {

// Attribute confidences S, one row per attribute and one column per interval.
struct ScoreMatrix {
  Eigen::MatrixXd values;                 // n x T
  std::vector<std::string> attributes;    // row labels, vocab order
  std::vector<std::string> interval_ids;  // column labels
  std::vector<bool> flagged_rows;         // rows filled with the floor value

  long num_attributes() const { return values.rows(); }
  long num_intervals() const { return values.cols(); }

  // Throws ValidationError on shape/label mismatch or non-finite entries.
  void validate() const;

  // CSV: header "attribute,<interval ids...>", one row per attribute.
  void save_csv(const std::filesystem::path& path) const;
  static ScoreMatrix load_csv(const std::filesystem::path& path);

  // Binary: "ACTSCOR1", u64 n, u64 T, u64 vocab hash, n*T little-endian
  // doubles row-major. Labels are not stored; load checks the hash.
  void save_binary(const std::filesystem::path& path, unsigned long long vocab_hash) const;
  static ScoreMatrix load_binary(const std::filesystem::path& path, const std::vector<std::string>& attributes,
                                 unsigned long long vocab_hash);
};

// Element-wise max over all columns except `t` (0-based). With a single column
// the result is `floor` in every entry.
Eigen::VectorXd context_feature(const Eigen::MatrixXd& scores, long t, double floor = -10.0);

// s_t with entry `i` (0-based) removed, order preserved.
Eigen::VectorXd cooccurrence_feature(const Eigen::Ref<const Eigen::VectorXd>& column, long i);

}  // namespace actrec::attributes
