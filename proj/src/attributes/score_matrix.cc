#include "actrec/attributes/score_matrix.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::attributes {

namespace {

constexpr char kMagic[8] = {'A', 'C', 'T', 'S', 'C', 'O', 'R', '1'};

static_assert(std::endian::native == std::endian::little, "binary score files assume a little-endian host");

}  // namespace

void ScoreMatrix::validate() const {
  if (static_cast<long>(attributes.size()) != values.rows() ||
      static_cast<long>(interval_ids.size()) != values.cols()) {
    throw ValidationError("score matrix labels do not match its " + std::to_string(values.rows()) + "x" +
                          std::to_string(values.cols()) + " shape");
  }
  if (values.cols() < 1) throw ValidationError("score matrix has no intervals");
  if (!values.allFinite()) throw ValidationError("score matrix has non-finite entries");
}

void ScoreMatrix::save_csv(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "attribute";
  for (const auto& id : interval_ids) out << ',' << id;
  out << '\n';
  for (long i = 0; i < values.rows(); ++i) {
    out << attributes[static_cast<std::size_t>(i)];
    for (long t = 0; t < values.cols(); ++t) out << ',' << csv::format_exact(values(i, t));
    out << '\n';
  }
  io::write_file(path, out.str());
}

ScoreMatrix ScoreMatrix::load_csv(const std::filesystem::path& path) {
  auto lines = io::read_lines(path);
  if (lines.empty()) throw ValidationError(path.string() + ": empty score file");
  auto header = csv::split(lines[0]);
  ScoreMatrix s;
  s.interval_ids.assign(header.begin() + 1, header.end());
  std::vector<std::vector<double>> rows;
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (io::trim(lines[l]).empty()) continue;
    auto f = csv::split(lines[l]);
    if (f.size() != header.size()) {
      throw ValidationError(path.string() + ":" + std::to_string(l + 1) + ": wrong column count");
    }
    s.attributes.push_back(f[0]);
    std::vector<double> row;
    for (std::size_t t = 1; t < f.size(); ++t) row.push_back(csv::parse_double(f[t], path.string()));
    rows.push_back(std::move(row));
  }
  s.values.resize(static_cast<long>(rows.size()), static_cast<long>(s.interval_ids.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t t = 0; t < rows[i].size(); ++t) s.values(i, t) = rows[i][t];
  s.flagged_rows.assign(rows.size(), false);
  s.validate();
  return s;
}

void ScoreMatrix::save_binary(const std::filesystem::path& path, unsigned long long vocab_hash) const {
  std::string buf(kMagic, sizeof(kMagic));
  auto put = [&](const void* p, std::size_t n) { buf.append(static_cast<const char*>(p), n); };
  std::uint64_t n = static_cast<std::uint64_t>(values.rows()), t = static_cast<std::uint64_t>(values.cols());
  std::uint64_t h = vocab_hash;
  put(&n, 8);
  put(&t, 8);
  put(&h, 8);
  for (long i = 0; i < values.rows(); ++i)
    for (long j = 0; j < values.cols(); ++j) {
      double v = values(i, j);
      put(&v, 8);
    }
  io::write_file(path, buf);
}

ScoreMatrix ScoreMatrix::load_binary(const std::filesystem::path& path, const std::vector<std::string>& attributes,
                                     unsigned long long vocab_hash) {
  std::string buf = io::read_file(path);
  if (buf.size() < 32 || std::memcmp(buf.data(), kMagic, 8) != 0) {
    throw ValidationError(path.string() + ": not a binary score matrix");
  }
  std::uint64_t n, t, h;
  std::memcpy(&n, buf.data() + 8, 8);
  std::memcpy(&t, buf.data() + 16, 8);
  std::memcpy(&h, buf.data() + 24, 8);
  if (h != vocab_hash) throw ValidationError(path.string() + ": vocabulary hash mismatch");
  if (n != attributes.size()) throw ValidationError(path.string() + ": attribute count mismatch");
  if (buf.size() != 32 + 8 * n * t) throw ValidationError(path.string() + ": truncated score matrix");
  ScoreMatrix s;
  s.values.resize(static_cast<long>(n), static_cast<long>(t));
  const char* p = buf.data() + 32;
  for (long i = 0; i < s.values.rows(); ++i)
    for (long j = 0; j < s.values.cols(); ++j, p += 8) std::memcpy(&s.values(i, j), p, 8);
  s.attributes = attributes;
  for (std::uint64_t j = 0; j < t; ++j) s.interval_ids.push_back(std::to_string(j));
  s.flagged_rows.assign(n, false);
  s.validate();
  return s;
}

Eigen::VectorXd context_feature(const Eigen::MatrixXd& scores, long t, double floor) {
  if (t < 0 || t >= scores.cols()) {
    throw ValidationError("context index " + std::to_string(t) + " outside [0, " + std::to_string(scores.cols()) + ")");
  }
  Eigen::VectorXd out = Eigen::VectorXd::Constant(scores.rows(), floor);
  bool any = false;
  for (long u = 0; u < scores.cols(); ++u) {
    if (u == t) continue;
    out = any ? out.cwiseMax(scores.col(u)) : Eigen::VectorXd(scores.col(u));
    any = true;
  }
  return out;
}

Eigen::VectorXd cooccurrence_feature(const Eigen::Ref<const Eigen::VectorXd>& column, long i) {
  const long n = column.size();
  if (i < 0 || i >= n) {
    throw ValidationError("attribute index " + std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
  }
  Eigen::VectorXd out(n - 1);
  out.head(i) = column.head(i);
  out.tail(n - 1 - i) = column.tail(n - 1 - i);
  return out;
}

}  // namespace actrec::attributes
