#include "actrec/corpus/vocab.h"

#include <cctype>
#include <sstream>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::corpus {

std::string_view kind_name(AttributeKind kind) {
  return kind == AttributeKind::kActivity ? "activity" : "object";
}

AttributeKind parse_kind(std::string_view name) {
  if (name == "activity") return AttributeKind::kActivity;
  if (name == "object") return AttributeKind::kObject;
  throw ValidationError("unknown attribute kind '" + std::string(name) + "'");
}

std::string normalize_label(std::string_view raw) {
  std::string out;
  bool pending_space = false;
  for (char c : raw) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (c == '-' || std::isspace(uc)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(uc)));
  }
  return out;
}

std::size_t AttributeVocab::add(std::string_view label, AttributeKind kind) {
  std::string norm = normalize_label(label);
  if (norm.empty()) throw ValidationError("empty attribute label");
  if (index_.count(norm)) throw ValidationError("duplicate attribute label '" + norm + "'");
  index_.emplace(norm, entries_.size());
  entries_.push_back({std::move(norm), kind});
  return entries_.size() - 1;
}

long AttributeVocab::find(std::string_view label) const {
  auto it = index_.find(normalize_label(label));
  return it == index_.end() ? -1 : static_cast<long>(it->second);
}

std::vector<std::string> AttributeVocab::labels() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.label);
  return out;
}

std::vector<std::string> AttributeVocab::label_tokens(std::size_t i) const {
  return csv::split(entries_.at(i).label, ' ');
}

unsigned long long AttributeVocab::hash() const {
  std::string joined;
  for (const auto& e : entries_) {
    joined += e.label;
    joined.push_back('\n');
  }
  return io::fnv1a64(joined);
}

AttributeVocab AttributeVocab::load(const std::filesystem::path& path) {
  AttributeVocab vocab;
  std::size_t lineno = 0;
  for (const auto& raw : io::read_lines(path)) {
    ++lineno;
    std::string line = io::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto fields = csv::split(line, '\t');
    if (fields.size() != 2) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected label<TAB>kind");
    }
    vocab.add(fields[0], parse_kind(io::trim(fields[1])));
  }
  return vocab;
}

void AttributeVocab::save(const std::filesystem::path& path) const {
  std::ostringstream out;
  for (const auto& e : entries_) out << e.label << '\t' << kind_name(e.kind) << '\n';
  io::write_file(path, out.str());
}

}  // namespace actrec::corpus
