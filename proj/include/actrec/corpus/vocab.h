#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace actrec::corpus {

enum class AttributeKind { kActivity, kObject };

std::string_view kind_name(AttributeKind kind);
AttributeKind parse_kind(std::string_view name);

// Lowercase, hyphens become spaces, runs of whitespace collapse to one space,
// leading/trailing whitespace dropped. "Cutting-Board" -> "cutting board".
std::string normalize_label(std::string_view raw);

struct Attribute {
  std::string label;  // normalized
  AttributeKind kind;
};

// Ordered attribute vocabulary: fine-grained activities and their participant
// objects share one index space.
class AttributeVocab {
 public:
  AttributeVocab() = default;

  // Returns the new index. Throws ValidationError on a duplicate label.
  std::size_t add(std::string_view label, AttributeKind kind);

  std::size_t size() const { return entries_.size(); }
  const Attribute& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Attribute>& entries() const { return entries_; }

  // -1 when absent. `label` is normalized before lookup.
  long find(std::string_view label) const;
  std::vector<std::string> labels() const;

  // Label split on spaces; multi-word labels match as n-grams.
  std::vector<std::string> label_tokens(std::size_t i) const;

  // Fingerprint of the ordered label list.
  unsigned long long hash() const;

  // TSV: label<TAB>activity|object, one per line; '#' lines are comments.
  static AttributeVocab load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::vector<Attribute> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace actrec::corpus
