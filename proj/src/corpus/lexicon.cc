#include "actrec/corpus/lexicon.h"

#include <algorithm>
#include <sstream>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::corpus {

namespace {

PartOfSpeech parse_pos(std::string_view s) {
  if (s == "verb") return PartOfSpeech::kVerb;
  if (s == "noun") return PartOfSpeech::kNoun;
  throw ValidationError("unknown part of speech '" + std::string(s) + "'");
}

std::string_view pos_name(PartOfSpeech pos) { return pos == PartOfSpeech::kVerb ? "verb" : "noun"; }

struct Occurrence {
  std::size_t begin;
  std::size_t end;  // exclusive
};

void collect(const std::vector<std::string>& pattern, const TokenList& tokens,
             std::vector<Occurrence>& out) {
  if (pattern.empty() || pattern.size() > tokens.size()) return;
  for (std::size_t p = 0; p + pattern.size() <= tokens.size(); ++p) {
    if (std::equal(pattern.begin(), pattern.end(), tokens.begin() + static_cast<long>(p))) {
      out.push_back({p, p + pattern.size()});
    }
  }
}

}  // namespace

void SynonymLexicon::add(std::string_view headword, PartOfSpeech pos,
                         const std::vector<std::string>& synonyms) {
  std::string head = normalize_label(headword);
  if (head.empty()) throw ValidationError("empty lexicon headword");
  auto key = std::make_pair(head, pos);
  if (rows_.count(key)) {
    throw ValidationError("duplicate lexicon headword '" + head + "' (" +
                          std::string(pos_name(pos)) + ")");
  }
  std::vector<std::string> syns;
  for (const auto& s : synonyms) {
    std::string norm = normalize_label(s);
    if (norm.empty() || norm == head) continue;
    if (std::find(syns.begin(), syns.end(), norm) == syns.end()) syns.push_back(std::move(norm));
  }
  rows_.emplace(std::move(key), std::move(syns));
}

const std::vector<std::string>& SynonymLexicon::synonyms(std::string_view headword,
                                                         PartOfSpeech pos) const {
  static const std::vector<std::string> kEmpty;
  auto it = rows_.find({normalize_label(headword), pos});
  return it == rows_.end() ? kEmpty : it->second;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& path) {
  SynonymLexicon lex;
  std::size_t lineno = 0;
  for (const auto& raw : io::read_lines(path)) {
    ++lineno;
    std::string line = io::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto fields = csv::split(line, '\t');
    if (fields.size() != 3) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected headword<TAB>pos<TAB>synonyms");
    }
    lex.add(fields[0], parse_pos(io::trim(fields[1])), csv::split(fields[2], ','));
  }
  return lex;
}

void SynonymLexicon::save(const std::filesystem::path& path) const {
  std::ostringstream out;
  for (const auto& [key, syns] : rows_) {
    out << key.first << '\t' << pos_name(key.second) << '\t' << csv::join(syns, ',') << '\n';
  }
  io::write_file(path, out.str());
}

PartOfSpeech pos_for_kind(AttributeKind kind) {
  return kind == AttributeKind::kActivity ? PartOfSpeech::kVerb : PartOfSpeech::kNoun;
}

MatchMode parse_match_mode(std::string_view name) {
  if (name == "literal") return MatchMode::kLiteral;
  if (name == "synonym" || name == "wordnet") return MatchMode::kSynonym;
  throw ValidationError("unknown match mode '" + std::string(name) + "'");
}

std::size_t match_count(const std::vector<std::string>& label_tokens, AttributeKind kind,
                        const TokenList& tokens, const SynonymLexicon& lexicon, MatchMode mode) {
  std::vector<Occurrence> occ;
  collect(label_tokens, tokens, occ);
  if (mode == MatchMode::kSynonym) {
    std::string label = csv::join(label_tokens, ' ');
    for (const auto& syn : lexicon.synonyms(label, pos_for_kind(kind))) {
      collect(csv::split(syn, ' '), tokens, occ);
    }
  }
  std::sort(occ.begin(), occ.end(), [](const Occurrence& a, const Occurrence& b) {
    return a.end != b.end ? a.end < b.end : a.begin < b.begin;
  });
  std::size_t count = 0;
  std::size_t free_from = 0;
  for (const auto& o : occ) {
    if (o.begin >= free_from) {
      ++count;
      free_from = o.end;
    }
  }
  return count;
}

std::size_t match_count(const AttributeVocab& vocab, std::size_t i, const TokenList& tokens,
                        const SynonymLexicon& lexicon, MatchMode mode) {
  return match_count(vocab.label_tokens(i), vocab[i].kind, tokens, lexicon, mode);
}

}  // namespace actrec::corpus
