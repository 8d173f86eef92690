#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "actrec/corpus/tokenize.h"
#include "actrec/corpus/vocab.h"

namespace actrec::corpus {

enum class PartOfSpeech { kVerb, kNoun };

// Synonym table keyed by (headword, part of speech). Stands in for a WordNet
// synset lookup: verbs pair with activity attributes, nouns with objects.
class SynonymLexicon {
 public:
  // Headword and synonyms are normalized like attribute labels. Duplicate
  // synonyms are dropped; a repeated (headword, pos) throws ValidationError.
  void add(std::string_view headword, PartOfSpeech pos, const std::vector<std::string>& synonyms);

  // Empty when the headword is unknown for that part of speech.
  const std::vector<std::string>& synonyms(std::string_view headword, PartOfSpeech pos) const;

  std::size_t size() const { return rows_.size(); }

  // TSV: headword<TAB>verb|noun<TAB>syn1,syn2,...
  static SynonymLexicon load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::map<std::pair<std::string, PartOfSpeech>, std::vector<std::string>> rows_;
};

PartOfSpeech pos_for_kind(AttributeKind kind);

enum class MatchMode { kLiteral, kSynonym };

MatchMode parse_match_mode(std::string_view name);

// Counts occurrences of an attribute label in a token list.
//
// Every pattern (the label, plus same-POS synonyms in synonym mode) is a
// contiguous token n-gram. All occurrences are collected and a maximum set of
// pairwise disjoint occurrences is chosen greedily by earliest end position,
// so each token position is counted at most once. With a single pattern this
// is the usual left-to-right non-overlapping count.
std::size_t match_count(const std::vector<std::string>& label_tokens, AttributeKind kind,
                        const TokenList& tokens, const SynonymLexicon& lexicon, MatchMode mode);

// Convenience overload for vocab entry `i`.
std::size_t match_count(const AttributeVocab& vocab, std::size_t i, const TokenList& tokens,
                        const SynonymLexicon& lexicon, MatchMode mode);

}  // namespace actrec::corpus
