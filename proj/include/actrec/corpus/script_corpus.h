#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "actrec/corpus/tokenize.h"

namespace actrec::corpus {

struct ScriptSequence {
  std::vector<std::string> steps;
  std::vector<TokenList> tokenized;  // same shape as steps
};

// Step-by-step instruction sequences grouped by scenario (composite id).
class ScriptCorpus {
 public:
  // Tokenizes every step. Blank steps are dropped; a sequence that ends up
  // with no non-empty step throws ValidationError.
  void add_sequence(const std::string& scenario, const std::vector<std::string>& steps);

  const std::map<std::string, std::vector<ScriptSequence>>& scenarios() const { return scenarios_; }
  std::size_t num_sequences() const;

  // One sub-directory per scenario, one text file per sequence (read in file
  // name order), one step per line.
  static ScriptCorpus load(const std::filesystem::path& root);
  void save(const std::filesystem::path& root) const;

 private:
  std::map<std::string, std::vector<ScriptSequence>> scenarios_;
};

// Concatenates all steps of all sequences of a scenario, in order, into one
// document per composite.
std::map<std::string, TokenList> build_documents(const ScriptCorpus& corpus);

}  // namespace actrec::corpus
