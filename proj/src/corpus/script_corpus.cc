#include "actrec/corpus/script_corpus.h"

#include <algorithm>
#include <cstdio>

#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace fs = std::filesystem;

namespace actrec::corpus {

void ScriptCorpus::add_sequence(const std::string& scenario, const std::vector<std::string>& steps) {
  if (scenario.empty()) throw ValidationError("empty scenario id");
  ScriptSequence seq;
  for (const auto& step : steps) {
    TokenList tokens = tokenize_document(step);
    if (tokens.empty()) continue;
    seq.steps.push_back(io::trim(step));
    seq.tokenized.push_back(std::move(tokens));
  }
  if (seq.steps.empty()) {
    throw ValidationError("scenario '" + scenario + "': sequence has no non-empty step");
  }
  scenarios_[scenario].push_back(std::move(seq));
}

std::size_t ScriptCorpus::num_sequences() const {
  std::size_t n = 0;
  for (const auto& [id, seqs] : scenarios_) n += seqs.size();
  return n;
}

ScriptCorpus ScriptCorpus::load(const fs::path& root) {
  if (!fs::is_directory(root)) throw ValidationError("script corpus is not a directory: " + root.string());
  std::vector<fs::path> scenario_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) scenario_dirs.push_back(entry.path());
  }
  std::sort(scenario_dirs.begin(), scenario_dirs.end());
  ScriptCorpus corpus;
  for (const auto& dir : scenario_dirs) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) corpus.add_sequence(dir.filename().string(), io::read_lines(f));
  }
  if (corpus.scenarios_.empty()) throw ValidationError("script corpus is empty: " + root.string());
  return corpus;
}

void ScriptCorpus::save(const fs::path& root) const {
  for (const auto& [id, seqs] : scenarios_) {
    for (std::size_t s = 0; s < seqs.size(); ++s) {
      char name[32];
      std::snprintf(name, sizeof(name), "seq%04zu.txt", s);
      std::string body;
      for (const auto& step : seqs[s].steps) body += step + "\n";
      io::write_file(root / id / name, body);
    }
  }
}

std::map<std::string, TokenList> build_documents(const ScriptCorpus& corpus) {
  std::map<std::string, TokenList> docs;
  for (const auto& [id, seqs] : corpus.scenarios()) {
    TokenList& doc = docs[id];
    for (const auto& seq : seqs) {
      for (const auto& step : seq.tokenized) doc.insert(doc.end(), step.begin(), step.end());
    }
  }
  return docs;
}

}  // namespace actrec::corpus
