#include "actrec/corpus/tokenize.h"

#include <cctype>

namespace actrec::corpus {

namespace {

bool is_stripped(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!':
    case '?': case '(': case ')': case '"': case '\'':
      return true;
    default:
      return false;
  }
}

}  // namespace

TokenList tokenize_document(std::string_view raw_text) {
  TokenList tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char c : raw_text) {
    unsigned char uc = static_cast<unsigned char>(c);
    if (std::isspace(uc) || c == '-') {
      flush();
    } else if (!is_stripped(c)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    }
  }
  flush();
  return tokens;
}

}  // namespace actrec::corpus
