#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace actrec::corpus {

using TokenList = std::vector<std::string>;

// Lowercases, removes the punctuation characters . , ; : ! ? ( ) " ' and
// splits on whitespace and hyphens. Empty tokens never appear in the output.
TokenList tokenize_document(std::string_view raw_text);

}  // namespace actrec::corpus
