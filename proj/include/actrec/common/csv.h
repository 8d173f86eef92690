#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace actrec::csv {

// Splits one CSV line on `sep`. No quoting support; none of our formats need it.
std::vector<std::string> split(std::string_view line, char sep = ',');

std::string join(const std::vector<std::string>& fields, char sep = ',');

// "%.9g"-style formatting used by every exported matrix.
std::string format_g9(double v);

// Full round-trip precision for model/codebook files.
std::string format_exact(double v);

double parse_double(const std::string& s, const std::string& context);
long long parse_int(const std::string& s, const std::string& context);

}  // namespace actrec::csv
