#include "actrec/common/csv.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>

#include "actrec/common/error.h"

namespace actrec::csv {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    std::size_t pos = line.find(sep, begin);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(begin));
      break;
    }
    out.emplace_back(line.substr(begin, pos - begin));
    begin = pos + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& fields, char sep) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(sep);
    out += fields[i];
  }
  return out;
}

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string format_exact(double v) {
  char buf[64];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

double parse_double(const std::string& s, const std::string& context) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ValidationError(context + ": not a number: '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const std::string& context) {
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(begin, &end, 10);
  while (end && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw ValidationError(context + ": not an integer: '" + s + "'");
  }
  return v;
}

}  // namespace actrec::csv
