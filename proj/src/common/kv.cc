#include "actrec/common/kv.h"

#include <algorithm>
#include <sstream>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::kv {

KeyValues KeyValues::parse(const std::string& text, const std::string& source) {
  KeyValues out;
  out.source_ = source;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string body = io::trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(source + ":" + std::to_string(number) + ": expected key = value");
    }
    std::string key = io::trim(body.substr(0, eq));
    if (key.empty()) throw ValidationError(source + ":" + std::to_string(number) + ": empty key");
    out.values_[key] = io::trim(body.substr(eq + 1));
  }
  return out;
}

KeyValues KeyValues::load(const std::filesystem::path& path) {
  return parse(io::read_file(path), path.string());
}

std::optional<std::string> KeyValues::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  return v ? csv::parse_double(*v, source_ + ": " + key) : fallback;
}

long long KeyValues::get_int(const std::string& key, long long fallback) const {
  auto v = get(key);
  return v ? csv::parse_int(*v, source_ + ": " + key) : fallback;
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ValidationError(source_ + ": " + key + ": expected a boolean, got '" + *v + "'");
}

std::vector<double> KeyValues::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::vector<double> out;
  for (const auto& f : csv::split(*v)) out.push_back(csv::parse_double(io::trim(f), source_ + ": " + key));
  return out;
}

std::vector<std::string> KeyValues::get_strings(const std::string& key,
                                                const std::vector<std::string>& fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::vector<std::string> out;
  for (const auto& f : csv::split(*v)) {
    auto t = io::trim(f);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::string KeyValues::to_string() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::vector<std::string> KeyValues::unknown_keys(const std::vector<std::string>& known) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_) {
    if (std::find(known.begin(), known.end(), k) == known.end()) out.push_back(k);
  }
  return out;
}

}  // namespace actrec::kv
