#include "actrec/harness/bundle_io.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::harness {

namespace fs = std::filesystem;

std::vector<IntervalAnnotation> load_annotations(const fs::path& path) {
  std::vector<IntervalAnnotation> out;
  auto lines = io::read_lines(path);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    if (io::trim(lines[l]).empty()) continue;
    std::string where = path.string() + ":" + std::to_string(l + 1);
    try {
      auto j = nlohmann::json::parse(lines[l]);
      IntervalAnnotation a;
      a.video = j.at("video").get<std::string>();
      a.start_frame = j.at("start_frame").get<long>();
      a.end_frame = j.at("end_frame").get<long>();
      a.attributes = j.at("attributes").get<std::vector<std::string>>();
      a.composite = j.value("composite", std::string());
      if (a.start_frame < 0 || a.end_frame < a.start_frame) throw ValidationError(where + ": invalid frame range");
      out.push_back(std::move(a));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  return out;
}

void save_annotations(const fs::path& path, const std::vector<IntervalAnnotation>& annotations) {
  std::ostringstream out;
  for (const auto& a : annotations) {
    nlohmann::json j{{"video", a.video},
                     {"start_frame", a.start_frame},
                     {"end_frame", a.end_frame},
                     {"attributes", a.attributes},
                     {"composite", a.composite}};
    out << j.dump() << '\n';
  }
  io::write_file(path, out.str());
}

std::vector<std::string> Bundle::composites() const {
  std::set<std::string> s;
  for (const auto& v : videos) s.insert(v.composite);
  return {s.begin(), s.end()};
}

std::vector<std::string> Bundle::videos_in(const std::string& split) const {
  std::vector<std::string> out;
  for (const auto& v : videos) {
    if (v.split == split) out.push_back(v.id);
  }
  return out;
}

std::vector<IntervalAnnotation> Bundle::annotations_of(const std::string& id) const {
  std::vector<IntervalAnnotation> out;
  for (const auto& a : annotations) {
    if (a.video == id) out.push_back(a);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.start_frame < b.start_frame; });
  return out;
}

const VideoRecord& Bundle::video(const std::string& id) const {
  for (const auto& v : videos) {
    if (v.id == id) return v;
  }
  throw ValidationError("unknown video '" + id + "'");
}

void save_bundle(const fs::path& dir, const Bundle& b) {
  fs::create_directories(dir);
  b.vocab.save(dir / "vocab.tsv");
  b.lexicon.save(dir / "lexicon.tsv");
  b.scripts.save(dir / "scripts");
  if (b.planted.rows() > 0) b.planted.save_csv(dir / "planted_weights.csv");
  save_annotations(dir / "annotations.jsonl", b.annotations);
  std::ostringstream split;
  split << "video\tcomposite\tsplit\tframes\n";
  for (const auto& v : b.videos) split << v.id << '\t' << v.composite << '\t' << v.split << '\t' << v.num_frames << '\n';
  io::write_file(dir / "split.tsv", split.str());
  for (const auto& [id, s] : b.scores) s.save_csv(dir / "scores" / (id + ".csv"));
  for (const auto& [id, f] : b.frames) {
    std::string text;
    for (long w : f) text += std::to_string(w) + '\n';
    io::write_file(dir / "frames" / (id + ".txt"), text);
  }
  kv::KeyValues meta = b.meta;
  meta.set("num_words", std::to_string(b.num_words));
  meta.set("representation", b.has_frames() ? "frames" : "scores");
  io::write_file(dir / "bundle.conf", meta.to_string());
}

Bundle load_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ValidationError("bundle directory not found: " + dir.string());
  Bundle b;
  b.meta = kv::KeyValues::load(dir / "bundle.conf");
  b.num_words = b.meta.get_int("num_words", 0);
  b.vocab = corpus::AttributeVocab::load(dir / "vocab.tsv");
  if (fs::exists(dir / "lexicon.tsv")) b.lexicon = corpus::SynonymLexicon::load(dir / "lexicon.tsv");
  if (fs::exists(dir / "scripts")) b.scripts = corpus::ScriptCorpus::load(dir / "scripts");
  if (fs::exists(dir / "planted_weights.csv")) b.planted = corpus::WeightMatrix::load_csv(dir / "planted_weights.csv");
  b.annotations = load_annotations(dir / "annotations.jsonl");
  auto lines = io::read_lines(dir / "split.tsv");
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (io::trim(lines[l]).empty()) continue;
    auto f = csv::split(lines[l], '\t');
    std::string where = (dir / "split.tsv").string() + ":" + std::to_string(l + 1);
    if (f.size() != 4) throw ValidationError(where + ": expected video, composite, split, frames");
    if (f[2] != "train" && f[2] != "val" && f[2] != "test") throw ValidationError(where + ": unknown split '" + f[2] + "'");
    b.videos.push_back({f[0], f[1], f[2], csv::parse_int(f[3], where)});
  }
  const std::string rep = b.meta.get_string("representation", "scores");
  for (const auto& v : b.videos) {
    if (rep == "scores") {
      auto s = attributes::ScoreMatrix::load_csv(dir / "scores" / (v.id + ".csv"));
      if (s.attributes != b.vocab.labels()) throw ValidationError("scores of " + v.id + " do not follow the vocabulary");
      b.scores.emplace(v.id, std::move(s));
    } else if (rep == "frames") {
      std::vector<long> f;
      auto path = dir / "frames" / (v.id + ".txt");
      for (const auto& line : io::read_lines(path)) {
        if (io::trim(line).empty()) continue;
        long w = csv::parse_int(io::trim(line), path.string());
        if (w < -1 || w >= b.num_words) throw ValidationError(path.string() + ": codeword out of range");
        f.push_back(w);
      }
      b.frames.emplace(v.id, std::move(f));
    } else {
      throw ValidationError("bundle.conf: unknown representation '" + rep + "'");
    }
  }
  for (const auto& a : b.annotations) {
    for (const auto& l : a.attributes) {
      if (b.vocab.find(l) < 0) throw ValidationError("annotation of " + a.video + " uses unknown attribute '" + l + "'");
    }
  }
  return b;
}

}  // namespace actrec::harness
