#include "actrec/posefeat/joint_tracks.h"

#include <cmath>
#include <map>
#include <sstream>

#include "actrec/common/csv.h"
#include "actrec/common/error.h"
#include "actrec/common/text_io.h"

namespace actrec::posefeat {

namespace {

constexpr std::array<std::string_view, kNumParts> kPartNames{
    "head",      "torso",      "r_shoulder", "l_shoulder", "r_elbow",
    "l_elbow",   "r_wrist",    "l_wrist",    "r_hand",     "l_hand"};

}  // namespace

std::string_view part_name(Part p) { return kPartNames[static_cast<std::size_t>(p)]; }

Part parse_part(std::string_view name) {
  for (int i = 0; i < kNumParts; ++i) {
    if (kPartNames[static_cast<std::size_t>(i)] == name) return static_cast<Part>(i);
  }
  throw ValidationError("unknown body part '" + std::string(name) + "'");
}

JointTrackSet::JointTrackSet(long first_frame, std::vector<std::array<Point, kNumParts>> frames)
    : first_frame_(first_frame), frames_(std::move(frames)) {
  for (const auto& f : frames_) {
    for (const auto& p : f) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError("non-finite joint coordinate");
    }
  }
}

const Point& JointTrackSet::at(long frame, Part p) const {
  if (!contains(frame)) throw ValidationError("frame " + std::to_string(frame) + " outside track range");
  return frames_[static_cast<std::size_t>(frame - first_frame_)][static_cast<std::size_t>(p)];
}

Point& JointTrackSet::at(long frame, Part p) {
  if (!contains(frame)) throw ValidationError("frame " + std::to_string(frame) + " outside track range");
  return frames_[static_cast<std::size_t>(frame - first_frame_)][static_cast<std::size_t>(p)];
}

JointTrackSet JointTrackSet::load_csv(const std::filesystem::path& path) {
  std::map<long, std::array<Point, kNumParts>> by_frame;
  std::map<long, std::array<bool, kNumParts>> seen;
  auto lines = io::read_lines(path);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    std::string line = io::trim(lines[l]);
    if (line.empty() || line[0] == '#') continue;
    auto f = csv::split(line);
    const std::string ctx = path.string() + ":" + std::to_string(l + 1);
    if (l == 0 && !f.empty() && f[0] == "frame") continue;
    if (f.size() != 4) throw ValidationError(ctx + ": expected frame,part,x,y");
    long frame = csv::parse_int(f[0], ctx);
    auto part = static_cast<std::size_t>(parse_part(io::trim(f[1])));
    by_frame[frame][part] = {csv::parse_double(f[2], ctx), csv::parse_double(f[3], ctx)};
    seen[frame][part] = true;
  }
  if (by_frame.empty()) throw ValidationError(path.string() + ": no joint rows");
  long first = by_frame.begin()->first;
  long last = by_frame.rbegin()->first;
  if (static_cast<std::size_t>(last - first + 1) != by_frame.size()) {
    throw ValidationError(path.string() + ": frame range has gaps");
  }
  std::vector<std::array<Point, kNumParts>> frames;
  for (const auto& [frame, pts] : by_frame) {
    for (int p = 0; p < kNumParts; ++p) {
      if (!seen[frame][static_cast<std::size_t>(p)]) {
        throw ValidationError(path.string() + ": frame " + std::to_string(frame) + " lacks part " +
                              std::string(kPartNames[static_cast<std::size_t>(p)]));
      }
    }
    frames.push_back(pts);
  }
  return JointTrackSet(first, std::move(frames));
}

void JointTrackSet::save_csv(const std::filesystem::path& path) const {
  std::ostringstream out;
  out << "frame,part,x,y\n";
  for (std::size_t f = 0; f < frames_.size(); ++f) {
    for (int p = 0; p < kNumParts; ++p) {
      const Point& pt = frames_[f][static_cast<std::size_t>(p)];
      out << first_frame_ + static_cast<long>(f) << ',' << kPartNames[static_cast<std::size_t>(p)] << ','
          << csv::format_exact(pt.x) << ',' << csv::format_exact(pt.y) << '\n';
    }
  }
  io::write_file(path, out.str());
}

}  // namespace actrec::posefeat
