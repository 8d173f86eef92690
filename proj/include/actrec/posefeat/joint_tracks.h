#pragma once

#include <array>
#include <filesystem>
#include <string_view>
#include <vector>

namespace actrec::posefeat {

enum class Part : int {
  kHead = 0,
  kTorso,
  kRightShoulder,
  kLeftShoulder,
  kRightElbow,
  kLeftElbow,
  kRightWrist,
  kLeftWrist,
  kRightHand,
  kLeftHand,
};

inline constexpr int kNumParts = 10;

std::string_view part_name(Part p);
Part parse_part(std::string_view name);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// 2-D joint positions for every part on a contiguous frame range.
class JointTrackSet {
 public:
  JointTrackSet() = default;
  JointTrackSet(long first_frame, std::vector<std::array<Point, kNumParts>> frames);

  long first_frame() const { return first_frame_; }
  long last_frame() const { return first_frame_ + static_cast<long>(frames_.size()) - 1; }
  std::size_t num_frames() const { return frames_.size(); }
  bool contains(long frame) const { return frame >= first_frame_ && frame <= last_frame(); }

  const Point& at(long frame, Part p) const;
  Point& at(long frame, Part p);

  // CSV "frame,part,x,y" with part names as returned by part_name(). Every part
  // must be present on every frame of the covered range.
  static JointTrackSet load_csv(const std::filesystem::path& path);
  void save_csv(const std::filesystem::path& path) const;

 private:
  long first_frame_ = 0;
  std::vector<std::array<Point, kNumParts>> frames_;
};

}  // namespace actrec::posefeat
