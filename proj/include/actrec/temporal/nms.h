#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "actrec/attributes/linear_model.h"
#include "actrec/temporal/integral_histogram.h"
#include "actrec/temporal/window.h"

namespace actrec::temporal {

struct Detection {
  std::string video;
  std::string attribute;
  long start = 0;  // inclusive
  long end = 0;    // inclusive
  double score = 0.0;

  long length() const { return end - start + 1; }
};

// Frames shared by two inclusive intervals.
long intersection(long s1, long e1, long s2, long e2);
double iou(long s1, long e1, long s2, long e2);

// Scores every window of every level with every trained attribute model.
// Attributes without a model produce no candidates.
std::vector<Detection> score_windows(const IntegralHistogram& integral, const attributes::LinearModelSet& models,
                                     const std::vector<WindowLevel>& schedule, const std::string& video = "");

struct NmsOptions {
  long max_overlap_frames = 0;  // suppress when the intersection exceeds this
  bool use_iou = false;         // suppress when IoU exceeds iou_threshold instead
  double iou_threshold = 0.5;
};

// Greedy suppression over candidates of one attribute in one video. Highest
// score first; ties go to the earlier start, then the shorter window.
std::vector<Detection> nms(std::vector<Detection> candidates, const NmsOptions& options = {});

// nms applied separately to each (video, attribute) group.
std::vector<Detection> nms_grouped(const std::vector<Detection>& candidates, const NmsOptions& options = {});

// CSV "video,attribute,start,end,score".
void save_detections(const std::filesystem::path& path, const std::vector<Detection>& detections);
std::vector<Detection> load_detections(const std::filesystem::path& path);

}  // namespace actrec::temporal
