#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "acet/classifier.hpp"
#include "acet/ensemble.hpp"
#include "acet/geometry.hpp"
#include "acet/image.hpp"
#include "acet/sampling.hpp"

namespace acet {

struct TrackerOutput {
  int frame = 0;
  BBox box;
  // Mean error above tau_occ, or no positive sample this frame.
  bool occluded = false;
  bool no_positive = false;
  int positives = 0;
  std::vector<int> errors;
  std::vector<double> error_fractions;
  std::vector<double> weights;  // alphas after this frame
  double mean_error = 0.0;
};

struct TrackerState {
  EnsembleConfig config;  // resolved for its mode
  std::vector<MemberState> members;
  BBox box;
  int frame_index = 0;
  int frame_width = 0;
  int frame_height = 0;
  Rng rng;
};

/// Bootstraps every member from positives (IoU >= 0.8) and negatives
/// (IoU <= 0.3) drawn around the ground truth of the first frame.
TrackerState init_tracker(const Frame& frame, const BBox& gt, const EnsembleConfig& cfg, std::uint64_t seed);

/// One pass of the collaborative ensemble loop over the next frame. When
/// `trace` is given it receives the frame's scored samples.
TrackerOutput step(TrackerState& state, const Frame& frame, std::vector<Sample>* trace = nullptr);

/// {"frame", "box" (x,y,w,h with 1-based top-left), "occluded", "errors", "weights", "mean_error"}.
std::string to_json_line(const TrackerOutput& out);

}  // namespace acet
