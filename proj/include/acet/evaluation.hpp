#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "acet/dataset.hpp"
#include "acet/ensemble.hpp"
#include "acet/tracker.hpp"

namespace acet {

inline constexpr int kSuccessThresholds = 21;

/// Overlap thresholds 0, 0.05, ..., 1.
std::array<double, kSuccessThresholds> success_thresholds();

struct SuccessCurve {
  std::array<double, kSuccessThresholds> thresholds{};
  std::array<double, kSuccessThresholds> success_rate{};  // fraction of frames with iou > threshold
  double auc = 0.0;                                        // mean of success_rate
};

/// Throws EvaluationError on an empty list or an iou outside [0, 1].
SuccessCurve success_curve(std::span<const double> ious);

struct OpeResult {
  std::string sequence;
  Mode mode = Mode::Acet;
  std::vector<BBox> boxes;  // frame 1 is the initial ground truth
  std::vector<TrackerOutput> outputs;  // frames 2..N
  std::vector<double> ious;
  SuccessCurve curve;
  double seconds = 0.0;  // wall time of the tracking loop, never written to result files
};

/// One-pass evaluation: initialize on the first ground-truth box, step once
/// per remaining frame, score every frame (occluded frames keep their held box).
OpeResult run_ope(const EnsembleConfig& cfg, const Sequence& seq, std::uint64_t seed);

struct AttributeRow {
  std::string name;  // attribute tag or "ALL"
  double auc = 0.0;
  int sequences = 0;
};

struct AttributeTable {
  std::vector<AttributeRow> rows;     // attributes in canonical order, then ALL
  std::vector<std::string> warnings;  // attributes omitted for lack of sequences
};

struct SequenceScore {
  AttributeSet attributes;
  double auc = 0.0;
};

/// Mean AUC per attribute over the sequences carrying it, plus an ALL row.
AttributeTable attribute_table(const std::map<std::string, SequenceScore>& results);

}  // namespace acet
