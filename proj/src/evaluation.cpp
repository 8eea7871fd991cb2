#include "acet/evaluation.hpp"

#include <chrono>
#include <cmath>

#include "acet/error.hpp"

namespace acet {

std::array<double, kSuccessThresholds> success_thresholds() {
  std::array<double, kSuccessThresholds> t{};
  for (int k = 0; k < kSuccessThresholds; ++k) t[k] = k / 20.0;
  return t;
}

SuccessCurve success_curve(std::span<const double> ious) {
  if (ious.empty()) throw EvaluationError("success curve needs at least one frame");
  SuccessCurve c;
  c.thresholds = success_thresholds();
  std::array<long, kSuccessThresholds> counts{};
  for (double v : ious) {
    if (!(v >= 0.0 && v <= 1.0)) throw EvaluationError("overlap outside [0, 1]");
    for (int k = 0; k < kSuccessThresholds; ++k) counts[k] += v > c.thresholds[k] ? 1 : 0;
  }
  double sum = 0.0;
  for (int k = 0; k < kSuccessThresholds; ++k) {
    c.success_rate[k] = static_cast<double>(counts[k]) / static_cast<double>(ious.size());
    sum += c.success_rate[k];
  }
  c.auc = sum / kSuccessThresholds;
  return c;
}

OpeResult run_ope(const EnsembleConfig& cfg, const Sequence& seq, std::uint64_t seed) {
  OpeResult r;
  r.sequence = seq.name();
  r.mode = cfg.mode;
  const auto& gt = seq.ground_truth();
  const auto t0 = std::chrono::steady_clock::now();
  auto first = seq.frame(0);
  TrackerState state = init_tracker(*first, gt[0], cfg, seed);
  r.boxes.push_back(state.box);
  for (std::size_t k = 1; k < seq.size(); ++k) {
    auto frame = seq.frame(k);
    r.outputs.push_back(step(state, *frame));
    r.boxes.push_back(r.outputs.back().box);
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (std::size_t k = 0; k < seq.size(); ++k) r.ious.push_back(iou(r.boxes[k], gt[k]));
  r.curve = success_curve(r.ious);
  return r;
}

AttributeTable attribute_table(const std::map<std::string, SequenceScore>& results) {
  AttributeTable t;
  for (Attribute a : kAllAttributes) {
    double sum = 0.0;
    int count = 0;
    for (const auto& [name, s] : results) {
      if (!s.attributes.contains(a)) continue;
      sum += s.auc;
      ++count;
    }
    if (count == 0) {
      t.warnings.push_back("attribute " + std::string(to_string(a)) + " has no sequences; omitted");
      continue;
    }
    t.rows.push_back({std::string(to_string(a)), sum / count, count});
  }
  double sum = 0.0;
  for (const auto& [name, s] : results) sum += s.auc;
  t.rows.push_back({"ALL", results.empty() ? 0.0 : sum / static_cast<double>(results.size()),
                    static_cast<int>(results.size())});
  return t;
}

}  // namespace acet
