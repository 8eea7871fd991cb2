#include "acet/tracker.hpp"

#include <cmath>
#include <string>

#include "json.hpp"

#include "acet/error.hpp"
#include "acet/kernels.hpp"

namespace acet {

namespace {

constexpr int kMaxInitDraws = 10000;
constexpr double kInitPositiveIou = 0.8;
constexpr double kInitNegativeIou = 0.3;
constexpr double kInitJitterRel = 0.1;  // positive jitter as a fraction of the box size

std::vector<BBox> draw_init_positives(const BBox& gt, int count, int fw, int fh, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<BBox> out{gt};
  for (int draws = 0; static_cast<int>(out.size()) < count; ++draws) {
    if (draws >= kMaxInitDraws) throw InitError("could not draw enough positive samples around the target");
    Transform y{kInitJitterRel * gt.w * unit(rng), kInitJitterRel * gt.h * unit(rng), draw_log_scale(0.03, rng)};
    const BBox b = clamp_to_frame(apply_transform(gt, y), fw, fh);
    if (iou(b, gt) >= kInitPositiveIou) out.push_back(b);
  }
  return out;
}

std::vector<BBox> draw_init_negatives(const BBox& gt, const SamplerConfig& sc, int count, int fw, int fh, Rng& rng) {
  // Search radius is three sampler sigmas; negatives come from twice that.
  const double rx = 2.0 * 3.0 * sc.sigma_xy_rel * gt.w;
  const double ry = 2.0 * 3.0 * sc.sigma_xy_rel * gt.h;
  std::uniform_real_distribution<double> ux(-rx, rx);
  std::uniform_real_distribution<double> uy(-ry, ry);
  std::vector<BBox> out;
  for (int draws = 0; static_cast<int>(out.size()) < count; ++draws) {
    if (draws >= kMaxInitDraws) throw InitError("could not draw enough negative samples around the target");
    const double dx = ux(rng);
    const double dy = uy(rng);
    Transform y{dx, dy, draw_log_scale(sc.sigma_scale, rng)};
    const BBox b = clamp_to_frame(apply_transform(gt, y), fw, fh);
    if (iou(b, gt) <= kInitNegativeIou) out.push_back(b);
  }
  return out;
}

std::vector<float> slice_copy(const Sample& s, FeatureFamily family) {
  const auto v = s.x.slice(family);
  return std::vector<float>(v.begin(), v.end());
}

}  // namespace

TrackerState init_tracker(const Frame& frame, const BBox& gt, const EnsembleConfig& cfg_in, std::uint64_t seed) {
  TrackerState st;
  st.config = resolve_mode(cfg_in);
  validate(st.config);
  const EnsembleConfig& cfg = st.config;
  if (!frame.valid()) throw DataError("invalid first frame");
  if (!gt.valid() || gt.w < kMinBoxSide || gt.h < kMinBoxSide)
    throw DegenerateStateError("initial box is degenerate");
  if (inside_fraction(gt, frame.width, frame.height) <= 0.0) throw InitError("initial box lies outside the frame");

  st.rng.seed(seed);
  st.frame_width = frame.width;
  st.frame_height = frame.height;
  st.frame_index = frame.index;
  st.box = clamp_to_frame(gt, frame.width, frame.height);

  const auto pos = draw_init_positives(st.box, cfg.init_positives, frame.width, frame.height, st.rng);
  const auto neg = draw_init_negatives(st.box, cfg.sampler, cfg.init_negatives, frame.width, frame.height, st.rng);

  // Interleave classes so the first SGD passes see both.
  std::vector<Sample> samples;
  samples.reserve(pos.size() + neg.size());
  std::vector<Label> labels;
  std::size_t ip = 0, in = 0;
  while (ip < pos.size() || in < neg.size()) {
    const bool take_pos = ip < pos.size() && (in >= neg.size() || ip * neg.size() <= in * pos.size());
    Sample s;
    s.box = take_pos ? pos[ip++] : neg[in++];
    samples.push_back(std::move(s));
    labels.push_back(take_pos ? Label::Positive : Label::Negative);
  }
  kernels::extract_features(frame, samples, cfg.parallel);

  st.members.resize(static_cast<std::size_t>(cfg.n));
  for (int c = 0; c < cfg.n; ++c) {
    MemberState& m = st.members[c];
    m.family = member_family(cfg, c);
    m.model = LinearModel::zeros(feature_dim(m.family), cfg.classifier.learn_rate, cfg.classifier.reg);
    m.buffer = TrainingBuffer(cfg.spans[c], cfg.classifier.buffer_capacity);
    m.tau_u = cfg.tau_member;
    m.weight = 1.0;
    std::vector<TrainingEntry> entries;
    entries.reserve(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j)
      entries.push_back({slice_copy(samples[j], m.family), labels[j], frame.index});
    m.buffer.push(std::move(entries), frame.index);
  }
  const std::vector<std::uint8_t> all(st.members.size(), 1);
  kernels::update_members(st.members, all, cfg.classifier.init_epochs, cfg.parallel);
  return st;
}

TrackerOutput step(TrackerState& st, const Frame& frame, std::vector<Sample>* trace) {
  const EnsembleConfig& cfg = st.config;
  if (frame.index != st.frame_index + 1)
    throw ConfigError("expected frame " + std::to_string(st.frame_index + 1) + ", got " + std::to_string(frame.index));
  if (frame.width != st.frame_width || frame.height != st.frame_height)
    throw DataError("frame size changed within a sequence");

  const auto candidates = draw_samples(st.box, cfg.sampler, frame.width, frame.height, st.rng);
  std::vector<Sample> samples(candidates.size());
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    samples[j].transform = candidates[j].transform;
    samples[j].box = candidates[j].box;
  }
  kernels::extract_features(frame, samples, cfg.parallel);
  kernels::score_members(samples, st.members, cfg.parallel);

  std::vector<double> alphas;
  for (const auto& m : st.members) alphas.push_back(m.weight);
  const FrameDecision d = decide(samples, alphas, cfg);

  TrackerOutput out;
  out.frame = frame.index;
  for (const Sample& s : samples) out.positives += s.label == Label::Positive ? 1 : 0;
  BBox next = st.box;
  if (!d.occluded) {
    try {
      next = clamp_to_frame(estimate_state(samples), frame.width, frame.height);
    } catch (const NoPositiveError&) {
      out.no_positive = true;
    }
  }
  out.occluded = d.occluded || out.no_positive;

  // Members update before the occlusion branch unless frozen.
  if (!(cfg.freeze_on_occlusion && out.occluded)) {
    std::vector<std::uint8_t> active(st.members.size(), 0);
    for (std::size_t c = 0; c < st.members.size(); ++c) {
      MemberState& m = st.members[c];
      std::vector<TrainingEntry> entries;
      entries.reserve(d.training[c].size());
      for (std::size_t j : d.training[c]) entries.push_back({slice_copy(samples[j], m.family), samples[j].label, frame.index});
      active[c] = entries.empty() ? 0 : 1;
      m.buffer.push(std::move(entries), frame.index);
    }
    kernels::update_members(st.members, active, cfg.classifier.epochs, cfg.parallel);
  }

  for (std::size_t c = 0; c < st.members.size(); ++c) {
    st.members[c].weight = d.alphas[c];
    st.members[c].last_error = d.errors[c].errors;
    out.errors.push_back(d.errors[c].errors);
  }
  out.error_fractions = d.error_fractions;
  out.weights = d.alphas;
  out.mean_error = d.mean_error;
  out.box = next;

  st.box = next;
  st.frame_index = frame.index;
  if (trace) *trace = std::move(samples);
  return out;
}

std::string to_json_line(const TrackerOutput& out) {
  nlohmann::json j;
  j["frame"] = out.frame;
  j["box"] = {out.box.left() + 1.0, out.box.top() + 1.0, out.box.w, out.box.h};
  j["occluded"] = out.occluded;
  j["errors"] = out.errors;
  j["weights"] = out.weights;
  j["mean_error"] = out.mean_error;
  return j.dump();
}

}  // namespace acet
