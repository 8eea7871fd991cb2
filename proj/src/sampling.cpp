#include "acet/sampling.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "acet/error.hpp"

namespace acet {

void validate(const SamplerConfig& cfg) {
  if (cfg.n_samples < 16) throw ConfigError("n_samples must be >= 16, got " + std::to_string(cfg.n_samples));
  if (!(cfg.sigma_xy_rel > 0.0) || !std::isfinite(cfg.sigma_xy_rel))
    throw ConfigError("sigma_xy_rel must be > 0");
  if (!(cfg.sigma_scale >= 0.0) || !std::isfinite(cfg.sigma_scale))
    throw ConfigError("sigma_scale must be >= 0");
}

double draw_log_scale(double sigma, Rng& rng) {
  if (sigma <= 0.0) return 0.0;
  std::normal_distribution<double> normal(0.0, sigma);
  for (;;) {
    const double ds = normal(rng);
    if (std::abs(ds) < std::numbers::ln2) return ds;
  }
}

std::vector<Candidate> draw_samples(const BBox& prev, const SamplerConfig& cfg, int frame_w, int frame_h,
                                    Rng& rng) {
  validate(cfg);
  if (!prev.valid() || prev.w < kMinBoxSide || prev.h < kMinBoxSide)
    throw DegenerateStateError("cannot sample around a degenerate box");

  std::normal_distribution<double> unit(0.0, 1.0);
  const double sx = cfg.sigma_xy_rel * prev.w;
  const double sy = cfg.sigma_xy_rel * prev.h;

  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(cfg.n_samples));
  out.push_back({Transform{}, clamp_to_frame(prev, frame_w, frame_h)});
  for (int j = 1; j < cfg.n_samples; ++j) {
    Transform y;
    y.dx = sx * unit(rng);
    y.dy = sy * unit(rng);
    y.ds = draw_log_scale(cfg.sigma_scale, rng);
    out.push_back({y, clamp_to_frame(apply_transform(prev, y), frame_w, frame_h)});
  }
  return out;
}

}  // namespace acet
