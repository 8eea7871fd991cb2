#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "acet/geometry.hpp"

namespace acet {

/// One generator per tracker instance; all randomness flows from its seed.
using Rng = std::mt19937_64;

struct SamplerConfig {
  int n_samples = 400;
  double sigma_xy_rel = 0.3;  // translation sigma as a fraction of target size
  double sigma_scale = 0.05;  // sigma of the log-scale offset
};

void validate(const SamplerConfig& cfg);

struct Candidate {
  Transform transform;
  BBox box;
};

/// Draws cfg.n_samples candidates from a diagonal Gaussian centered on `prev`.
/// Candidate 0 is always the identity transform. Log-scale offsets are
/// redrawn until |ds| < ln 2. Throws DegenerateStateError when prev is
/// smaller than kMinBoxSide on either side.
std::vector<Candidate> draw_samples(const BBox& prev, const SamplerConfig& cfg, int frame_w, int frame_h,
                                    Rng& rng);

/// Truncated normal draw of a log-scale offset.
double draw_log_scale(double sigma, Rng& rng);

}  // namespace acet
