#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "acet/config_io.hpp"
#include "acet/dataset.hpp"

namespace acet {

using Color = std::array<double, 3>;

struct OcclusionInterval {
  int first = 0;  // inclusive, 1-based frames
  int last = 0;
  BBox box;  // occluder, in center form
};

struct DriftKey {
  int frame = 1;
  double factor = 0.0;  // 0 = appearance A, 1 = appearance B
};

/// Declarative description of a synthetic ground-truthed sequence.
struct SynthConfig {
  std::string name = "synthetic";
  int width = 320;
  int height = 240;
  int frames = 120;
  int target_w = 36;
  int target_h = 36;
  Color color_a{235, 95, 60};
  Color color_b{60, 165, 235};
  std::uint64_t texture_seed_a = 11;
  std::uint64_t texture_seed_b = 23;
  double texture_amp = 70.0;
  std::vector<std::pair<double, double>> path{{100.0, 120.0}, {220.0, 120.0}};  // target centers
  double speed = 1.5;  // pixels per frame along the path (ping-pong)
  std::vector<DriftKey> drift;  // piecewise-linear; empty means no drift
  std::vector<OcclusionInterval> occlusions;
  Color occluder_color{110, 105, 95};
  double clutter = 0.35;  // background contrast in [0, 1]
  double noise_sigma = 3.0;
  std::uint64_t seed = 1;
  AttributeSet attributes;
};

void validate(const SynthConfig& cfg);

/// Keys: name, width, height, frames, target_w, target_h, color_a, color_b
/// ("r,g,b"), texture_seed_a, texture_seed_b, texture_amp, path
/// ("x:y;x:y;..."), speed, drift ("frame:factor;..."), occlusion
/// ("first-last@x,y,w,h;..." with OTB top-left boxes), occluder_color,
/// clutter, noise_sigma, seed, attributes. Unknown keys throw ConfigError
/// naming the key.
SynthConfig synth_config_from_key_values(const KeyValues& kv);
KeyValues to_key_values(const SynthConfig& cfg);

/// Ground-truth (integer-aligned) target box at 1-based frame k.
BBox synth_target_box(const SynthConfig& cfg, int k);
/// Appearance interpolation factor at frame k.
double drift_factor(const SynthConfig& cfg, int k);
bool synth_occluded(const SynthConfig& cfg, int k);

Sequence synth_generate(const SynthConfig& cfg);

// Standard acceptance scenarios.
inline constexpr int kSuiteFrames = 120;
inline constexpr int kAbruptDriftFrame = 60;
inline constexpr int kOcclusionFirst = 40;
inline constexpr int kOcclusionLast = 55;

/// plain-motion, abrupt-drift, gradual-drift, full-occlusion, clutter.
std::vector<SynthConfig> standard_suite(std::uint64_t seed);

}  // namespace acet
