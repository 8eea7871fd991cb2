#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "acet/geometry.hpp"
#include "acet/image.hpp"

namespace acet {

enum class FeatureFamily { Grad, Color, Concat };

inline constexpr int kPatchSide = 32;
inline constexpr int kPatchPixels = kPatchSide * kPatchSide;
inline constexpr int kCellSide = 8;
inline constexpr int kCellsPerSide = kPatchSide / kCellSide;  // 4
inline constexpr int kOrientationBins = 8;
inline constexpr int kColorBins = 16;
inline constexpr double kHysClip = 0.2;

inline constexpr std::size_t kGradDim = 512;
inline constexpr std::size_t kColorDim = 48;
inline constexpr std::size_t kConcatDim = kGradDim + kColorDim;

std::size_t feature_dim(FeatureFamily family);
/// Offset of the family's slice inside a CONCAT vector (GRAD first, then COLOR).
std::size_t feature_offset(FeatureFamily family);
std::string_view to_string(FeatureFamily family);

/// Canonical 32x32 resample of a box; values on the 0..255 scale.
struct Patch {
  std::array<double, kPatchPixels> gray{};
  std::array<double, kPatchPixels * 3> rgb{};  // interleaved
};

struct FeatureVector {
  FeatureFamily family = FeatureFamily::Concat;
  std::vector<double> values;

  /// View of one family inside this vector; a CONCAT vector serves all three.
  std::span<const double> slice(FeatureFamily f) const;
};

/// Bilinear resample with mirrored borders. Throws DegenerateStateError for
/// boxes without area.
Patch extract_patch(const Frame& frame, const BBox& box);

/// HOG-style descriptor over the gray plane: 4x4 cells of 8x8 pixels, eight
/// unsigned orientation bins, and L2-hys normalization over 2x2-cell blocks.
/// Every cell appears once per block containing it (four blocks on a padded
/// grid), giving 16 cells x 4 blocks x 8 bins = 512 values.
FeatureVector grad_features(const Patch& patch);

/// Per-channel 16-bin histograms, each L1-normalized.
FeatureVector color_features(const Patch& patch);

FeatureVector feature_vector(const Frame& frame, const BBox& box, FeatureFamily family);

/// Unsigned orientation bin of a gradient, in [0, kOrientationBins).
int orientation_bin(double gx, double gy);

}  // namespace acet
