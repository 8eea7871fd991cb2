#include "acet/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "acet/error.hpp"

namespace acet {

std::size_t feature_dim(FeatureFamily family) {
  switch (family) {
    case FeatureFamily::Grad:
      return kGradDim;
    case FeatureFamily::Color:
      return kColorDim;
    case FeatureFamily::Concat:
      return kConcatDim;
  }
  return 0;
}

std::size_t feature_offset(FeatureFamily family) { return family == FeatureFamily::Color ? kGradDim : 0; }

std::string_view to_string(FeatureFamily family) {
  switch (family) {
    case FeatureFamily::Grad:
      return "grad";
    case FeatureFamily::Color:
      return "color";
    case FeatureFamily::Concat:
      return "concat";
  }
  return "?";
}

std::span<const double> FeatureVector::slice(FeatureFamily f) const {
  std::span<const double> all(values);
  if (f == family) return all;
  if (family != FeatureFamily::Concat) throw ConfigError("feature family mismatch");
  return all.subspan(feature_offset(f), feature_dim(f));
}

namespace {

int mirror_index(long i, int n) {
  if (n <= 1) return 0;
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2L * n - i - 1;
  }
  return static_cast<int>(i);
}

struct Tap {
  int i0;
  int i1;
  double f;  // weight of i1
};

// Source taps for the 32 output positions along one axis. Output pixel k
// samples at lo + (k + 0.5) * side / 32 in continuous coordinates, i.e.
// index-space position minus the half-pixel center offset.
std::array<Tap, kPatchSide> axis_taps(double lo, double side, int n) {
  std::array<Tap, kPatchSide> taps{};
  const double base = std::floor(lo);
  const double frac = lo - base;
  const double step = side / kPatchSide;
  for (int k = 0; k < kPatchSide; ++k) {
    const double rel = frac + (k + 0.5) * step - 0.5;
    const double fl = std::floor(rel);
    const long i = static_cast<long>(base) + static_cast<long>(fl);
    taps[k] = Tap{mirror_index(i, n), mirror_index(i + 1, n), rel - fl};
  }
  return taps;
}

}  // namespace

Patch extract_patch(const Frame& frame, const BBox& box) {
  if (!frame.valid()) throw DataError("invalid frame buffer");
  if (!box.valid()) throw DegenerateStateError("cannot extract a patch from a degenerate box");

  const auto cols = axis_taps(box.left(), box.w, frame.width);
  const auto rows = axis_taps(box.top(), box.h, frame.height);
  const std::uint8_t* px = frame.data.data();
  const std::size_t stride = static_cast<std::size_t>(frame.width) * Frame::kChannels;

  Patch patch;
  for (int r = 0; r < kPatchSide; ++r) {
    const Tap& ty = rows[r];
    const std::uint8_t* row0 = px + ty.i0 * stride;
    const std::uint8_t* row1 = px + ty.i1 * stride;
    for (int c = 0; c < kPatchSide; ++c) {
      const Tap& tx = cols[c];
      const std::size_t a = static_cast<std::size_t>(tx.i0) * Frame::kChannels;
      const std::size_t b = static_cast<std::size_t>(tx.i1) * Frame::kChannels;
      double rgb[3];
      for (int ch = 0; ch < 3; ++ch) {
        const double top = row0[a + ch] + tx.f * (row0[b + ch] - row0[a + ch]);
        const double bot = row1[a + ch] + tx.f * (row1[b + ch] - row1[a + ch]);
        rgb[ch] = top + ty.f * (bot - top);
      }
      const int o = r * kPatchSide + c;
      patch.rgb[3 * o] = rgb[0];
      patch.rgb[3 * o + 1] = rgb[1];
      patch.rgb[3 * o + 2] = rgb[2];
      patch.gray[o] = 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2];
    }
  }
  return patch;
}

namespace {

// (cos, sin) of the bin boundaries k*pi/8, k = 1..7.
const std::array<std::pair<double, double>, kOrientationBins - 1> kBounds = [] {
  std::array<std::pair<double, double>, kOrientationBins - 1> b{};
  for (int k = 1; k < kOrientationBins; ++k) {
    const double phi = k * std::numbers::pi / kOrientationBins;
    b[k - 1] = {std::cos(phi), std::sin(phi)};
  }
  return b;
}();

inline int bin_of(double gx, double gy) {
  // Fold onto [0, pi), then count the bin boundaries at or below the angle.
  const bool flip = (gy < 0.0) | ((gy == 0.0) & (gx < 0.0));
  gx = flip ? -gx : gx;
  gy = flip ? -gy : gy;
  int bin = 0;
  for (const auto& [c, s] : kBounds) bin += (c * gy - s * gx >= 0.0) ? 1 : 0;
  return bin;
}

}  // namespace

int orientation_bin(double gx, double gy) { return bin_of(gx, gy); }

FeatureVector grad_features(const Patch& patch) {
  constexpr int N = kPatchSide;
  constexpr int C = kCellsPerSide;
  constexpr int B = kOrientationBins;
  const auto& g = patch.gray;

  std::array<double, C * C * B> cells{};
  std::array<double, N> mag;
  std::array<int, N> bin;
  std::array<double, N + 2> padded;
  for (int y = 0; y < N; ++y) {
    const double* up = &g[std::max(y - 1, 0) * N];
    const double* row = &g[y * N];
    const double* down = &g[std::min(y + 1, N - 1) * N];
    // Edge-replicated copy of the row keeps the row pass free of clamps and
    // the scatter, so the compiler can vectorize it.
    padded[0] = row[0];
    std::copy(row, row + N, padded.begin() + 1);
    padded[N + 1] = row[N - 1];
    for (int x = 0; x < N; ++x) {
      const double gx = padded[x + 2] - padded[x];
      const double gy = down[x] - up[x];
      mag[x] = std::sqrt(gx * gx + gy * gy);
      bin[x] = bin_of(gx, gy);
    }
    double* cell_row = &cells[(y / kCellSide) * C * B];
    for (int x = 0; x < N; ++x) cell_row[(x / kCellSide) * B + bin[x]] += mag[x];
  }

  FeatureVector out{FeatureFamily::Grad, std::vector<double>(kGradDim, 0.0)};
  // Block norms below kEps (gray levels) are attenuated rather than
  // stretched to unit length, so sensor noise on flat regions stays weak.
  constexpr double kEps = 300.0;
  // Blocks are anchored on a padded (C+1)x(C+1) grid; cells outside the
  // patch contribute nothing.
  for (int by = -1; by < C; ++by) {
    for (int bx = -1; bx < C; ++bx) {
      std::array<double, 4 * B> v{};
      std::array<int, 4> member{-1, -1, -1, -1};
      double ss = 0.0;
      for (int k = 0; k < 4; ++k) {
        const int cy = by + k / 2;
        const int cx = bx + k % 2;
        if (cy < 0 || cy >= C || cx < 0 || cx >= C) continue;
        member[k] = cy * C + cx;
        for (int b = 0; b < B; ++b) {
          v[k * B + b] = cells[member[k] * B + b];
          ss += v[k * B + b] * v[k * B + b];
        }
      }
      if (ss == 0.0) continue;
      const double n1 = std::sqrt(ss + kEps * kEps);
      double ss2 = 0.0;
      for (double& e : v) {
        e = std::min(e / n1, kHysClip);
        ss2 += e * e;
      }
      // Renormalize the clipped block back to its attenuated pre-clip length.
      const double inv = std::sqrt(ss) / n1 / std::sqrt(ss2);
      for (int k = 0; k < 4; ++k) {
        if (member[k] < 0) continue;
        // Slot of this block among the four blocks holding the cell:
        // 0 = cell is bottom-right of the block, 3 = cell is top-left.
        const int slot = (1 - k / 2) * 2 + (1 - k % 2);
        double* dst = out.values.data() + (member[k] * 4 + slot) * B;
        for (int b = 0; b < B; ++b) dst[b] = v[k * B + b] * inv;
      }
    }
  }
  return out;
}

FeatureVector color_features(const Patch& patch) {
  std::array<int, kColorDim> counts{};
  for (int p = 0; p < kPatchPixels; ++p) {
    for (int ch = 0; ch < 3; ++ch) {
      // v lies in [0, 255], so the bin is the integer part over 16.
      const int bin = std::min(static_cast<int>(patch.rgb[3 * p + ch]) * kColorBins / 256, kColorBins - 1);
      ++counts[ch * kColorBins + bin];
    }
  }
  FeatureVector out{FeatureFamily::Color, std::vector<double>(kColorDim, 0.0)};
  // A power-of-two pixel count makes count * kUnit exact.
  static_assert((kPatchPixels & (kPatchPixels - 1)) == 0);
  constexpr double kUnit = 1.0 / kPatchPixels;
  for (std::size_t i = 0; i < kColorDim; ++i) out.values[i] = counts[i] * kUnit;
  return out;
}

FeatureVector feature_vector(const Frame& frame, const BBox& box, FeatureFamily family) {
  const Patch patch = extract_patch(frame, box);
  switch (family) {
    case FeatureFamily::Grad:
      return grad_features(patch);
    case FeatureFamily::Color:
      return color_features(patch);
    case FeatureFamily::Concat: {
      FeatureVector grad = grad_features(patch);
      const FeatureVector color = color_features(patch);
      grad.family = FeatureFamily::Concat;
      grad.values.insert(grad.values.end(), color.values.begin(), color.values.end());
      return grad;
    }
  }
  return {};
}

}  // namespace acet
