#pragma once

#include <string>

namespace acet {

/// Axis-aligned target state in continuous pixel coordinates.
/// Pixel column i covers [i, i+1); (cx, cy) is the box center.
struct BBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  double left() const { return cx - 0.5 * w; }
  double top() const { return cy - 0.5 * h; }
  double right() const { return cx + 0.5 * w; }
  double bottom() const { return cy + 0.5 * h; }
  double area() const { return w * h; }
  bool valid() const;

  /// OTB convention: (x, y) is the 1-based top-left pixel.
  static BBox from_otb(double x, double y, double w, double h);
  bool operator==(const BBox&) const = default;
};

/// Offset relative to a previous state; scale is stored as a log factor.
struct Transform {
  double dx = 0.0;
  double dy = 0.0;
  double ds = 0.0;

  bool operator==(const Transform&) const = default;
};

BBox apply_transform(const BBox& p, const Transform& y);

/// Transform equivalent to applying `first` and then `second`.
Transform compose(const Transform& first, const Transform& second);

double intersection_area(const BBox& a, const BBox& b);
double iou(const BBox& a, const BBox& b);

inline constexpr double kMinBoxSide = 4.0;

/// Floors sides at kMinBoxSide, shrinks boxes larger than the frame and
/// translates the box until at least half of its area lies inside the frame.
BBox clamp_to_frame(const BBox& p, int frame_w, int frame_h);

/// Fraction of the box area inside [0, frame_w) x [0, frame_h).
double inside_fraction(const BBox& p, int frame_w, int frame_h);

/// "x,y,w,h" with integer 1-based top-left corner.
std::string to_otb_string(const BBox& p);

}  // namespace acet
