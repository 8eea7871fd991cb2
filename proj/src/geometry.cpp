#include "acet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace acet {

bool BBox::valid() const {
  return std::isfinite(cx) && std::isfinite(cy) && std::isfinite(w) && std::isfinite(h) && w > 0.0 &&
         h > 0.0;
}

BBox BBox::from_otb(double x, double y, double w, double h) {
  return BBox{x - 1.0 + 0.5 * w, y - 1.0 + 0.5 * h, w, h};
}

BBox apply_transform(const BBox& p, const Transform& y) {
  const double scale = std::exp(y.ds);
  return BBox{p.cx + y.dx, p.cy + y.dy, p.w * scale, p.h * scale};
}

Transform compose(const Transform& first, const Transform& second) {
  return Transform{first.dx + second.dx, first.dy + second.dy, first.ds + second.ds};
}

double intersection_area(const BBox& a, const BBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  // Areas from the same edges as the intersection, so iou(a, a) is exactly 1.
  const double area_a = (a.right() - a.left()) * (a.bottom() - a.top());
  const double area_b = (b.right() - b.left()) * (b.bottom() - b.top());
  // min + max keeps the sum symmetric even when a product is fused into it.
  const double uni = std::min(area_a, area_b) + std::max(area_a, area_b) - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

namespace {

double overlap_1d(double lo, double hi, double limit) {
  return std::max(0.0, std::min(hi, limit) - std::max(lo, 0.0));
}

// Moves the center along one axis by the smallest amount that keeps at least
// `frac` of the side inside [0, limit]. Assumes side <= limit.
double shift_center(double c, double side, double limit, double frac) {
  const double lo_min = (frac - 1.0) * side;  // lowest admissible left edge
  const double lo_max = limit - frac * side;  // highest admissible left edge
  const double lo = std::clamp(c - 0.5 * side, lo_min, lo_max);
  return lo + 0.5 * side;
}

}  // namespace

double inside_fraction(const BBox& p, int frame_w, int frame_h) {
  if (!p.valid()) return 0.0;
  const double fx = overlap_1d(p.left(), p.right(), frame_w) / p.w;
  const double fy = overlap_1d(p.top(), p.bottom(), frame_h) / p.h;
  return fx * fy;
}

BBox clamp_to_frame(const BBox& p, int frame_w, int frame_h) {
  BBox out = p;
  const double fw = std::max(frame_w, 1);
  const double fh = std::max(frame_h, 1);
  out.w = std::min(std::max(out.w, kMinBoxSide), std::max(fw, kMinBoxSide));
  out.h = std::min(std::max(out.h, kMinBoxSide), std::max(fh, kMinBoxSide));
  if (!std::isfinite(out.cx)) out.cx = 0.5 * fw;
  if (!std::isfinite(out.cy)) out.cy = 0.5 * fh;

  const double fx = overlap_1d(out.left(), out.right(), fw) / out.w;
  const double fy = overlap_1d(out.top(), out.bottom(), fh) / out.h;
  if (fx * fy >= 0.5) return out;

  // Prefer moving a single axis; fall back to both axes at sqrt(1/2).
  // The small slack keeps the product at or above 1/2 after rounding.
  constexpr double kSlack = 1.0 + 1e-9;
  if (fy > 0.0 && 0.5 / fy * kSlack <= 1.0) {
    out.cx = shift_center(out.cx, out.w, fw, 0.5 / fy * kSlack);
  } else if (fx > 0.0 && 0.5 / fx * kSlack <= 1.0) {
    out.cy = shift_center(out.cy, out.h, fh, 0.5 / fx * kSlack);
  } else {
    const double f = std::sqrt(0.5) * kSlack;
    out.cx = shift_center(out.cx, out.w, fw, f);
    out.cy = shift_center(out.cy, out.h, fh, f);
  }
  return out;
}

std::string to_otb_string(const BBox& p) {
  std::ostringstream os;
  os << std::lround(p.left()) + 1 << ',' << std::lround(p.top()) + 1 << ',' << std::lround(p.w) << ','
     << std::lround(p.h);
  return os.str();
}

}  // namespace acet
