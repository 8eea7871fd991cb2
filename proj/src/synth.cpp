#include "acet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "acet/error.hpp"

namespace acet {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Smoothly interpolated lattice of uniform values in [0, 1].
class ValueNoise {
 public:
  ValueNoise(std::uint64_t seed, double cell, double extent_x, double extent_y)
      : cell_(cell), nx_(static_cast<int>(extent_x / cell) + 2), ny_(static_cast<int>(extent_y / cell) + 2) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    lattice_.resize(static_cast<std::size_t>(nx_) * ny_);
    for (double& v : lattice_) v = u(rng);
  }

  double at(double x, double y) const {
    const double gx = std::clamp(x / cell_, 0.0, nx_ - 1.000001);
    const double gy = std::clamp(y / cell_, 0.0, ny_ - 1.000001);
    const int ix = static_cast<int>(gx);
    const int iy = static_cast<int>(gy);
    const double fx = smooth(gx - ix);
    const double fy = smooth(gy - iy);
    const double a = lattice_[iy * nx_ + ix];
    const double b = lattice_[iy * nx_ + ix + 1];
    const double c = lattice_[(iy + 1) * nx_ + ix];
    const double d = lattice_[(iy + 1) * nx_ + ix + 1];
    const double top = a + fx * (b - a);
    const double bot = c + fx * (d - c);
    return top + fy * (bot - top);
  }

 private:
  static double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

  double cell_;
  int nx_;
  int ny_;
  std::vector<double> lattice_;
};

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

Color parse_color(const std::string& key, const std::string& value) {
  const auto parts = split(value, ',');
  if (parts.size() != 3) throw ConfigError("'" + key + "' expects r,g,b");
  Color c{};
  for (int i = 0; i < 3; ++i) c[i] = parse_double(key, parts[i]);
  return c;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt_color(const Color& c) { return fmt(c[0]) + "," + fmt(c[1]) + "," + fmt(c[2]); }

}  // namespace

void validate(const SynthConfig& c) {
  if (c.width < 16 || c.height < 16) throw ConfigError("synthetic frames must be at least 16x16");
  if (c.frames < 2) throw ConfigError("synthetic sequences need at least two frames");
  if (c.target_w < 4 || c.target_h < 4 || c.target_w > c.width || c.target_h > c.height)
    throw ConfigError("target size must lie between 4 pixels and the frame size");
  if (c.path.empty()) throw ConfigError("path needs at least one waypoint");
  if (!(c.speed >= 0.0)) throw ConfigError("speed must be >= 0");
  int prev = 0;
  for (const auto& d : c.drift) {
    if (!(d.factor >= 0.0 && d.factor <= 1.0)) throw ConfigError("drift factors must lie in [0, 1]");
    if (d.frame < prev) throw ConfigError("drift keys must be ordered by frame");
    prev = d.frame;
  }
  for (const auto& o : c.occlusions) {
    if (o.first < 1 || o.last > c.frames || o.first > o.last)
      throw ConfigError("occlusion interval must lie within the sequence");
    if (!o.box.valid()) throw ConfigError("occluder box must have positive area");
  }
  if (!(c.clutter >= 0.0 && c.clutter <= 1.0)) throw ConfigError("clutter must lie in [0, 1]");
  if (!(c.noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
}

SynthConfig synth_config_from_key_values(const KeyValues& kv) {
  SynthConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "name") {
      c.name = value;
    } else if (key == "width") {
      c.width = static_cast<int>(parse_int(key, value));
    } else if (key == "height") {
      c.height = static_cast<int>(parse_int(key, value));
    } else if (key == "frames") {
      c.frames = static_cast<int>(parse_int(key, value));
    } else if (key == "target_w") {
      c.target_w = static_cast<int>(parse_int(key, value));
    } else if (key == "target_h") {
      c.target_h = static_cast<int>(parse_int(key, value));
    } else if (key == "color_a") {
      c.color_a = parse_color(key, value);
    } else if (key == "color_b") {
      c.color_b = parse_color(key, value);
    } else if (key == "texture_seed_a") {
      c.texture_seed_a = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "texture_seed_b") {
      c.texture_seed_b = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "texture_amp") {
      c.texture_amp = parse_double(key, value);
    } else if (key == "path") {
      c.path.clear();
      for (const auto& pt : split(value, ';')) {
        const auto xy = split(pt, ':');
        if (xy.size() != 2) throw ConfigError("'path' expects x:y;x:y;...");
        c.path.emplace_back(parse_double(key, xy[0]), parse_double(key, xy[1]));
      }
    } else if (key == "speed") {
      c.speed = parse_double(key, value);
    } else if (key == "drift") {
      c.drift.clear();
      for (const auto& k : split(value, ';')) {
        const auto ff = split(k, ':');
        if (ff.size() != 2) throw ConfigError("'drift' expects frame:factor;...");
        c.drift.push_back({static_cast<int>(parse_int(key, ff[0])), parse_double(key, ff[1])});
      }
    } else if (key == "occlusion") {
      c.occlusions.clear();
      for (const auto& item : split(value, ';')) {
        const auto at = item.find('@');
        const auto dash = item.find('-');
        if (at == std::string::npos || dash == std::string::npos || dash > at)
          throw ConfigError("'occlusion' expects first-last@x,y,w,h;...");
        const auto box = split(item.substr(at + 1), ',');
        if (box.size() != 4) throw ConfigError("'occlusion' box expects x,y,w,h");
        OcclusionInterval o;
        o.first = static_cast<int>(parse_int(key, trim(item.substr(0, dash))));
        o.last = static_cast<int>(parse_int(key, trim(item.substr(dash + 1, at - dash - 1))));
        o.box = BBox::from_otb(parse_double(key, box[0]), parse_double(key, box[1]), parse_double(key, box[2]),
                               parse_double(key, box[3]));
        c.occlusions.push_back(o);
      }
    } else if (key == "occluder_color") {
      c.occluder_color = parse_color(key, value);
    } else if (key == "clutter") {
      c.clutter = parse_double(key, value);
    } else if (key == "noise_sigma") {
      c.noise_sigma = parse_double(key, value);
    } else if (key == "seed") {
      c.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "attributes") {
      try {
        c.attributes = parse_attributes(value);
      } catch (const FormatError& e) {
        throw ConfigError(e.what());
      }
    } else {
      throw ConfigError("unknown synthetic config key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

KeyValues to_key_values(const SynthConfig& c) {
  std::string path, drift, occl;
  for (const auto& [x, y] : c.path) path += (path.empty() ? "" : ";") + fmt(x) + ":" + fmt(y);
  for (const auto& d : c.drift) drift += (drift.empty() ? "" : ";") + std::to_string(d.frame) + ":" + fmt(d.factor);
  for (const auto& o : c.occlusions)
    occl += (occl.empty() ? "" : ";") + std::to_string(o.first) + "-" + std::to_string(o.last) + "@" +
            fmt(o.box.left() + 1.0) + "," + fmt(o.box.top() + 1.0) + "," + fmt(o.box.w) + "," + fmt(o.box.h);
  KeyValues kv = {
      {"name", c.name},
      {"width", std::to_string(c.width)},
      {"height", std::to_string(c.height)},
      {"frames", std::to_string(c.frames)},
      {"target_w", std::to_string(c.target_w)},
      {"target_h", std::to_string(c.target_h)},
      {"color_a", fmt_color(c.color_a)},
      {"color_b", fmt_color(c.color_b)},
      {"texture_seed_a", std::to_string(c.texture_seed_a)},
      {"texture_seed_b", std::to_string(c.texture_seed_b)},
      {"texture_amp", fmt(c.texture_amp)},
      {"path", path},
      {"speed", fmt(c.speed)},
  };
  if (!drift.empty()) kv.emplace_back("drift", drift);
  if (!occl.empty()) kv.emplace_back("occlusion", occl);
  kv.emplace_back("occluder_color", fmt_color(c.occluder_color));
  kv.emplace_back("clutter", fmt(c.clutter));
  kv.emplace_back("noise_sigma", fmt(c.noise_sigma));
  kv.emplace_back("seed", std::to_string(c.seed));
  if (!c.attributes.empty()) kv.emplace_back("attributes", to_string(c.attributes));
  return kv;
}

BBox synth_target_box(const SynthConfig& c, int k) {
  double x = c.path.front().first;
  double y = c.path.front().second;
  double total = 0.0;
  for (std::size_t i = 1; i < c.path.size(); ++i)
    total += std::hypot(c.path[i].first - c.path[i - 1].first, c.path[i].second - c.path[i - 1].second);
  if (total > 0.0) {
    double s = std::fmod((k - 1) * c.speed, 2.0 * total);
    if (s > total) s = 2.0 * total - s;
    for (std::size_t i = 1; i < c.path.size(); ++i) {
      const double dx = c.path[i].first - c.path[i - 1].first;
      const double dy = c.path[i].second - c.path[i - 1].second;
      const double len = std::hypot(dx, dy);
      if (s <= len || i + 1 == c.path.size()) {
        const double t = len > 0.0 ? std::min(s / len, 1.0) : 0.0;
        x = c.path[i - 1].first + t * dx;
        y = c.path[i - 1].second + t * dy;
        break;
      }
      s -= len;
    }
  }
  const double left = std::round(x - 0.5 * c.target_w);
  const double top = std::round(y - 0.5 * c.target_h);
  return BBox{left + 0.5 * c.target_w, top + 0.5 * c.target_h, static_cast<double>(c.target_w),
              static_cast<double>(c.target_h)};
}

double drift_factor(const SynthConfig& c, int k) {
  if (c.drift.empty()) return 0.0;
  if (k <= c.drift.front().frame) return c.drift.front().factor;
  for (std::size_t i = 1; i < c.drift.size(); ++i) {
    const auto& a = c.drift[i - 1];
    const auto& b = c.drift[i];
    if (k <= b.frame) {
      if (b.frame == a.frame) return b.factor;
      const double t = static_cast<double>(k - a.frame) / (b.frame - a.frame);
      return a.factor + t * (b.factor - a.factor);
    }
  }
  return c.drift.back().factor;
}

bool synth_occluded(const SynthConfig& c, int k) {
  return std::any_of(c.occlusions.begin(), c.occlusions.end(), [k](const auto& o) { return k >= o.first && k <= o.last; });
}

Sequence synth_generate(const SynthConfig& c) {
  validate(c);
  const int W = c.width;
  const int H = c.height;

  // Static cluttered background.
  const ValueNoise coarse(splitmix64(c.seed ^ 0x1001), 28.0, W, H);
  const ValueNoise fine(splitmix64(c.seed ^ 0x1002), 9.0, W, H);
  const ValueNoise chroma[3] = {ValueNoise(splitmix64(c.seed ^ 0x2001), 40.0, W, H),
                                ValueNoise(splitmix64(c.seed ^ 0x2002), 40.0, W, H),
                                ValueNoise(splitmix64(c.seed ^ 0x2003), 40.0, W, H)};
  constexpr Color kBase{95.0, 100.0, 90.0};
  std::vector<double> background(static_cast<std::size_t>(W) * H * 3);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      const double lum = 0.65 * coarse.at(x, y) + 0.35 * fine.at(x, y) - 0.5;
      for (int ch = 0; ch < 3; ++ch)
        background[(static_cast<std::size_t>(y) * W + x) * 3 + ch] =
            kBase[ch] + 255.0 * c.clutter * lum + 80.0 * c.clutter * (chroma[ch].at(x, y) - 0.5);
    }
  }

  const ValueNoise tex_a(splitmix64(c.texture_seed_a), 6.0, c.target_w, c.target_h);
  const ValueNoise tex_b(splitmix64(c.texture_seed_b), 6.0, c.target_w, c.target_h);
  const ValueNoise occ_tex(splitmix64(c.seed ^ 0x3001), 24.0, W, H);

  // Gaussian table indexed by a per-pixel hash keeps per-frame noise cheap and reproducible.
  std::vector<double> gauss(1 << 16);
  {
    std::mt19937_64 rng(splitmix64(c.seed ^ 0x4001));
    std::normal_distribution<double> n(0.0, 1.0);
    for (double& g : gauss) g = n(rng);
  }

  std::vector<Frame> frames;
  std::vector<BBox> gt;
  frames.reserve(static_cast<std::size_t>(c.frames));
  std::vector<double> img(background.size());
  for (int k = 1; k <= c.frames; ++k) {
    img = background;
    const BBox box = synth_target_box(c, k);
    gt.push_back(box);
    const double f = drift_factor(c, k);
    const int x0 = static_cast<int>(box.left());
    const int y0 = static_cast<int>(box.top());
    for (int v = 0; v < c.target_h; ++v) {
      const int y = y0 + v;
      if (y < 0 || y >= H) continue;
      for (int u = 0; u < c.target_w; ++u) {
        const int x = x0 + u;
        if (x < 0 || x >= W) continue;
        const double ta = c.texture_amp * 2.0 * (tex_a.at(u, v) - 0.5);
        const double tb = c.texture_amp * 2.0 * (tex_b.at(u, v) - 0.5);
        for (int ch = 0; ch < 3; ++ch)
          img[(static_cast<std::size_t>(y) * W + x) * 3 + ch] = (1.0 - f) * (c.color_a[ch] + ta) + f * (c.color_b[ch] + tb);
      }
    }
    for (const auto& o : c.occlusions) {
      if (k < o.first || k > o.last) continue;
      const int ox0 = std::max(0, static_cast<int>(std::floor(o.box.left())));
      const int oy0 = std::max(0, static_cast<int>(std::floor(o.box.top())));
      const int ox1 = std::min(W, static_cast<int>(std::ceil(o.box.right())));
      const int oy1 = std::min(H, static_cast<int>(std::ceil(o.box.bottom())));
      for (int y = oy0; y < oy1; ++y)
        for (int x = ox0; x < ox1; ++x) {
          const double t = 60.0 * (occ_tex.at(x, y) - 0.5);
          for (int ch = 0; ch < 3; ++ch) img[(static_cast<std::size_t>(y) * W + x) * 3 + ch] = c.occluder_color[ch] + t;
        }
    }

    Frame frame(W, H, k);
    const std::uint64_t frame_key = splitmix64(c.seed * 0x100000001b3ULL + static_cast<std::uint64_t>(k));
    for (std::size_t i = 0; i < img.size(); ++i) {
      double v = img[i];
      if (c.noise_sigma > 0.0) v += c.noise_sigma * gauss[splitmix64(frame_key + i) & 0xffff];
      frame.data[i] = to_byte(v);
    }
    frames.push_back(std::move(frame));
  }
  return Sequence::from_frames(c.name, std::move(frames), std::move(gt), c.attributes);
}

std::vector<SynthConfig> standard_suite(std::uint64_t seed) {
  const auto derive = [seed](std::uint64_t salt) { return splitmix64(seed * 0x9e3779b97f4a7c15ULL + salt) % 1000000007ULL; };

  SynthConfig base;
  base.width = 320;
  base.height = 240;
  base.frames = kSuiteFrames;
  base.path = {{80.0, 80.0}, {240.0, 80.0}, {240.0, 160.0}, {80.0, 160.0}, {80.0, 80.0}};
  base.speed = 2.0;
  base.seed = derive(1);
  base.texture_seed_a = derive(2);
  base.texture_seed_b = derive(3);

  SynthConfig plain = base;
  plain.name = "plain-motion";

  SynthConfig abrupt = base;
  abrupt.name = "abrupt-drift";
  abrupt.seed = derive(11);
  abrupt.drift = {{1, 0.0}, {kAbruptDriftFrame - 1, 0.0}, {kAbruptDriftFrame, 1.0}};
  // Color switch over an unchanged texture, like a sudden lighting change.
  abrupt.texture_seed_b = abrupt.texture_seed_a;
  abrupt.attributes = {Attribute::IV};

  SynthConfig gradual = base;
  gradual.name = "gradual-drift";
  gradual.seed = derive(21);
  gradual.drift = {{1, 0.0}, {30, 0.0}, {90, 1.0}};
  gradual.attributes = {Attribute::IV, Attribute::DEF};

  SynthConfig occl = base;
  occl.name = "full-occlusion";
  occl.seed = derive(31);
  occl.speed = 1.0;
  {
    // Occluder covers the whole target path over the interval, with a margin.
    double l = 1e9, t = 1e9, r = -1e9, b = -1e9;
    for (int k = kOcclusionFirst; k <= kOcclusionLast; ++k) {
      const BBox tb = synth_target_box(occl, k);
      l = std::min(l, tb.left());
      t = std::min(t, tb.top());
      r = std::max(r, tb.right());
      b = std::max(b, tb.bottom());
    }
    constexpr double kMargin = 30.0;
    l -= kMargin;
    t -= kMargin;
    r += kMargin;
    b += kMargin;
    occl.occlusions = {{kOcclusionFirst, kOcclusionLast, BBox{0.5 * (l + r), 0.5 * (t + b), r - l, b - t}}};
  }
  occl.attributes = {Attribute::OCC};

  SynthConfig clutter = base;
  clutter.name = "clutter";
  clutter.seed = derive(41);
  clutter.clutter = 0.75;
  clutter.attributes = {Attribute::BC};

  return {plain, abrupt, gradual, occl, clutter};
}

}  // namespace acet
