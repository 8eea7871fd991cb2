#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace acet {

/// 8-bit RGB image, row-major, interleaved channels.
struct Frame {
  int width = 0;
  int height = 0;
  int index = 1;  // 1-based frame number within its sequence
  std::vector<std::uint8_t> data;

  static constexpr int kChannels = 3;

  Frame() = default;
  Frame(int w, int h, int idx = 1)
      : width(w), height(h), index(idx), data(static_cast<std::size_t>(w) * h * kChannels, 0) {}

  bool valid() const {
    return width > 0 && height > 0 && data.size() == static_cast<std::size_t>(width) * height * kChannels;
  }
  std::uint8_t at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * kChannels + c];
  }
  std::uint8_t& at(int x, int y, int c) { return data[(static_cast<std::size_t>(y) * width + x) * kChannels + c]; }
};

}  // namespace acet
