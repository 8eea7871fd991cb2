#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "acet/geometry.hpp"
#include "acet/image.hpp"

namespace acet {

enum class Attribute { IV, SV, IPR, OPR, FM, MB, DEF, LR, OCC, OV, BC };

inline constexpr std::array kAllAttributes{Attribute::IV, Attribute::SV,  Attribute::IPR, Attribute::OPR,
                                           Attribute::FM, Attribute::MB,  Attribute::DEF, Attribute::LR,
                                           Attribute::OCC, Attribute::OV, Attribute::BC};

using AttributeSet = std::set<Attribute>;

std::string_view to_string(Attribute a);
Attribute parse_attribute(std::string_view text);
/// Tags separated by commas and/or whitespace.
AttributeSet parse_attributes(std::string_view text);
std::string to_string(const AttributeSet& attrs);

/// Ordered frames with one ground-truth box each. Frames are either held in
/// memory or decoded from image files on demand through a small LRU window.
/// Copies share the same frame source.
class Sequence {
 public:
  static Sequence from_frames(std::string name, std::vector<Frame> frames, std::vector<BBox> gt, AttributeSet attrs);
  static Sequence from_files(std::string name, std::vector<std::filesystem::path> files, std::vector<BBox> gt,
                             AttributeSet attrs, std::size_t cache_frames = 16);

  const std::string& name() const { return name_; }
  std::size_t size() const { return gt_.size(); }
  const std::vector<BBox>& ground_truth() const { return gt_; }
  const AttributeSet& attributes() const { return attrs_; }

  /// Frame at 0-based position k; its index field is k + 1. Thread-safe.
  std::shared_ptr<const Frame> frame(std::size_t k) const;

 private:
  class Source;

  Sequence(std::string name, std::vector<BBox> gt, AttributeSet attrs, std::shared_ptr<Source> source);

  std::string name_;
  std::vector<BBox> gt_;
  AttributeSet attrs_;
  std::shared_ptr<Source> source_;
};

inline constexpr const char* kGroundTruthFile = "groundtruth_rect.txt";
inline constexpr const char* kAttributesFile = "attrs.txt";
inline constexpr const char* kImageDir = "img";

/// Parses one ground-truth line "x,y,w,h" (commas, tabs or spaces; 1-based
/// top-left). Throws FormatError mentioning `where`.
BBox parse_ground_truth_line(std::string_view line, const std::string& where);

/// Loads `dir/img/*.{jpg,jpeg,png}` (sorted by name), `dir/groundtruth_rect.txt`
/// and the optional `dir/attrs.txt`. The sequence is named after the directory.
Sequence load_otb_sequence(const std::filesystem::path& dir);

/// Writes PNG frames as img/0001.png..., the ground truth and attrs.txt.
void write_otb_sequence(const Sequence& seq, const std::filesystem::path& dir);

Frame decode_image(const std::filesystem::path& path, int index);
void encode_png(const Frame& frame, const std::filesystem::path& path);

}  // namespace acet
