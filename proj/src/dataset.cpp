#include "acet/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <list>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "acet/error.hpp"

namespace fs = std::filesystem;

namespace acet {

std::string_view to_string(Attribute a) {
  switch (a) {
    case Attribute::IV: return "IV";
    case Attribute::SV: return "SV";
    case Attribute::IPR: return "IPR";
    case Attribute::OPR: return "OPR";
    case Attribute::FM: return "FM";
    case Attribute::MB: return "MB";
    case Attribute::DEF: return "DEF";
    case Attribute::LR: return "LR";
    case Attribute::OCC: return "OCC";
    case Attribute::OV: return "OV";
    case Attribute::BC: return "BC";
  }
  return "?";
}

Attribute parse_attribute(std::string_view text) {
  std::string up(text);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return std::toupper(ch); });
  for (Attribute a : kAllAttributes)
    if (to_string(a) == up) return a;
  throw FormatError("unknown attribute tag '" + std::string(text) + "'");
}

AttributeSet parse_attributes(std::string_view text) {
  AttributeSet out;
  std::string token;
  for (char ch : std::string(text) + ' ') {
    if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
      if (!token.empty()) out.insert(parse_attribute(token));
      token.clear();
    } else {
      token += ch;
    }
  }
  return out;
}

std::string to_string(const AttributeSet& attrs) {
  std::string out;
  for (Attribute a : attrs) {
    if (!out.empty()) out += ',';
    out += to_string(a);
  }
  return out;
}

class Sequence::Source {
 public:
  explicit Source(std::vector<Frame> frames) {
    for (auto& f : frames) frames_.push_back(std::make_shared<const Frame>(std::move(f)));
  }
  Source(std::vector<fs::path> files, std::size_t cache) : files_(std::move(files)), cache_(std::max<std::size_t>(cache, 1)) {}

  std::shared_ptr<const Frame> get(std::size_t k) {
    if (files_.empty()) return frames_.at(k);
    if (k >= files_.size()) throw std::out_of_range("frame index out of range");
    {
      std::lock_guard lock(mu_);
      if (auto it = index_.find(k); it != index_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second);
        return it->second->second;
      }
    }
    // Decode outside the lock so distinct frames decode concurrently.
    auto frame = std::make_shared<const Frame>(decode_image(files_[k], static_cast<int>(k) + 1));
    std::lock_guard lock(mu_);
    if (auto it = index_.find(k); it != index_.end()) return it->second->second;
    lru_.emplace_front(k, frame);
    index_[k] = lru_.begin();
    while (lru_.size() > cache_) {
      index_.erase(lru_.back().first);
      lru_.pop_back();
    }
    return frame;
  }

 private:
  std::vector<std::shared_ptr<const Frame>> frames_;
  std::vector<fs::path> files_;
  std::size_t cache_ = 1;
  std::mutex mu_;
  std::list<std::pair<std::size_t, std::shared_ptr<const Frame>>> lru_;
  std::unordered_map<std::size_t, decltype(lru_)::iterator> index_;
};

Sequence::Sequence(std::string name, std::vector<BBox> gt, AttributeSet attrs, std::shared_ptr<Source> source)
    : name_(std::move(name)), gt_(std::move(gt)), attrs_(std::move(attrs)), source_(std::move(source)) {}

namespace {

void check_sequence(std::size_t frames, const std::vector<BBox>& gt) {
  if (frames != gt.size())
    throw FormatError("sequence has " + std::to_string(frames) + " frames but " + std::to_string(gt.size()) +
                      " ground-truth boxes");
  if (gt.size() < 2) throw FormatError("a sequence needs at least two frames");
  for (const auto& b : gt)
    if (!b.valid()) throw FormatError("ground-truth box with non-positive area");
}

}  // namespace

Sequence Sequence::from_frames(std::string name, std::vector<Frame> frames, std::vector<BBox> gt, AttributeSet attrs) {
  check_sequence(frames.size(), gt);
  for (std::size_t k = 0; k < frames.size(); ++k) frames[k].index = static_cast<int>(k) + 1;
  return Sequence(std::move(name), std::move(gt), std::move(attrs), std::make_shared<Source>(std::move(frames)));
}

Sequence Sequence::from_files(std::string name, std::vector<fs::path> files, std::vector<BBox> gt, AttributeSet attrs,
                              std::size_t cache_frames) {
  check_sequence(files.size(), gt);
  return Sequence(std::move(name), std::move(gt), std::move(attrs),
                  std::make_shared<Source>(std::move(files), cache_frames));
}

std::shared_ptr<const Frame> Sequence::frame(std::size_t k) const { return source_->get(k); }

BBox parse_ground_truth_line(std::string_view line, const std::string& where) {
  std::string text(line);
  std::replace_if(text.begin(), text.end(), [](char ch) { return ch == ',' || ch == '\t' || ch == ';'; }, ' ');
  std::istringstream is(text);
  double v[4];
  for (double& x : v)
    if (!(is >> x)) throw FormatError(where + ": expected four numbers x,y,w,h");
  std::string rest;
  if (is >> rest) throw FormatError(where + ": unexpected trailing text '" + rest + "'");
  if (!(v[2] > 0.0 && v[3] > 0.0)) throw FormatError(where + ": box width and height must be positive");
  return BBox::from_otb(v[0], v[1], v[2], v[3]);
}

Sequence load_otb_sequence(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw FormatError("sequence directory " + dir.string() + " does not exist");
  const fs::path gt_path = dir / kGroundTruthFile;
  std::ifstream gt_in(gt_path);
  if (!gt_in) throw FormatError("missing ground-truth file " + gt_path.string());

  std::vector<BBox> gt;
  std::string line;
  int lineno = 0;
  while (std::getline(gt_in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    gt.push_back(parse_ground_truth_line(line, gt_path.string() + ":" + std::to_string(lineno)));
  }

  const fs::path img_dir = dir / kImageDir;
  if (!fs::is_directory(img_dir)) throw FormatError("missing image directory " + img_dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(img_dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (ext == ".jpg" || ext == ".jpeg" || ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.size() != gt.size())
    throw FormatError(gt_path.string() + " lists " + std::to_string(gt.size()) + " boxes but " + img_dir.string() +
                      " holds " + std::to_string(files.size()) + " images");

  AttributeSet attrs;
  if (std::ifstream attr_in(dir / kAttributesFile); attr_in) {
    std::stringstream ss;
    ss << attr_in.rdbuf();
    attrs = parse_attributes(ss.str());
  }
  std::string name = dir.filename().string();
  if (name.empty()) name = dir.parent_path().filename().string();
  return Sequence::from_files(std::move(name), std::move(files), std::move(gt), std::move(attrs));
}

void write_otb_sequence(const Sequence& seq, const fs::path& dir) {
  fs::create_directories(dir / kImageDir);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "%04zu.png", k + 1);
    encode_png(*seq.frame(k), dir / kImageDir / name);
  }
  std::ofstream gt(dir / kGroundTruthFile);
  for (const auto& b : seq.ground_truth()) gt << to_otb_string(b) << '\n';
  std::ofstream attrs(dir / kAttributesFile);
  attrs << to_string(seq.attributes()) << '\n';
  if (!gt || !attrs) throw FormatError("failed writing sequence to " + dir.string());
}

Frame decode_image(const fs::path& path, int index) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw FormatError("cannot decode image " + path.string());
  Frame f(bgr.cols, bgr.rows, index);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      f.at(x, y, 0) = row[x][2];
      f.at(x, y, 1) = row[x][1];
      f.at(x, y, 2) = row[x][0];
    }
  }
  return f;
}

void encode_png(const Frame& frame, const fs::path& path) {
  cv::Mat bgr(frame.height, frame.width, CV_8UC3);
  for (int y = 0; y < frame.height; ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < frame.width; ++x) row[x] = cv::Vec3b(frame.at(x, y, 2), frame.at(x, y, 1), frame.at(x, y, 0));
  }
  if (!cv::imwrite(path.string(), bgr)) throw FormatError("cannot write image " + path.string());
}

}  // namespace acet
