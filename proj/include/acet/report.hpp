#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "acet/evaluation.hpp"

namespace acet {

/// Per-frame JSON lines; frame 1 carries the initial box.
void write_jsonl(const OpeResult& r, const std::filesystem::path& path);
/// OTB-style result file, one "x,y,w,h" per frame.
void write_rect(const OpeResult& r, const std::filesystem::path& path);

struct CurveRow {
  std::string sequence;
  std::string tracker;
  SuccessCurve curve;
};

/// sequence,tracker,auc,t0.00,...,t1.00
void write_curves_csv(const std::vector<CurveRow>& rows, const std::filesystem::path& path);

/// attribute,<tracker...>,sequences ; one column per tracker table.
void write_attribute_csv(const std::vector<std::pair<std::string, AttributeTable>>& tables,
                         const std::filesystem::path& path);

/// Success plot with one polyline per tracker and an AUC legend.
std::string render_success_svg(const std::vector<std::pair<std::string, SuccessCurve>>& curves,
                               const std::string& title);
void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace acet
