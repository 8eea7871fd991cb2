#include "acet/report.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "acet/error.hpp"

namespace acet {

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_text(const std::string& text, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << text;
}

void write_jsonl(const OpeResult& r, const std::filesystem::path& path) {
  auto out = open_out(path);
  const BBox& b0 = r.boxes.front();
  nlohmann::json first{{"frame", 1}, {"box", {b0.left() + 1.0, b0.top() + 1.0, b0.w, b0.h}}, {"occluded", false},
                       {"init", true}};
  out << first.dump() << '\n';
  for (const auto& o : r.outputs) out << to_json_line(o) << '\n';
}

void write_rect(const OpeResult& r, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (const auto& b : r.boxes) out << to_otb_string(b) << '\n';
}

void write_curves_csv(const std::vector<CurveRow>& rows, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "sequence,tracker,auc";
  for (double t : success_thresholds()) out << ",t" << fixed(t, 2);
  out << '\n';
  for (const auto& r : rows) {
    out << r.sequence << ',' << r.tracker << ',' << fixed(r.curve.auc);
    for (double v : r.curve.success_rate) out << ',' << fixed(v);
    out << '\n';
  }
}

void write_attribute_csv(const std::vector<std::pair<std::string, AttributeTable>>& tables,
                         const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "attribute";
  for (const auto& [tracker, _] : tables) out << ',' << tracker;
  out << ",sequences\n";
  if (tables.empty()) return;
  // Row set is identical across trackers evaluated on the same sequences.
  for (std::size_t i = 0; i < tables.front().second.rows.size(); ++i) {
    const auto& row = tables.front().second.rows[i];
    out << row.name;
    for (const auto& [tracker, table] : tables) out << ',' << fixed(table.rows.at(i).auc, 4);
    out << ',' << row.sequences << '\n';
  }
}

std::string render_success_svg(const std::vector<std::pair<std::string, SuccessCurve>>& curves,
                               const std::string& title) {
  static const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  constexpr double W = 520, H = 400, L = 60, R = 170, T = 40, B = 50;
  const double pw = W - L - R;
  const double ph = H - T - B;
  const auto px = [&](double x) { return fixed(L + x * pw, 2); };
  const auto py = [&](double y) { return fixed(T + (1.0 - y) * ph, 2); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << fixed(L + pw / 2, 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << title
    << "</text>\n";
  for (int i = 0; i <= 10; ++i) {
    const double v = i / 10.0;
    s << "<line x1=\"" << px(v) << "\" y1=\"" << py(0) << "\" x2=\"" << px(v) << "\" y2=\"" << py(1)
      << "\" stroke=\"#e0e0e0\"/>\n";
    s << "<line x1=\"" << px(0) << "\" y1=\"" << py(v) << "\" x2=\"" << px(1) << "\" y2=\"" << py(v)
      << "\" stroke=\"#e0e0e0\"/>\n";
    if (i % 2 == 0) {
      s << "<text x=\"" << px(v) << "\" y=\"" << fixed(T + ph + 16, 2) << "\" text-anchor=\"middle\">" << fixed(v, 1)
        << "</text>\n";
      s << "<text x=\"" << fixed(L - 6, 2) << "\" y=\"" << fixed(T + (1.0 - v) * ph + 4, 2)
        << "\" text-anchor=\"end\">" << fixed(v, 1) << "</text>\n";
    }
  }
  s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  s << "<text x=\"" << fixed(L + pw / 2, 2) << "\" y=\"" << fixed(H - 12, 2)
    << "\" text-anchor=\"middle\">Overlap threshold</text>\n";
  s << "<text x=\"16\" y=\"" << fixed(T + ph / 2, 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << fixed(T + ph / 2, 2) << ")\">Success rate</text>\n";

  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& [name, c] = curves[i];
    const char* color = kPalette[i % std::size(kPalette)];
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (int k = 0; k < kSuccessThresholds; ++k) s << (k ? " " : "") << px(c.thresholds[k]) << ',' << py(c.success_rate[k]);
    s << "\"/>\n";
    const double ly = T + 16 + 20.0 * static_cast<double>(i);
    s << "<line x1=\"" << fixed(L + pw + 12, 2) << "\" y1=\"" << fixed(ly, 2) << "\" x2=\"" << fixed(L + pw + 36, 2)
      << "\" y2=\"" << fixed(ly, 2) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << fixed(L + pw + 42, 2) << "\" y=\"" << fixed(ly + 4, 2) << "\">" << name << " ["
      << fixed(c.auc, 3) << "]</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace acet
