#include "acet/config_io.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "acet/error.hpp"

namespace acet {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    kv.emplace_back(std::move(key), trim(std::string_view(t).substr(eq + 1)));
  }
  return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_key_values(in, path.string());
}

double parse_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  const auto r = std::from_chars(value.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("invalid number for '" + key + "': " + value);
  return v;
}

long parse_int(const std::string& key, const std::string& value) {
  long v = 0;
  const auto* end = value.data() + value.size();
  const auto r = std::from_chars(value.data(), end, v);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("invalid integer for '" + key + "': " + value);
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("invalid boolean for '" + key + "': " + value);
}

namespace {

using Setter = std::function<void(EnsembleConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"mode", [](EnsembleConfig& c, const std::string&, const std::string& v) { c.mode = parse_mode(v); }},
      {"n", [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.n = static_cast<int>(parse_int(k, v)); }},
      {"spans",
       [](EnsembleConfig& c, const std::string& k, const std::string& v) {
         c.spans.clear();
         for (const auto& piece : split(v, ',')) c.spans.push_back(static_cast<int>(parse_int(k, piece)));
       }},
      {"tau_member", [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.tau_member = parse_double(k, v); }},
      {"kappa_ens", [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.kappa_ens = parse_double(k, v); }},
      {"tau_occ", [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.tau_occ = parse_double(k, v); }},
      {"m", [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.m = static_cast<int>(parse_int(k, v)); }},
      {"epsilon", [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.epsilon = parse_double(k, v); }},
      {"freeze_on_occlusion",
       [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.freeze_on_occlusion = parse_bool(k, v); }},
      {"init_positives",
       [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.init_positives = static_cast<int>(parse_int(k, v)); }},
      {"init_negatives",
       [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.init_negatives = static_cast<int>(parse_int(k, v)); }},
      {"n_samples",
       [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.sampler.n_samples = static_cast<int>(parse_int(k, v)); }},
      {"sigma_xy_rel", [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.sampler.sigma_xy_rel = parse_double(k, v); }},
      {"sigma_scale", [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.sampler.sigma_scale = parse_double(k, v); }},
      {"learn_rate", [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.classifier.learn_rate = parse_double(k, v); }},
      {"reg", [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.classifier.reg = parse_double(k, v); }},
      {"epochs",
       [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.classifier.epochs = static_cast<int>(parse_int(k, v)); }},
      {"init_epochs",
       [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.classifier.init_epochs = static_cast<int>(parse_int(k, v)); }},
      {"buffer_capacity",
       [](EnsembleConfig& c, const std::string& k, const std::string& v) {
         const long cap = parse_int(k, v);
         if (cap < 1) throw ConfigError("buffer_capacity must be >= 1");
         c.classifier.buffer_capacity = static_cast<std::size_t>(cap);
       }},
      {"parallel", [](EnsembleConfig& c, const std::string& k, const std::string& v) { c.parallel = parse_bool(k, v); }},
  };
  return table;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void apply_overrides(EnsembleConfig& cfg, const KeyValues& kv) {
  const auto& table = setters();
  for (const auto& [key, value] : kv) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(cfg, key, value);
  }
}

KeyValues to_key_values(const EnsembleConfig& c) {
  std::string spans;
  for (std::size_t i = 0; i < c.spans.size(); ++i) spans += (i ? "," : "") + std::to_string(c.spans[i]);
  return {
      {"mode", std::string(to_string(c.mode))},
      {"n", std::to_string(c.n)},
      {"spans", spans},
      {"tau_member", fmt(c.tau_member)},
      {"kappa_ens", fmt(c.kappa_ens)},
      {"tau_occ", fmt(c.tau_occ)},
      {"m", std::to_string(c.m)},
      {"epsilon", fmt(c.epsilon)},
      {"freeze_on_occlusion", c.freeze_on_occlusion ? "true" : "false"},
      {"init_positives", std::to_string(c.init_positives)},
      {"init_negatives", std::to_string(c.init_negatives)},
      {"n_samples", std::to_string(c.sampler.n_samples)},
      {"sigma_xy_rel", fmt(c.sampler.sigma_xy_rel)},
      {"sigma_scale", fmt(c.sampler.sigma_scale)},
      {"learn_rate", fmt(c.classifier.learn_rate)},
      {"reg", fmt(c.classifier.reg)},
      {"epochs", std::to_string(c.classifier.epochs)},
      {"init_epochs", std::to_string(c.classifier.init_epochs)},
      {"buffer_capacity", std::to_string(c.classifier.buffer_capacity)},
      {"parallel", c.parallel ? "true" : "false"},
  };
}

}  // namespace acet
