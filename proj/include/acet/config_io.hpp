#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "acet/ensemble.hpp"

namespace acet {

/// Ordered `key = value` pairs; `#` starts a comment, blank lines are skipped.
/// Repeated keys are preserved in order.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(std::istream& in, const std::string& source);
KeyValues read_key_values(const std::filesystem::path& path);

std::string trim(std::string_view s);
/// Splits on `sep` and trims every piece; empty input gives no pieces.
std::vector<std::string> split(std::string_view s, char sep);

double parse_double(const std::string& key, const std::string& value);
long parse_int(const std::string& key, const std::string& value);
bool parse_bool(const std::string& key, const std::string& value);

/// Applies overrides to any EnsembleConfig field. Unknown keys throw a
/// ConfigError naming the key.
void apply_overrides(EnsembleConfig& cfg, const KeyValues& kv);

/// Every field as key/value text; apply_overrides(default, to_key_values(c))
/// reproduces c.
KeyValues to_key_values(const EnsembleConfig& cfg);

}  // namespace acet
