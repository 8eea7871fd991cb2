#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace acet::cli {

struct TrackOptions {
  std::filesystem::path sequence;
  std::string mode = "acet";
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out;
  std::optional<std::filesystem::path> checkpoint;
};

struct BenchOptions {
  std::filesystem::path manifest;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

struct SynthOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::string> suite;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
};

// Each command returns a process exit code and reports failures on stderr.
int cmd_track(const TrackOptions& opt);
int cmd_bench(const BenchOptions& opt);
int cmd_synth(const SynthOptions& opt);

/// Full command line entry point: `acet {track|bench|synth} ...`.
int run(int argc, const char* const* argv);

}  // namespace acet::cli
