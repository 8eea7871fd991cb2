#pragma once

#include <cstdint>
#include <span>

#include "acet/classifier.hpp"
#include "acet/ensemble.hpp"
#include "acet/image.hpp"

// Per-frame hot loops. `serial` is the reference; `omp` distributes the same
// per-item work over OpenMP threads and must produce bit-identical results.
namespace acet::kernels {

namespace serial {
void extract_features(const Frame& frame, std::span<Sample> samples);
void score_members(std::span<Sample> samples, std::span<const MemberState> members);
void update_members(std::span<MemberState> members, std::span<const std::uint8_t> active, int epochs);
}  // namespace serial

namespace omp {
void extract_features(const Frame& frame, std::span<Sample> samples);
void score_members(std::span<Sample> samples, std::span<const MemberState> members);
void update_members(std::span<MemberState> members, std::span<const std::uint8_t> active, int epochs);
}  // namespace omp

inline void extract_features(const Frame& frame, std::span<Sample> samples, bool parallel) {
  parallel ? omp::extract_features(frame, samples) : serial::extract_features(frame, samples);
}
inline void score_members(std::span<Sample> samples, std::span<const MemberState> members, bool parallel) {
  parallel ? omp::score_members(samples, members) : serial::score_members(samples, members);
}
inline void update_members(std::span<MemberState> members, std::span<const std::uint8_t> active, int epochs,
                           bool parallel) {
  parallel ? omp::update_members(members, active, epochs) : serial::update_members(members, active, epochs);
}

}  // namespace acet::kernels
