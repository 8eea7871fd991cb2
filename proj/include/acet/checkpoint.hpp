#pragma once

#include <filesystem>

#include "json.hpp"

#include "acet/classifier.hpp"
#include "acet/tracker.hpp"

namespace acet {

inline constexpr int kModelSnapshotVersion = 1;
inline constexpr int kCheckpointVersion = 1;

// Model snapshot: {"format": "acet-model", "version", "dim", "weights", "bias", "learn_rate", "reg"}.
nlohmann::json model_to_json(const LinearModel& model);
LinearModel model_from_json(const nlohmann::json& j);

// Tracker checkpoint: config, members with models and buffers, state box,
// frame index and the generator state, stored as CBOR.
nlohmann::json checkpoint_to_json(const TrackerState& state);
TrackerState checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const TrackerState& state, const std::filesystem::path& path);
TrackerState load_checkpoint(const std::filesystem::path& path);

}  // namespace acet
