#include "acet/checkpoint.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "acet/config_io.hpp"
#include "acet/error.hpp"

namespace acet {

using nlohmann::json;

namespace {

FeatureFamily parse_family(const std::string& s) {
  if (s == "grad") return FeatureFamily::Grad;
  if (s == "color") return FeatureFamily::Color;
  if (s == "concat") return FeatureFamily::Concat;
  throw FormatError("unknown feature family '" + s + "'");
}

void expect_format(const json& j, const char* format, int version) {
  if (!j.is_object() || j.value("format", "") != format) throw FormatError(std::string("not an ") + format + " record");
  const int v = j.value("version", -1);
  if (v != version)
    throw FormatError(std::string(format) + " version " + std::to_string(v) + " is not supported (expected " +
                      std::to_string(version) + ")");
}

}  // namespace

json model_to_json(const LinearModel& model) {
  return json{{"format", "acet-model"},      {"version", kModelSnapshotVersion}, {"dim", model.weights.size()},
              {"weights", model.weights},    {"bias", model.bias},               {"learn_rate", model.learn_rate},
              {"reg", model.reg},            {"steps", model.steps}};
}

LinearModel model_from_json(const json& j) {
  try {
    expect_format(j, "acet-model", kModelSnapshotVersion);
    LinearModel m;
    m.weights = j.at("weights").get<std::vector<double>>();
    if (m.weights.size() != j.at("dim").get<std::size_t>()) throw FormatError("model snapshot dimension mismatch");
    m.bias = j.at("bias").get<double>();
    m.learn_rate = j.at("learn_rate").get<double>();
    m.reg = j.at("reg").get<double>();
    m.steps = j.at("steps").get<long>();
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model snapshot: ") + e.what());
  }
}

json checkpoint_to_json(const TrackerState& st) {
  json cfg = json::object();
  for (const auto& [k, v] : to_key_values(st.config)) cfg[k] = v;

  json members = json::array();
  for (const auto& m : st.members) {
    json entries = json::array();
    for (const auto& e : m.buffer.entries()) entries.push_back({{"frame", e.frame}, {"label", to_int(e.label)}, {"x", e.x}});
    members.push_back({{"family", std::string(to_string(m.family))},
                       {"weight", m.weight},
                       {"last_error", m.last_error},
                       {"tau_u", m.tau_u},
                       {"model", model_to_json(m.model)},
                       {"buffer",
                        {{"span", m.buffer.span()},
                         {"capacity", m.buffer.capacity()},
                         {"latest_frame", m.buffer.latest_frame()},
                         {"entries", std::move(entries)}}}});
  }
  std::ostringstream rng;
  rng << st.rng;
  return json{{"format", "acet-checkpoint"},
              {"version", kCheckpointVersion},
              {"config", std::move(cfg)},
              {"members", std::move(members)},
              {"box", {st.box.cx, st.box.cy, st.box.w, st.box.h}},
              {"frame_index", st.frame_index},
              {"frame_width", st.frame_width},
              {"frame_height", st.frame_height},
              {"rng", rng.str()}};
}

TrackerState checkpoint_from_json(const json& j) {
  try {
    expect_format(j, "acet-checkpoint", kCheckpointVersion);
    TrackerState st;
    KeyValues kv;
    for (const auto& [k, v] : j.at("config").items()) kv.emplace_back(k, v.get<std::string>());
    apply_overrides(st.config, kv);
    for (const auto& jm : j.at("members")) {
      MemberState m;
      m.family = parse_family(jm.at("family").get<std::string>());
      m.weight = jm.at("weight").get<double>();
      m.last_error = jm.at("last_error").get<int>();
      m.tau_u = jm.at("tau_u").get<double>();
      m.model = model_from_json(jm.at("model"));
      const json& jb = jm.at("buffer");
      m.buffer = TrainingBuffer(jb.at("span").get<int>(), jb.at("capacity").get<std::size_t>());
      std::deque<TrainingEntry> entries;
      for (const auto& je : jb.at("entries")) {
        const int label = je.at("label").get<int>();
        if (label != 1 && label != -1) throw FormatError("checkpoint buffer entry has label " + std::to_string(label));
        entries.push_back({je.at("x").get<std::vector<float>>(), static_cast<Label>(label), je.at("frame").get<int>()});
      }
      m.buffer.restore(std::move(entries), jb.at("latest_frame").get<int>());
      st.members.push_back(std::move(m));
    }
    const auto box = j.at("box").get<std::vector<double>>();
    if (box.size() != 4) throw FormatError("checkpoint box must have four values");
    st.box = BBox{box[0], box[1], box[2], box[3]};
    st.frame_index = j.at("frame_index").get<int>();
    st.frame_width = j.at("frame_width").get<int>();
    st.frame_height = j.at("frame_height").get<int>();
    std::istringstream rng(j.at("rng").get<std::string>());
    rng >> st.rng;
    if (!rng) throw FormatError("checkpoint generator state is unreadable");
    validate(st.config);
    if (static_cast<int>(st.members.size()) != st.config.n) throw FormatError("checkpoint member count mismatch");
    return st;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint config: ") + e.what());
  }
}

void save_checkpoint(const TrackerState& state, const std::filesystem::path& path) {
  const auto bytes = json::to_cbor(checkpoint_to_json(state));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write checkpoint " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

TrackerState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json j;
  try {
    j = json::from_cbor(bytes);
  } catch (const json::exception& e) {
    throw FormatError("checkpoint " + path.string() + " is not valid CBOR: " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace acet
