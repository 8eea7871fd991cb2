#include "acet/kernels.hpp"

namespace acet::kernels::serial {

void extract_features(const Frame& frame, std::span<Sample> samples) {
  for (Sample& s : samples) s.x = feature_vector(frame, s.box, FeatureFamily::Concat);
}

void score_members(std::span<Sample> samples, std::span<const MemberState> members) {
  for (Sample& s : samples) {
    s.margins.resize(members.size());
    for (std::size_t c = 0; c < members.size(); ++c)
      s.margins[c] = score(members[c].model, s.x.slice(members[c].family));
  }
}

void update_members(std::span<MemberState> members, std::span<const std::uint8_t> active, int epochs) {
  for (std::size_t c = 0; c < members.size(); ++c)
    if (active[c]) members[c].model = update(std::move(members[c].model), members[c].buffer, epochs);
}

}  // namespace acet::kernels::serial
