#include <exception>

#include "acet/kernels.hpp"

namespace acet::kernels::omp {

namespace {

// Exceptions must not escape an OpenMP region; the first one is rethrown.
class ErrorSlot {
 public:
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (...) {
#pragma omp critical(acet_error_slot)
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::exception_ptr error_;
};

}  // namespace

void extract_features(const Frame& frame, std::span<Sample> samples) {
  ErrorSlot err;
  const long n = static_cast<long>(samples.size());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) err.run([&] { samples[j].x = feature_vector(frame, samples[j].box, FeatureFamily::Concat); });
  err.rethrow();
}

void score_members(std::span<Sample> samples, std::span<const MemberState> members) {
  ErrorSlot err;
  const long n = static_cast<long>(samples.size());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n; ++j) {
    err.run([&] {
      Sample& s = samples[j];
      s.margins.resize(members.size());
      for (std::size_t c = 0; c < members.size(); ++c)
        s.margins[c] = score(members[c].model, s.x.slice(members[c].family));
    });
  }
  err.rethrow();
}

void update_members(std::span<MemberState> members, std::span<const std::uint8_t> active, int epochs) {
  ErrorSlot err;
  const long n = static_cast<long>(members.size());
  // Buffers differ widely in length across members.
#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < n; ++c) {
    if (!active[c]) continue;
    err.run([&] { members[c].model = update(std::move(members[c].model), members[c].buffer, epochs); });
  }
  err.rethrow();
}

}  // namespace acet::kernels::omp
