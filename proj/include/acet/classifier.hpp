#pragma once

#include <cstddef>
#include <deque>
#include <span>
#include <vector>

#include "acet/features.hpp"

namespace acet {

enum class Label : int { Negative = -1, Unlabeled = 0, Positive = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }
/// Sign of a margin as a label; sign(0) is Unlabeled.
Label sign_label(double margin);

/// Linear scorer h(x) = <w, x> + b trained by SGD on the L2-regularized hinge loss.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  double learn_rate = 0.1;
  double reg = 1e-3;
  long steps = 0;  // SGD steps taken so far; drives the learn-rate decay

  static LinearModel zeros(std::size_t dim, double learn_rate, double reg);
  bool finite() const;
};

double dot(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const float> b);

/// Throws ConfigError on a dimension mismatch.
double score(const LinearModel& model, std::span<const double> x);
double score(const LinearModel& model, std::span<const float> x);

/// +1 above tau_u, -1 below tau_l, 0 on the closed band in between.
Label label_single(double margin, double tau_l, double tau_u);

struct TrainingEntry {
  std::vector<float> x;  // single precision halves the memory traffic of update()
  Label label = Label::Positive;
  int frame = 0;
};

/// Training samples of one member over its memory span: entries from frames
/// older than (latest - span) are evicted on every push, and at most
/// `capacity` entries are kept (oldest first out).
class TrainingBuffer {
 public:
  TrainingBuffer() = default;
  TrainingBuffer(int span, std::size_t capacity);

  /// Appends items and evicts stale entries. Throws DataError on a zero label
  /// or a frame index older than the latest pushed frame.
  void push(std::vector<TrainingEntry> items, int frame);

  int span() const { return span_; }
  std::size_t capacity() const { return capacity_; }
  int latest_frame() const { return latest_frame_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::deque<TrainingEntry>& entries() const { return entries_; }

  // Restores a buffer verbatim (checkpoint loading).
  void restore(std::deque<TrainingEntry> entries, int latest_frame);

 private:
  void evict();

  int span_ = 0;
  std::size_t capacity_ = 0;
  int latest_frame_ = 0;
  std::deque<TrainingEntry> entries_;
};

/// `epochs` passes of SGD over the buffer in storage order, with step size
/// learn_rate / (1 + reg * learn_rate * k) where k counts every step the
/// model has taken, across calls. Warm-starts from `model`; an empty buffer
/// returns it unchanged, and so does a pass that ends with a higher
/// hinge_objective over the buffer than it started with.
LinearModel update(LinearModel model, const TrainingBuffer& buffer, int epochs);

/// reg/2 |w|^2 + mean hinge loss over the buffer.
double hinge_objective(const LinearModel& model, const TrainingBuffer& buffer);

struct MemberState {
  LinearModel model;
  TrainingBuffer buffer;
  FeatureFamily family = FeatureFamily::Concat;
  double weight = 1.0;  // alpha
  int last_error = 0;
  double tau_u = 0.2;

  double tau_l() const { return -tau_u; }
};

}  // namespace acet
