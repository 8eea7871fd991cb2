#include "acet/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acet/error.hpp"

namespace acet {

Label sign_label(double margin) {
  if (margin > 0.0) return Label::Positive;
  if (margin < 0.0) return Label::Negative;
  return Label::Unlabeled;
}

LinearModel LinearModel::zeros(std::size_t dim, double learn_rate, double reg) {
  LinearModel m;
  m.weights.assign(dim, 0.0);
  m.learn_rate = learn_rate;
  m.reg = reg;
  return m;
}

bool LinearModel::finite() const {
  return std::isfinite(bias) && std::all_of(weights.begin(), weights.end(), [](double v) { return std::isfinite(v); });
}

namespace {

template <class T>
double dot_impl(std::span<const double> a, std::span<const T> b) {
  const std::size_t n = std::min(a.size(), b.size());
  // Sixteen independent partial sums in a fixed order: enough parallel FMA
  // chains to hide latency, and still deterministic.
  constexpr std::size_t kLanes = 16;
  double s[kLanes] = {};
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes)
    for (std::size_t l = 0; l < kLanes; ++l) s[l] += a[i + l] * static_cast<double>(b[i + l]);
  for (; i < n; ++i) s[i % kLanes] += a[i] * static_cast<double>(b[i]);
  for (std::size_t w = kLanes / 2; w > 0; w /= 2)
    for (std::size_t l = 0; l < w; ++l) s[l] += s[l + w];
  return s[0];
}

template <class T>
double score_impl(const LinearModel& model, std::span<const T> x) {
  if (x.size() != model.weights.size())
    throw ConfigError("feature dimension " + std::to_string(x.size()) + " does not match model dimension " +
                      std::to_string(model.weights.size()));
  return dot_impl<T>(model.weights, x) + model.bias;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) { return dot_impl<double>(a, b); }
double dot(std::span<const double> a, std::span<const float> b) { return dot_impl<float>(a, b); }

double score(const LinearModel& model, std::span<const double> x) { return score_impl<double>(model, x); }
double score(const LinearModel& model, std::span<const float> x) { return score_impl<float>(model, x); }

Label label_single(double margin, double tau_l, double tau_u) {
  if (margin > tau_u) return Label::Positive;
  if (margin < tau_l) return Label::Negative;
  return Label::Unlabeled;
}

TrainingBuffer::TrainingBuffer(int span, std::size_t capacity) : span_(span), capacity_(capacity) {
  if (span < 0) throw ConfigError("memory span must be >= 0");
  if (capacity == 0) throw ConfigError("buffer capacity must be >= 1");
}

void TrainingBuffer::push(std::vector<TrainingEntry> items, int frame) {
  if (frame < latest_frame_)
    throw DataError("frame index " + std::to_string(frame) + " precedes latest buffered frame " +
                    std::to_string(latest_frame_));
  for (auto& item : items) {
    if (item.label == Label::Unlabeled) throw DataError("unlabeled samples cannot enter a training buffer");
    item.frame = frame;
  }
  latest_frame_ = frame;
  for (auto& item : items) entries_.push_back(std::move(item));
  evict();
}

void TrainingBuffer::evict() {
  while (!entries_.empty() && latest_frame_ - entries_.front().frame > span_) entries_.pop_front();
  while (entries_.size() > capacity_) entries_.pop_front();
}

void TrainingBuffer::restore(std::deque<TrainingEntry> entries, int latest_frame) {
  entries_ = std::move(entries);
  latest_frame_ = latest_frame;
}

LinearModel update(LinearModel model, const TrainingBuffer& buffer, int epochs) {
  if (buffer.empty() || epochs <= 0) return model;
  const std::size_t dim = model.weights.size();
  for (const auto& e : buffer.entries()) {
    if (e.x.size() != dim) throw ConfigError("training sample dimension does not match model");
    for (float v : e.x)
      if (!std::isfinite(v)) throw DataError("non-finite feature value in training buffer");
  }

  const LinearModel before = model;
  const double objective_before = hinge_objective(model, buffer);

  // w = scale * v keeps the per-step weight decay O(1).
  std::vector<double>& v = model.weights;
  double scale = 1.0;
  double& bias = model.bias;
  const double lr = model.learn_rate;
  const double reg = model.reg;
  long k = model.steps;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& e : buffer.entries()) {
      const double eta = lr / (1.0 + reg * lr * static_cast<double>(k));
      const double y = to_int(e.label);
      const double margin = y * (scale * dot(v, std::span<const float>(e.x)) + bias);
      scale *= 1.0 - eta * reg;
      if (margin < 1.0) {
        const double g = eta * y / scale;
        const float* x = e.x.data();
        for (std::size_t i = 0; i < dim; ++i) v[i] += g * x[i];
        bias += eta * y;
      }
      ++k;
      if (scale < 1e-9) {
        for (double& w : v) w *= scale;
        scale = 1.0;
      }
    }
  }
  for (double& w : v) w *= scale;
  model.steps = k;
  if (!model.finite()) throw DataError("model diverged to non-finite weights");
  // A pass that ends above its starting objective is discarded.
  if (hinge_objective(model, buffer) > objective_before) return before;
  return model;
}

double hinge_objective(const LinearModel& model, const TrainingBuffer& buffer) {
  const double wsq = dot(model.weights, model.weights);
  double loss = 0.0;
  for (const auto& e : buffer.entries()) loss += std::max(0.0, 1.0 - to_int(e.label) * score(model, std::span<const float>(e.x)));
  const double n = static_cast<double>(std::max<std::size_t>(buffer.size(), 1));
  return 0.5 * model.reg * wsq + loss / n;
}

}  // namespace acet
