#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "acet/classifier.hpp"
#include "acet/error.hpp"

using namespace acet;

namespace {

std::vector<float> random_vec(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<float> v(n);
  for (auto& x : v) x = static_cast<float>(u(rng));
  return v;
}

TrainingEntry entry(std::vector<float> x, Label l) { return TrainingEntry{std::move(x), l, 0}; }

// Plain SGD on the regularized hinge loss with the documented step schedule.
double reference_objective(const LinearModel& m, const TrainingBuffer& buf) {
  double wsq = 0, loss = 0;
  for (double w : m.weights) wsq += w * w;
  for (const auto& t : buf.entries()) {
    double s = m.bias;
    for (std::size_t i = 0; i < t.x.size(); ++i) s += m.weights[i] * t.x[i];
    loss += std::max(0.0, 1.0 - to_int(t.label) * s);
  }
  return m.reg * wsq / 2 + loss / buf.size();
}

LinearModel reference_sgd(LinearModel m, const TrainingBuffer& buf, int epochs) {
  const LinearModel start = m;
  long k = m.steps;
  for (int e = 0; e < epochs; ++e)
    for (const auto& t : buf.entries()) {
      const double eta = m.learn_rate / (1.0 + m.reg * m.learn_rate * k);
      const double y = to_int(t.label);
      double s = m.bias;
      for (std::size_t i = 0; i < t.x.size(); ++i) s += m.weights[i] * t.x[i];
      for (auto& w : m.weights) w *= 1.0 - eta * m.reg;
      if (y * s < 1.0) {
        for (std::size_t i = 0; i < t.x.size(); ++i) m.weights[i] += eta * y * t.x[i];
        m.bias += eta * y;
      }
      ++k;
    }
  m.steps = k;
  return reference_objective(m, buf) > reference_objective(start, buf) ? start : m;
}

}  // namespace

TEST(Score, ZeroModel) {
  const LinearModel m = LinearModel::zeros(10, 0.1, 1e-3);
  const std::vector<double> x(10, 3.5);
  EXPECT_EQ(score(m, x), 0.0);
}

TEST(Score, NormalizedSelfWeightsGiveOne) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> x(560);
  for (auto& v : x) v = u(rng);
  double sq = 0;
  for (double v : x) sq += v * v;
  LinearModel m = LinearModel::zeros(560, 0.1, 1e-3);
  for (std::size_t i = 0; i < x.size(); ++i) m.weights[i] = x[i] / sq;
  EXPECT_NEAR(score(m, x), 1.0, 1e-12);
}

TEST(Score, MatchesNaiveSummation) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> dim(1, 600);
  for (int t = 0; t < 200; ++t) {
    const int n = dim(rng);
    LinearModel m = LinearModel::zeros(n, 0.1, 1e-3);
    std::vector<double> x(n);
    for (auto& w : m.weights) w = u(rng);
    for (auto& v : x) v = u(rng);
    m.bias = u(rng);
    long double want = m.bias;
    for (int i = 0; i < n; ++i) want += static_cast<long double>(m.weights[i]) * x[i];
    EXPECT_NEAR(score(m, x), static_cast<double>(want), 1e-9);
    std::vector<float> xf(x.begin(), x.end());
    long double wantf = m.bias;
    for (int i = 0; i < n; ++i) wantf += static_cast<long double>(m.weights[i]) * xf[i];
    EXPECT_NEAR(score(m, std::span<const float>(xf)), static_cast<double>(wantf), 1e-9);
  }
}

TEST(Score, DimensionMismatch) {
  const LinearModel m = LinearModel::zeros(4, 0.1, 1e-3);
  const std::vector<double> x(5, 0.0);
  EXPECT_THROW(score(m, x), ConfigError);
}

TEST(LabelSingle, Cases) {
  EXPECT_EQ(label_single(0.5, -0.2, 0.2), Label::Positive);
  EXPECT_EQ(label_single(-0.5, -0.2, 0.2), Label::Negative);
  EXPECT_EQ(label_single(0.0, -0.2, 0.2), Label::Unlabeled);
  EXPECT_EQ(label_single(0.2, -0.2, 0.2), Label::Unlabeled);
  EXPECT_EQ(label_single(-0.2, -0.2, 0.2), Label::Unlabeled);
}

TEST(LabelSingle, Monotone) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 10000; ++i) {
    double a = u(rng), b = u(rng);
    if (a < b) std::swap(a, b);
    EXPECT_GE(to_int(label_single(a, -0.2, 0.2)), to_int(label_single(b, -0.2, 0.2)));
  }
}

TEST(TrainingBuffer, WindowBoundaryIsInclusive) {
  TrainingBuffer b(2, 100);
  b.push({entry({1.0f}, Label::Positive)}, 1);
  b.push({entry({2.0f}, Label::Positive)}, 2);
  b.push({entry({3.0f}, Label::Negative)}, 3);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b.entries().front().frame, 1);
  b.push({entry({4.0f}, Label::Negative)}, 4);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b.entries().front().frame, 2);
}

TEST(TrainingBuffer, ZeroSpanKeepsCurrentFrameOnly) {
  TrainingBuffer b(0, 100);
  b.push({entry({1.0f}, Label::Positive), entry({1.0f}, Label::Negative)}, 5);
  b.push({entry({2.0f}, Label::Positive)}, 6);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.entries().front().frame, 6);
}

TEST(TrainingBuffer, EmptyPushOnlyEvicts) {
  TrainingBuffer b(1, 100);
  b.push({entry({1.0f}, Label::Positive)}, 1);
  b.push({}, 2);
  EXPECT_EQ(b.size(), 1u);
  b.push({}, 3);
  EXPECT_TRUE(b.empty());
  EXPECT_EQ(b.latest_frame(), 3);
}

TEST(TrainingBuffer, RejectsUnlabeledAndOutOfOrderFrames) {
  TrainingBuffer b(5, 100);
  EXPECT_THROW(b.push({entry({1.0f}, Label::Unlabeled)}, 1), DataError);
  b.push({entry({1.0f}, Label::Positive)}, 3);
  EXPECT_THROW(b.push({entry({1.0f}, Label::Positive)}, 2), DataError);
}

TEST(TrainingBuffer, CapacityDropsOldest) {
  TrainingBuffer b(100, 3);
  for (int f = 1; f <= 5; ++f) b.push({entry({float(f)}, Label::Positive)}, f);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b.entries().front().frame, 3);
  EXPECT_EQ(b.entries().back().frame, 5);
}

TEST(TrainingBuffer, EvictionPropertyOverRandomPushes) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> span(0, 12), count(0, 5), gap(0, 3);
  for (int t = 0; t < 50; ++t) {
    TrainingBuffer b(span(rng), 1000);
    int frame = 1;
    for (int k = 0; k < 200; ++k) {
      frame += gap(rng);
      std::vector<TrainingEntry> items;
      for (int i = count(rng); i > 0; --i) items.push_back(entry({0.0f}, Label::Negative));
      b.push(std::move(items), frame);
      for (const auto& e : b.entries()) ASSERT_LE(b.latest_frame() - e.frame, b.span());
    }
  }
}

TEST(Update, EmptyBufferIsNoOp) {
  LinearModel m = LinearModel::zeros(3, 0.1, 1e-3);
  m.weights = {1, 2, 3};
  const LinearModel r = update(m, TrainingBuffer(4, 10), 10);
  EXPECT_EQ(r.weights, m.weights);
  EXPECT_EQ(r.bias, m.bias);
  EXPECT_EQ(r.steps, 0);
}

TEST(Update, SatisfiedHingeOnlyShrinks) {
  LinearModel m = LinearModel::zeros(3, 0.1, 0.01);
  m.weights = {2.0, -1.0, 0.5};
  TrainingBuffer b(1, 10);
  b.push({entry({1.0f, 0.0f, 0.0f}, Label::Positive)}, 1);
  const LinearModel one = update(m, b, 1);
  const double eta0 = 0.1;
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(one.weights[i], m.weights[i] * (1 - eta0 * 0.01), 1e-15);
  EXPECT_EQ(one.bias, 0.0);
  EXPECT_EQ(one.steps, 1);
  // The step counter carries over, so the next call uses the decayed rate.
  const LinearModel two = update(one, b, 1);
  const double eta1 = 0.1 / (1 + 0.01 * 0.1 * 1);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(two.weights[i], one.weights[i] * (1 - eta1 * 0.01), 1e-15);
}

TEST(Update, MatchesPlainSgdReference) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  for (int t = 0; t < 20; ++t) {
    TrainingBuffer b(3, 500);
    for (int f = 1; f <= 4; ++f) {
      std::vector<TrainingEntry> items;
      for (int i = 0; i < 10; ++i) items.push_back(entry(random_vec(rng, 40), coin(rng) ? Label::Positive : Label::Negative));
      b.push(std::move(items), f);
    }
    LinearModel m = LinearModel::zeros(40, 0.1, 1e-2);
    m.steps = t * 7;
    const LinearModel got = update(m, b, 10);
    const LinearModel want = reference_sgd(m, b, 10);
    EXPECT_EQ(got.steps, want.steps);
    EXPECT_NEAR(got.bias, want.bias, 1e-9);
    for (std::size_t i = 0; i < 40; ++i) EXPECT_NEAR(got.weights[i], want.weights[i], 1e-9);
  }
}

TEST(Update, SeparableSetReachesFullTrainingAccuracy) {
  std::mt19937_64 rng(6);
  const auto dir = random_vec(rng, 16);
  TrainingBuffer b(0, 100);
  std::vector<TrainingEntry> items;
  while (items.size() < 20) {
    auto x = random_vec(rng, 16);
    double s = 0;
    for (int i = 0; i < 16; ++i) s += dir[i] * x[i];
    if (std::abs(s) < 0.2) continue;
    items.push_back(entry(std::move(x), s > 0 ? Label::Positive : Label::Negative));
  }
  b.push(items, 1);
  const LinearModel m = update(LinearModel::zeros(16, 0.1, 1e-3), b, 50);
  for (const auto& e : b.entries()) EXPECT_EQ(sign_label(score(m, std::span<const float>(e.x))), e.label);
}

TEST(Update, ObjectiveDoesNotIncrease) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    const auto dir = random_vec(rng, 24);
    TrainingBuffer b(0, 100);
    std::vector<TrainingEntry> items;
    for (int i = 0; i < 40; ++i) {
      auto x = random_vec(rng, 24);
      double s = 0;
      for (int k = 0; k < 24; ++k) s += dir[k] * x[k];
      items.push_back(entry(std::move(x), s > 0 ? Label::Positive : Label::Negative));
    }
    b.push(items, 1);
    const LinearModel m0 = LinearModel::zeros(24, 0.1, 1e-3);
    const LinearModel m1 = update(m0, b, 10);
    EXPECT_LE(hinge_objective(m1, b), hinge_objective(m0, b) + 1e-6);
    const LinearModel m2 = update(m1, b, 10);
    EXPECT_LE(hinge_objective(m2, b), hinge_objective(m1, b) + 1e-6);
    EXPECT_TRUE(m2.finite());
  }
}

TEST(Update, BitwiseReproducible) {
  std::mt19937_64 rng(8);
  TrainingBuffer b(10, 100);
  std::vector<TrainingEntry> items;
  for (int i = 0; i < 50; ++i) items.push_back(entry(random_vec(rng, 560), i % 3 ? Label::Negative : Label::Positive));
  b.push(items, 1);
  const LinearModel a = update(LinearModel::zeros(560, 0.1, 1e-3), b, 10);
  const LinearModel c = update(LinearModel::zeros(560, 0.1, 1e-3), b, 10);
  EXPECT_EQ(a.weights, c.weights);
  EXPECT_EQ(a.bias, c.bias);
}

TEST(Update, RejectsNonFiniteFeatures) {
  TrainingBuffer b(1, 10);
  b.push({entry({1.0f, std::numeric_limits<float>::quiet_NaN()}, Label::Positive)}, 1);
  EXPECT_THROW(update(LinearModel::zeros(2, 0.1, 1e-3), b, 1), DataError);
}
