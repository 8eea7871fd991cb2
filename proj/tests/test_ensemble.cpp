#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <random>

#include "acet/ensemble.hpp"
#include "acet/error.hpp"
#include "oracle.hpp"

using namespace acet;

namespace {

std::vector<Sample> samples_from(const std::vector<std::vector<double>>& margins) {
  std::vector<Sample> out(margins.size());
  for (std::size_t j = 0; j < margins.size(); ++j) {
    out[j].margins = margins[j];
    out[j].box = BBox{10.0 + j, 20.0, 10, 10};
  }
  return out;
}

std::vector<int> labels_of(const std::vector<Sample>& s) {
  std::vector<int> l;
  for (const auto& x : s) l.push_back(to_int(x.label));
  return l;
}

std::vector<std::vector<double>> random_margins(std::mt19937_64& rng, int n, int count) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> special(0, 9);
  std::vector<std::vector<double>> m(count, std::vector<double>(n));
  for (auto& row : m)
    for (auto& v : row) {
      const int k = special(rng);
      v = k == 0 ? 0.0 : k == 1 ? 0.2 : k == 2 ? -0.2 : u(rng);
    }
  return m;
}

}  // namespace

TEST(UncertaintyFlags, Examples) {
  EXPECT_EQ(uncertainty_flags(std::vector<double>{0.5, -0.5, 0.0}, 0.2), (Flags{1, 1, 0}));
  EXPECT_EQ(uncertainty_flags(std::vector<double>{0, 0, 0}, 0.2), (Flags{0, 0, 0}));
  EXPECT_EQ(uncertainty_flags(std::vector<double>{0.0, 0.01, -3.0}, 0.0), (Flags{1, 1, 1}));
  EXPECT_EQ(uncertainty_flags(std::vector<double>{0.2, -0.2}, 0.2), (Flags{1, 1}));
}

TEST(UncertaintyFlags, ComplementOfSingleLabelBand) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 10000; ++i) {
    const double h = u(rng);
    if (h == 0.2 || h == -0.2) continue;
    const Flags z = uncertainty_flags(std::vector<double>{h}, 0.2);
    EXPECT_EQ(z[0] == 1, label_single(h, -0.2, 0.2) != Label::Unlabeled);
  }
}

TEST(EnsembleScore, Examples) {
  const std::vector<double> a{1, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(ensemble_score(std::vector<double>{0.9, -0.4, 0.9}, Flags{1, 1, 0}, a), 0.5);
  EXPECT_DOUBLE_EQ(ensemble_score(std::vector<double>{0.9, -0.4, 0.9}, Flags{0, 0, 0}, a), 0.0);
  EXPECT_DOUBLE_EQ(ensemble_score(std::vector<double>{0.1, 2, 3, 4}, Flags{1, 1, 1, 1}, std::vector<double>(4, 1.0)), 4.0);
}

TEST(EnsembleLabel, Examples) {
  const Flags z{1, 1};
  const std::vector<double> a{1, 1};
  EXPECT_EQ(ensemble_label(0.5, z, a, 0.25), Label::Unlabeled);
  EXPECT_EQ(ensemble_label(1.5, z, a, 0.25), Label::Positive);
  EXPECT_EQ(ensemble_label(-1.5, z, a, 0.25), Label::Negative);
  EXPECT_EQ(ensemble_label(5.0, Flags{0, 0}, a, 0.25), Label::Unlabeled);
}

TEST(Informativeness, Popcount) {
  EXPECT_EQ(informativeness(Flags{1, 1, 0}), 2);
  EXPECT_EQ(informativeness(Flags{0, 0, 0}), 0);
  EXPECT_EQ(informativeness(Flags{1, 1, 1, 1}), 4);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const unsigned bits = static_cast<unsigned>(rng()) & 0x3f;
    Flags z;
    for (int c = 0; c < 6; ++c) z.push_back((bits >> c) & 1u);
    EXPECT_EQ(informativeness(z), std::popcount(bits));
  }
}

TEST(SelectTrainingSet, AscendingInformativeness) {
  std::vector<Sample> s(3);
  const int eta[3] = {4, 1, 3};
  for (int j = 0; j < 3; ++j) {
    s[j].z = Flags(4, 0);
    s[j].z[0] = 1;
    for (int c = 1; c < eta[j]; ++c) s[j].z[c] = 1;
    s[j].informativeness = eta[j];
    s[j].label = Label::Positive;
    s[j].score = 1.0;
  }
  EXPECT_EQ(select_training_set(0, s, 2), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(select_training_set(0, s, 10), (std::vector<std::size_t>{1, 2, 0}));
  EXPECT_TRUE(select_training_set(0, std::span<const Sample>{}, 5).empty());
  for (auto& x : s) x.label = Label::Unlabeled;
  EXPECT_TRUE(select_training_set(0, s, 5).empty());
}

TEST(ClassifierError, Examples) {
  auto s = samples_from({{1.0}, {1.0}, {1.0}});
  s[0].label = Label::Positive;
  s[1].label = Label::Negative;
  s[2].label = Label::Positive;
  const MemberError e = classifier_error(0, s);
  EXPECT_EQ(e.errors, 1);
  EXPECT_EQ(e.labeled, 3);
  EXPECT_DOUBLE_EQ(e.fraction(), 1.0 / 3.0);
  for (auto& x : s) x.label = Label::Unlabeled;
  EXPECT_EQ(classifier_error(0, s).errors, 0);
  EXPECT_EQ(classifier_error(0, s).fraction(), 0.0);
}

TEST(ClassifierWeight, Examples) {
  for (double a : classifier_weight(std::vector<double>{1, 1, 1, 1}, 1e-12)) EXPECT_NEAR(a, 0.75, 1e-9);
  const auto a = classifier_weight(std::vector<double>{2, 1, 1}, 0.01);
  EXPECT_NEAR(a[0], 1 - 2.01 / 4.01, 1e-15);
  EXPECT_NEAR(a[0], 0.4988, 5e-5);
  EXPECT_NEAR(a[1], 0.7481, 5e-5);
  EXPECT_NEAR(a[2], 0.7481, 5e-5);
  EXPECT_EQ(classifier_weight(std::vector<double>{0, 0, 0}, 1e-6), (std::vector<double>{1, 1, 1}));
}

TEST(ClassifierWeight, SumIsNMinusOne) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> n(2, 6), e(0, 20);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> errs(n(rng));
    for (auto& v : errs) v = e(rng);
    double total = 0;
    for (double v : errs) total += v;
    if (total == 0) continue;
    const auto a = classifier_weight(errs, 1e-9);
    double sum = 0;
    for (double v : a) {
      EXPECT_GE(v, 0.0);
      EXPECT_LT(v, 1.0);
      sum += v;
    }
    EXPECT_NEAR(sum, static_cast<double>(errs.size()) - 1.0, 1e-6);
  }
}

TEST(DetectOcclusion, Examples) {
  EXPECT_FALSE(detect_occlusion(std::vector<double>{0, 0, 0, 0}, 0.5));
  EXPECT_TRUE(detect_occlusion(std::vector<double>{0.9, 0.8, 0.9, 0.9}, 0.5));
  EXPECT_FALSE(detect_occlusion(std::vector<double>{0.5, 0.5}, 0.5));
}

TEST(EstimateState, Examples) {
  auto s = samples_from({{0}, {0}});
  s[0].box = BBox{10, 10, 20, 20};
  s[0].score = 1;
  s[0].label = Label::Positive;
  EXPECT_EQ(estimate_state(std::span<const Sample>(s).first(1)), s[0].box);
  s[1].box = BBox{14, 10, 20, 20};
  s[1].score = 3;
  s[1].label = Label::Positive;
  const BBox r = estimate_state(s);
  EXPECT_DOUBLE_EQ(r.cx, 13);
  EXPECT_DOUBLE_EQ(r.cy, 10);
  EXPECT_DOUBLE_EQ(r.w, 20);
  EXPECT_DOUBLE_EQ(r.h, 20);
  s[0].box = BBox{-5, 3, 10, 10};
  s[1].box = BBox{5, -3, 10, 10};
  s[1].score = 1;
  const BBox c = estimate_state(s);
  EXPECT_DOUBLE_EQ(c.cx, 0);
  EXPECT_DOUBLE_EQ(c.cy, 0);
  for (auto& x : s) x.label = Label::Negative;
  EXPECT_THROW(estimate_state(s), NoPositiveError);
}

TEST(EstimateState, ScaleInvariant) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 5), c(0, 100);
  for (int t = 0; t < 200; ++t) {
    auto s = samples_from(std::vector<std::vector<double>>(8, {0.0}));
    for (auto& x : s) {
      x.box = BBox{c(rng), c(rng), u(rng) * 10, u(rng) * 10};
      x.score = u(rng);
      x.label = Label::Positive;
    }
    const BBox a = estimate_state(s);
    const double k = u(rng);
    for (auto& x : s) x.score *= k;
    const BBox b = estimate_state(s);
    EXPECT_NEAR(a.cx, b.cx, 1e-9);
    EXPECT_NEAR(a.cy, b.cy, 1e-9);
    EXPECT_NEAR(a.w, b.w, 1e-9);
    EXPECT_NEAR(a.h, b.h, 1e-9);
  }
}

TEST(PlainEnsembleScore, Examples) {
  EXPECT_DOUBLE_EQ(plain_ensemble_score(std::vector<double>{0.1, 0.3, 2}, std::vector<double>{1, 1, 1}), 3);
  EXPECT_DOUBLE_EQ(plain_ensemble_score(std::vector<double>{0.7, -0.1, 0.3}, std::vector<double>{1, 0.5, 0.5}), 1);
  EXPECT_DOUBLE_EQ(plain_ensemble_score(std::vector<double>{0.7, -0.1, 0.3}, std::vector<double>{0, 0, 0}), 0);
}

TEST(PlainEnsembleScore, MaskRelation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1), w(0, 1);
  for (int t = 0; t < 2000; ++t) {
    std::vector<double> h(4), a(4);
    for (auto& v : h) v = u(rng);
    for (auto& v : a) v = w(rng);
    const Flags z = uncertainty_flags(h, 0.2);
    std::vector<double> masked(4);
    for (int c = 0; c < 4; ++c) masked[c] = z[c] ? h[c] : 0.0;
    EXPECT_EQ(ensemble_score(h, z, a), plain_ensemble_score(masked, a));
    EXPECT_EQ(ensemble_score(h, Flags(4, 1), a), plain_ensemble_score(h, a));
  }
}

TEST(CotrackScore, Examples) {
  const std::vector<double> a{1, 1};
  EXPECT_DOUBLE_EQ(cotrack_score(std::vector<double>{0.05, 0.8}, a, 0.2), 0.8);
  EXPECT_DOUBLE_EQ(cotrack_score(std::vector<double>{0.8, 0.05}, a, 0.2), 0.8);
  EXPECT_DOUBLE_EQ(cotrack_score(std::vector<double>{0.8, 0.9}, a, 0.2), 1.7);
  EXPECT_DOUBLE_EQ(cotrack_score(std::vector<double>{0.05, 0.1}, a, 0.2), 0.1);
  EXPECT_THROW(cotrack_score(std::vector<double>{1, 2, 3}, std::vector<double>{1, 1, 1}, 0.2), ConfigError);
}

TEST(Formulas, MatchBruteForceOnRandomInstances) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> nd(2, 6), cnt(1, 10);
  std::uniform_real_distribution<double> w(0, 1);
  for (int t = 0; t < 300; ++t) {
    const int n = nd(rng);
    const auto h = random_margins(rng, n, cnt(rng));
    std::vector<double> a(n);
    for (auto& v : a) v = w(rng);
    for (const auto& row : h) {
      const auto z = oracle::flags(row, 0.2);
      const Flags got = uncertainty_flags(row, 0.2);
      for (int c = 0; c < n; ++c) ASSERT_EQ(got[c], z[c]);
      EXPECT_NEAR(ensemble_score(row, got, a), oracle::masked_score(row, z, a), 1e-9);
      EXPECT_NEAR(plain_ensemble_score(row, a), oracle::plain_score(row, a), 1e-9);
      const double s = oracle::masked_score(row, z, a);
      EXPECT_EQ(to_int(ensemble_label(s, got, a, 0.25)), oracle::ensemble_label(s, z, a, 0.25));
      for (double m : row) EXPECT_EQ(to_int(label_single(m, -0.2, 0.2)), oracle::single_label(m, -0.2, 0.2));
    }
  }
}

TEST(Decide, HandComputedFrame) {
  EnsembleConfig cfg;
  cfg.n = 3;
  cfg.spans = {2, 8, 30};
  auto s = samples_from({{0.5, 0.6, 0.7}, {0.5, -0.5, 0.1}, {-0.5, -0.6, -0.9}, {0.3, 0.1, -0.4}, {0.9, -0.05, 0.4}});
  const FrameDecision d = decide(s, std::vector<double>{1, 1, 1}, cfg);
  EXPECT_EQ(labels_of(s), (std::vector<int>{1, 0, -1, 0, 1}));
  EXPECT_EQ(s[0].informativeness, 3);
  EXPECT_EQ(s[1].informativeness, 2);
  EXPECT_EQ(s[4].informativeness, 2);
  EXPECT_DOUBLE_EQ(s[4].score, 2.0);
  EXPECT_EQ(d.errors[0].errors, 0);
  EXPECT_EQ(d.errors[1].errors, 1);
  EXPECT_EQ(d.errors[2].errors, 0);
  EXPECT_EQ(d.errors[1].labeled, 3);
  EXPECT_DOUBLE_EQ(d.alphas[1], 0.0);
  EXPECT_NEAR(d.alphas[0], 1.0, 1e-5);
  EXPECT_DOUBLE_EQ(d.mean_error, 1.0 / 9.0);
  EXPECT_FALSE(d.occluded);
  EXPECT_EQ(d.training[0], (std::vector<std::size_t>{4, 0, 2}));
  EXPECT_EQ(d.training[1], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(d.training[2], (std::vector<std::size_t>{4, 0, 2}));
}

TEST(Decide, MatchesBruteForceFullStep) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> w(0.2, 1);
  for (int t = 0; t < 500; ++t) {
    EnsembleConfig cfg;
    cfg.n = 3;
    cfg.spans = {2, 8, 30};
    cfg.m = 1 + t % 5;
    const auto h = random_margins(rng, 3, 5);
    std::vector<double> a(3);
    for (auto& v : a) v = t % 2 ? 1.0 : w(rng);
    auto s = samples_from(h);
    const FrameDecision d = decide(s, a, cfg);

    std::vector<std::vector<int>> z;
    std::vector<double> score;
    std::vector<int> labels;
    for (const auto& row : h) {
      z.push_back(oracle::flags(row, cfg.tau_member));
      score.push_back(oracle::masked_score(row, z.back(), a));
      labels.push_back(oracle::ensemble_label(score.back(), z.back(), a, cfg.kappa_ens));
    }
    ASSERT_EQ(labels_of(s), labels);
    std::vector<double> e;
    double frac = 0;
    int labeled = 0;
    for (int l : labels) labeled += l != 0;
    for (int c = 0; c < 3; ++c) {
      e.push_back(oracle::member_errors(c, h, labels));
      EXPECT_EQ(d.errors[c].errors, e.back());
      frac += e.back() / std::max(1, labeled);
    }
    const auto alphas = oracle::weights(e, cfg.epsilon);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(d.alphas[c], alphas[c]);
    EXPECT_EQ(d.occluded, frac / 3 > cfg.tau_occ);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(d.training[c], oracle::qbc(c, z, labels, score, cfg.m));
    for (std::size_t j = 0; j < s.size(); ++j) {
      EXPECT_EQ(s[j].score, score[j]);
      EXPECT_EQ(s[j].informativeness, z[j][0] + z[j][1] + z[j][2]);
    }
  }
}

TEST(Decide, QbcSubsetProperties) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 300; ++t) {
    EnsembleConfig cfg;
    cfg.m = 1 + t % 7;
    auto s = samples_from(random_margins(rng, 4, 20));
    const FrameDecision d = decide(s, std::vector<double>{1, 0.8, 0.6, 0.4}, cfg);
    for (int c = 0; c < 4; ++c) {
      const auto& idx = d.training[c];
      EXPECT_LE(static_cast<int>(idx.size()), cfg.m);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        EXPECT_EQ(s[idx[k]].z[c], 1);
        EXPECT_NE(s[idx[k]].label, Label::Unlabeled);
        if (k > 0) {
          EXPECT_LE(s[idx[k - 1]].informativeness, s[idx[k]].informativeness);
        }
      }
    }
  }
}

TEST(Decide, BaselineModes) {
  const std::vector<std::vector<double>> h{{0.5, 0.1}, {-0.9, -0.3}, {0.05, 0.1}, {0.6, -0.7}};
  EnsembleConfig cfg;
  cfg.n = 2;
  cfg.spans = {30, 120};
  const std::vector<double> a{1, 1};

  cfg.mode = Mode::Plain;
  auto s = samples_from(h);
  auto d = decide(s, a, cfg);
  // Unmasked vote: sample 2 has both members positive, sample 3 splits.
  EXPECT_EQ(labels_of(s), (std::vector<int>{1, -1, 1, 0}));
  EXPECT_EQ(d.training[0], (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(d.training[1], d.training[0]);

  cfg.mode = Mode::Cotrack;
  s = samples_from(h);
  d = decide(s, a, cfg);
  // Scores: 0.5 (member 2 inside), -1.2, 0.1 (member 1 inside), -0.1.
  EXPECT_EQ(labels_of(s), (std::vector<int>{1, -1, 0, 0}));
  EXPECT_DOUBLE_EQ(s[0].score, 0.5);
  EXPECT_DOUBLE_EQ(s[1].score, -1.2);

  cfg.mode = Mode::AcetMinus;
  s = samples_from(h);
  d = decide(s, a, cfg);
  EXPECT_EQ(labels_of(s), (std::vector<int>{1, -1, 0, 0}));
  // Every confidently labeled sample in draw order; no subset limit.
  EXPECT_EQ(d.training[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(d.training[1], (std::vector<std::size_t>{1}));
}

TEST(EnsembleConfig, ModeLayout) {
  EnsembleConfig cfg;
  cfg.mode = Mode::AcetMinus;
  const EnsembleConfig minus = resolve_mode(cfg);
  EXPECT_EQ(minus.spans, (std::vector<int>{120, 120, 120, 120}));
  EXPECT_EQ(member_family(minus, 0), FeatureFamily::Grad);
  EXPECT_EQ(member_family(minus, 1), FeatureFamily::Color);
  EXPECT_EQ(member_family(minus, 2), FeatureFamily::Grad);
  EXPECT_NO_THROW(validate(minus));
  cfg.mode = Mode::Acet;
  for (int c = 0; c < 4; ++c) EXPECT_EQ(member_family(resolve_mode(cfg), c), FeatureFamily::Concat);
  cfg.mode = Mode::Cotrack;
  const EnsembleConfig co = resolve_mode(cfg);
  EXPECT_EQ(co.n, 2);
  EXPECT_NO_THROW(validate(co));
  EXPECT_EQ(parse_mode("acet-minus"), Mode::AcetMinus);
  EXPECT_THROW(parse_mode("boost"), ConfigError);
}

TEST(EnsembleConfig, Validation) {
  EnsembleConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  auto bad = cfg;
  bad.n = 1;
  bad.spans = {2};
  EXPECT_THROW(validate(bad), ConfigError);
  bad = cfg;
  bad.spans = {2, 8, 8, 120};
  EXPECT_THROW(validate(bad), ConfigError);
  bad = cfg;
  bad.m = 0;
  EXPECT_THROW(validate(bad), ConfigError);
  bad = cfg;
  bad.kappa_ens = 1.0;
  EXPECT_THROW(validate(bad), ConfigError);
  bad = cfg;
  bad.tau_occ = 0.0;
  EXPECT_THROW(validate(bad), ConfigError);
  bad = cfg;
  bad.spans = {2, 8, 30};
  EXPECT_THROW(validate(bad), ConfigError);
}
