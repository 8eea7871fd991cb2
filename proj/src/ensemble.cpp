#include "acet/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "acet/error.hpp"

namespace acet {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Acet:
      return "acet";
    case Mode::AcetMinus:
      return "acet-minus";
    case Mode::Plain:
      return "plain";
    case Mode::Cotrack:
      return "cotrack";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  if (text == "acet") return Mode::Acet;
  if (text == "acet-minus" || text == "acet_minus") return Mode::AcetMinus;
  if (text == "plain") return Mode::Plain;
  if (text == "cotrack") return Mode::Cotrack;
  throw ConfigError("unknown tracker mode '" + std::string(text) + "'");
}

EnsembleConfig resolve_mode(EnsembleConfig cfg) {
  if (cfg.spans.empty()) return cfg;
  const int longest = *std::max_element(cfg.spans.begin(), cfg.spans.end());
  switch (cfg.mode) {
    case Mode::Acet:
      break;
    case Mode::AcetMinus:
    case Mode::Plain:
      std::fill(cfg.spans.begin(), cfg.spans.end(), longest);
      break;
    case Mode::Cotrack:
      cfg.n = 2;
      cfg.spans = {longest, longest};
      break;
  }
  return cfg;
}

void validate(const EnsembleConfig& cfg) {
  if (cfg.n < 2) throw ConfigError("n must be >= 2");
  if (cfg.mode == Mode::Cotrack && cfg.n != 2) throw ConfigError("cotrack mode requires n == 2");
  if (static_cast<int>(cfg.spans.size()) != cfg.n)
    throw ConfigError("spans must list exactly n = " + std::to_string(cfg.n) + " values");
  for (int s : cfg.spans)
    if (s < 0) throw ConfigError("spans must be >= 0");
  if (cfg.mode == Mode::Acet && !std::is_sorted(cfg.spans.begin(), cfg.spans.end(), std::less_equal<>()))
    throw ConfigError("spans must be strictly increasing");
  if (cfg.m < 1) throw ConfigError("m must be >= 1");
  if (!(cfg.tau_member >= 0.0)) throw ConfigError("tau_member must be >= 0");
  if (!(cfg.kappa_ens > 0.0 && cfg.kappa_ens < 1.0)) throw ConfigError("kappa_ens must lie in (0, 1)");
  if (!(cfg.tau_occ > 0.0 && cfg.tau_occ < 1.0)) throw ConfigError("tau_occ must lie in (0, 1)");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be > 0");
  if (cfg.init_positives < 1 || cfg.init_negatives < 1) throw ConfigError("init sample counts must be >= 1");
  validate(cfg.sampler);
  const auto& k = cfg.classifier;
  if (!(k.learn_rate > 0.0)) throw ConfigError("learn_rate must be > 0");
  if (!(k.reg >= 0.0) || k.learn_rate * k.reg >= 1.0) throw ConfigError("reg must satisfy 0 <= reg < 1/learn_rate");
  if (k.epochs < 0 || k.init_epochs < 0) throw ConfigError("epochs must be >= 0");
  if (k.buffer_capacity < 1) throw ConfigError("buffer_capacity must be >= 1");
}

FeatureFamily member_family(const EnsembleConfig& cfg, int c) {
  if (cfg.mode != Mode::AcetMinus) return FeatureFamily::Concat;
  return c % 2 == 0 ? FeatureFamily::Grad : FeatureFamily::Color;
}

namespace {

double sign_of(double v) { return static_cast<double>(to_int(sign_label(v))); }

}  // namespace

Flags uncertainty_flags(std::span<const double> margins, double tau_member) {
  Flags z(margins.size());
  for (std::size_t c = 0; c < margins.size(); ++c)
    z[c] = (margins[c] > -tau_member && margins[c] < tau_member) ? 0 : 1;
  return z;
}

double ensemble_score(std::span<const double> margins, std::span<const std::uint8_t> z,
                      std::span<const double> alphas) {
  double s = 0.0;
  for (std::size_t c = 0; c < margins.size(); ++c)
    if (z[c]) s += alphas[c] * sign_of(margins[c]);
  return s;
}

Label ensemble_label(double s, std::span<const std::uint8_t> z, std::span<const double> alphas, double kappa) {
  double active = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c)
    if (z[c]) active += alphas[c];
  if (active == 0.0) return Label::Unlabeled;
  if (s > kappa * active) return Label::Positive;
  if (s < -kappa * active) return Label::Negative;
  return Label::Unlabeled;
}

int informativeness(std::span<const std::uint8_t> z) {
  return static_cast<int>(std::count_if(z.begin(), z.end(), [](std::uint8_t b) { return b != 0; }));
}

std::vector<std::size_t> select_training_set(int c, std::span<const Sample> samples, int m) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < samples.size(); ++j)
    if (samples[j].z[c] && samples[j].label != Label::Unlabeled) idx.push_back(j);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const Sample& sa = samples[a];
    const Sample& sb = samples[b];
    if (sa.informativeness != sb.informativeness) return sa.informativeness < sb.informativeness;
    const double ma = std::abs(sa.score);
    const double mb = std::abs(sb.score);
    if (ma != mb) return ma < mb;
    return a < b;
  });
  if (m >= 0 && idx.size() > static_cast<std::size_t>(m)) idx.resize(static_cast<std::size_t>(m));
  return idx;
}

MemberError classifier_error(int c, std::span<const Sample> samples) {
  MemberError e;
  for (const Sample& s : samples) {
    if (s.label == Label::Unlabeled) continue;
    ++e.labeled;
    if (sign_label(s.margins[c]) != s.label) ++e.errors;
  }
  return e;
}

std::vector<double> classifier_weight(std::span<const double> errors, double epsilon) {
  const double total = std::accumulate(errors.begin(), errors.end(), 0.0);
  std::vector<double> alphas(errors.size(), 1.0);
  if (total == 0.0) return alphas;
  for (std::size_t c = 0; c < errors.size(); ++c) alphas[c] = 1.0 - (errors[c] + epsilon) / (total + epsilon);
  return alphas;
}

bool detect_occlusion(std::span<const double> error_fractions, double tau_occ) {
  if (error_fractions.empty()) return false;
  const double mean =
      std::accumulate(error_fractions.begin(), error_fractions.end(), 0.0) / static_cast<double>(error_fractions.size());
  return mean > tau_occ;
}

BBox estimate_state(std::span<const Sample> samples) {
  double total = 0.0;
  for (const Sample& s : samples)
    if (s.label == Label::Positive && s.score > 0.0) total += s.score;
  if (!(total > 0.0)) throw NoPositiveError("no positively labeled sample");
  BBox out{0.0, 0.0, 0.0, 0.0};
  for (const Sample& s : samples) {
    if (s.label != Label::Positive || !(s.score > 0.0)) continue;
    const double wgt = s.score / total;
    out.cx += wgt * s.box.cx;
    out.cy += wgt * s.box.cy;
    out.w += wgt * s.box.w;
    out.h += wgt * s.box.h;
  }
  return out;
}

double plain_ensemble_score(std::span<const double> margins, std::span<const double> alphas) {
  double s = 0.0;
  for (std::size_t c = 0; c < margins.size(); ++c) s += alphas[c] * sign_of(margins[c]);
  return s;
}

double cotrack_score(std::span<const double> margins, std::span<const double> alphas, double tau_member) {
  if (margins.size() != 2 || alphas.size() != 2) throw ConfigError("cotrack score needs exactly two members");
  const auto inside = [&](double h) { return h > -tau_member && h < tau_member; };
  if (inside(margins[0])) return alphas[1] * margins[1];
  if (inside(margins[1])) return alphas[0] * margins[0];
  return alphas[0] * margins[0] + alphas[1] * margins[1];
}

FrameDecision decide(std::span<Sample> samples, std::span<const double> alphas, const EnsembleConfig& cfg) {
  const int n = static_cast<int>(alphas.size());
  const Flags all_active(static_cast<std::size_t>(n), 1);

  for (Sample& s : samples) {
    if (static_cast<int>(s.margins.size()) != n) throw ConfigError("sample margins do not match member count");
    s.z = uncertainty_flags(s.margins, cfg.tau_member);
    s.informativeness = informativeness(s.z);
    switch (cfg.mode) {
      case Mode::Acet:
      case Mode::AcetMinus:
        s.score = ensemble_score(s.margins, s.z, alphas);
        s.label = ensemble_label(s.score, s.z, alphas, cfg.kappa_ens);
        break;
      case Mode::Plain:
        s.score = plain_ensemble_score(s.margins, alphas);
        s.label = ensemble_label(s.score, all_active, alphas, cfg.kappa_ens);
        break;
      case Mode::Cotrack:
        s.score = cotrack_score(s.margins, alphas, cfg.tau_member);
        s.label = label_single(s.score, -cfg.tau_member, cfg.tau_member);
        break;
    }
  }

  FrameDecision d;
  std::vector<double> counts(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    d.errors.push_back(classifier_error(c, samples));
    d.error_fractions.push_back(d.errors.back().fraction());
    counts[c] = d.errors.back().errors;
  }
  d.alphas = classifier_weight(counts, cfg.epsilon);
  d.mean_error = std::accumulate(d.error_fractions.begin(), d.error_fractions.end(), 0.0) / n;
  d.occluded = detect_occlusion(d.error_fractions, cfg.tau_occ);

  d.training.resize(static_cast<std::size_t>(n));
  for (int c = 0; c < n; ++c) {
    switch (cfg.mode) {
      case Mode::Acet:
        d.training[c] = select_training_set(c, samples, cfg.m);
        break;
      case Mode::AcetMinus:
      case Mode::Cotrack:
        // No query-by-committee ordering: every confidently labeled sample, in draw order.
        for (std::size_t j = 0; j < samples.size(); ++j)
          if (samples[j].z[c] && samples[j].label != Label::Unlabeled) d.training[c].push_back(j);
        break;
      case Mode::Plain:
        for (std::size_t j = 0; j < samples.size(); ++j)
          if (samples[j].label != Label::Unlabeled) d.training[c].push_back(j);
        break;
    }
  }
  return d;
}

}  // namespace acet
