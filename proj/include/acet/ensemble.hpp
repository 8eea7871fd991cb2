#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "acet/classifier.hpp"
#include "acet/features.hpp"
#include "acet/geometry.hpp"
#include "acet/sampling.hpp"

namespace acet {

enum class Mode { Acet, AcetMinus, Plain, Cotrack };

std::string_view to_string(Mode mode);
/// Accepts the CLI spellings acet, acet-minus, plain, cotrack.
Mode parse_mode(std::string_view text);

struct ClassifierDefaults {
  double learn_rate = 0.1;
  double reg = 1e-3;
  int epochs = 10;
  int init_epochs = 50;
  std::size_t buffer_capacity = 2048;
};

struct EnsembleConfig {
  Mode mode = Mode::Acet;
  int n = 4;
  std::vector<int> spans{2, 8, 30, 120};
  double tau_member = 0.2;  // member band is (-tau_member, tau_member)
  double kappa_ens = 0.25;  // ensemble thresholds as a fraction of active weight
  double tau_occ = 0.5;
  int m = 64;
  double epsilon = 1e-6;
  bool freeze_on_occlusion = false;
  int init_positives = 64;
  int init_negatives = 192;
  SamplerConfig sampler;
  ClassifierDefaults classifier;
  bool parallel = true;  // OpenMP kernels; the serial path gives identical results
};

/// Applies the per-mode member layout: ACET- gets equal (maximal) spans and
/// alternating GRAD/COLOR members, PLAIN equal spans, COTRACK two members.
EnsembleConfig resolve_mode(EnsembleConfig cfg);

/// Throws ConfigError naming the offending field.
void validate(const EnsembleConfig& cfg);

/// Feature family of member c (0-based) under the resolved config.
FeatureFamily member_family(const EnsembleConfig& cfg, int c);

using Flags = std::vector<std::uint8_t>;

struct Sample {
  Transform transform;
  BBox box;
  FeatureVector x;  // CONCAT; members read their family's slice
  std::vector<double> margins;
  Flags z;
  double score = 0.0;
  Label label = Label::Unlabeled;
  int informativeness = 0;
};

/// z_c = 0 iff margin_c lies strictly inside (-tau, tau).
Flags uncertainty_flags(std::span<const double> margins, double tau_member);

/// Sum over members of alpha_c * z_c * sign(margin_c), sign(0) = 0.
double ensemble_score(std::span<const double> margins, std::span<const std::uint8_t> z,
                      std::span<const double> alphas);

/// Thresholds +-kappa * W with W the active weight sum(alpha_c z_c); W == 0 gives 0.
Label ensemble_label(double s, std::span<const std::uint8_t> z, std::span<const double> alphas, double kappa);

int informativeness(std::span<const std::uint8_t> z);

/// Query-by-committee subset for member c: samples the member labeled
/// confidently that carry a nonzero ensemble label, ordered by ascending
/// informativeness, then |score|, then index; at most m. m < 0 keeps all.
std::vector<std::size_t> select_training_set(int c, std::span<const Sample> samples, int m);

struct MemberError {
  int errors = 0;   // labeled samples whose margin sign disagrees with the label
  int labeled = 0;  // samples with a nonzero ensemble label
  double fraction() const { return static_cast<double>(errors) / (labeled > 0 ? labeled : 1); }
};

MemberError classifier_error(int c, std::span<const Sample> samples);

/// alpha_c = 1 - (e_c + eps) / (sum e + eps); all ones when sum e == 0.
std::vector<double> classifier_weight(std::span<const double> errors, double epsilon);

/// Occluded when the mean normalized error strictly exceeds tau_occ.
bool detect_occlusion(std::span<const double> error_fractions, double tau_occ);

/// Score-weighted mean of positive samples' (cx, cy, w, h). Throws
/// NoPositiveError when no sample has a positive label and score.
BBox estimate_state(std::span<const Sample> samples);

/// Weighted vote without the uncertainty mask.
double plain_ensemble_score(std::span<const double> margins, std::span<const double> alphas);

/// Two-member co-tracking score: a member inside its band (-tau, tau) defers
/// to the other; when both are inside, the first case applies.
double cotrack_score(std::span<const double> margins, std::span<const double> alphas, double tau_member);

/// Everything decided from the margins of one frame.
struct FrameDecision {
  std::vector<MemberError> errors;
  std::vector<double> error_fractions;
  std::vector<double> alphas;  // weights for the next frame
  double mean_error = 0.0;
  bool occluded = false;
  std::vector<std::vector<std::size_t>> training;  // per-member selected sample indices
};

/// Fills z, score, label and informativeness of every sample (margins must be
/// set) using the previous weights, then derives errors, new weights, the
/// occlusion test and the per-member training subsets according to cfg.mode.
FrameDecision decide(std::span<Sample> samples, std::span<const double> alphas, const EnsembleConfig& cfg);

}  // namespace acet
