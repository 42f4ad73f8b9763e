#pragma once

#include <array>
#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "mdrank/curves.hpp"
#include "mdrank/prediction_data.hpp"

namespace mdrank {

/// Gaussian discriminant family. The diagonal variants are the naive Bayes
/// forms of LDA and QDA.
enum class GdaVariant { Lda, Qda, DiagLda, DiagQda };

inline constexpr std::array<GdaVariant, 4> kAllVariants = {GdaVariant::Lda, GdaVariant::Qda, GdaVariant::DiagLda,
                                                           GdaVariant::DiagQda};

std::string_view variant_key(GdaVariant v) noexcept;    // "lda", "qda", "dlda", "dqda"
std::string_view variant_label(GdaVariant v) noexcept;  // "LDA", "QDA", "dLDA", "dQDA"
std::optional<GdaVariant> parse_variant(std::string_view name) noexcept;

constexpr bool is_diagonal(GdaVariant v) noexcept { return v == GdaVariant::DiagLda || v == GdaVariant::DiagQda; }
constexpr bool is_pooled(GdaVariant v) noexcept { return v == GdaVariant::Lda || v == GdaVariant::DiagLda; }

/// How operating points are generated from a fitted model.
enum class Sweep {
  Threshold,  // cut the posterior at the model prior
  Prior,      // vary the prior with the posterior cut fixed at 0.5
};

std::string_view sweep_key(Sweep s) noexcept;
std::optional<Sweep> parse_sweep(std::string_view name) noexcept;

/// Relative ridge added to every fitted covariance: lambda = kRidgeScale * mean(diag).
inline constexpr double kRidgeScale = 1e-6;

struct ClassGaussian {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;  // ridge already included; off-diagonals zero for diagonal variants
  double ridge = 0.0;
};

/// Fitted two-class Gaussian discriminant. Immutable; safe to share across
/// threads.
class GdaModel {
 public:
  /// Validates shapes, symmetry and positive definiteness, then factorizes.
  GdaModel(GdaVariant variant, double prior_malignant, ClassGaussian benign, ClassGaussian malignant);

  GdaVariant variant() const noexcept { return variant_; }
  double prior_malignant() const noexcept { return prior_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(benign_.mean.size()); }
  const ClassGaussian& benign() const noexcept { return benign_; }
  const ClassGaussian& malignant() const noexcept { return malignant_; }

  /// log g_M(x) - log g_B(x).
  double log_likelihood_ratio(std::span<const double> x) const;
  /// P(malignant | x) with the given prior (model prior when empty).
  double posterior(std::span<const double> x, std::optional<double> prior_override = std::nullopt) const;
  double posterior_benign(std::span<const double> x, std::optional<double> prior_override = std::nullopt) const;

 private:
  struct Factor {
    Eigen::LLT<Eigen::MatrixXd> llt;  // full-covariance variants
    Eigen::VectorXd inv_var;          // diagonal variants
    double log_det = 0.0;
  };

  double log_density(const ClassGaussian& g, const Factor& f, const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Factor factorize(const ClassGaussian& g, std::string_view cls) const;

  GdaVariant variant_;
  double prior_;
  ClassGaussian benign_;
  ClassGaussian malignant_;
  Factor benign_factor_;
  Factor malignant_factor_;
};

struct PriorMode {
  std::optional<double> fixed;  // empty: class fraction of the training set
};

/// Maximum-likelihood fit. Throws FitError for a class with fewer than two
/// items, a constant feature, or a covariance that stays singular after the ridge.
GdaModel fit_gda(const FeatureDataset& train, GdaVariant variant, PriorMode prior = {});

/// Stable logistic 1 / (1 + exp(-z)).
double logistic(double z) noexcept;

/// Posterior-at-model-prior scores for every test item.
PredictionSet posterior_scores(const GdaModel& model, const FeatureDataset& test, std::string system_id = {});
/// Log-likelihood-ratio scores. Thresholding these at log((1-p)/p) reproduces
/// the decision posterior(x, p) >= 0.5.
PredictionSet llr_scores(const GdaModel& model, const FeatureDataset& test, std::string system_id = {});

PredictionSet sweep_scores(const GdaModel& model, const FeatureDataset& test, Sweep sweep, std::string system_id = {});

RocCurve threshold_sweep_roc(const GdaModel& model, const FeatureDataset& test);
/// Thresholds of the returned curve are log-likelihood-ratio cuts; see
/// prior_for_llr_cut() for the matching prior.
RocCurve prior_sweep_roc(const GdaModel& model, const FeatureDataset& test);

/// Prior at which an item with the given log-likelihood ratio sits exactly on
/// the 0.5 posterior cut.
double prior_for_llr_cut(double llr) noexcept;

/// Self-describing text document with round-trip precision.
std::string serialize_model(const GdaModel& model);
GdaModel parse_model(std::string_view text);

}  // namespace mdrank
