#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "mdrank/prediction_data.hpp"

namespace mdrank {

/// Binormal score model: benign ~ N(0, 1), malignant ~ N(mu, sigma^2).
/// Defaults mirror a 379-item test set with 75 melanomas.
struct BinormalSpec {
  std::size_t n_pos = 75;
  std::size_t n_neg = 304;
  double mu = 1.0;
  double sigma = 1.0;
  std::uint64_t seed = 42;
};

/// Standard normal CDF.
double normal_cdf(double x) noexcept;

/// Phi(mu / sqrt(1 + sigma^2)).
double binormal_auc(double mu, double sigma) noexcept;

/// Item ids "img00001", ...; class membership is shuffled over the ids.
PredictionSet binormal_scores(const BinormalSpec& spec, std::string system_id = "synthetic");

struct GaussianClassSpec {
  std::size_t n = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// Multivariate normal draws per class. Throws ValidationError for a
/// covariance that is not symmetric positive definite.
FeatureDataset gaussian_features(const GaussianClassSpec& benign, const GaussianClassSpec& malignant,
                                 std::uint64_t seed);

struct SystemShape {
  double mu = 1.0;
  double sigma = 1.0;
};

/// Several systems scoring one shared, identically labeled item set.
struct SynthChallengeSpec {
  std::size_t n_pos = 75;
  std::size_t n_neg = 304;
  std::vector<SystemShape> systems;
  std::uint64_t seed = 42;
};

std::vector<PredictionSet> synth_challenge(const SynthChallengeSpec& spec);

/// A field of n systems whose binormal curves cross: positive-class spread
/// ranges from narrow to wide while the global AUC stays comparable.
SynthChallengeSpec crossing_field(std::size_t n_systems, std::uint64_t seed = 42);

/// Constant two-system fixture over ten items (four malignant): S1 has the
/// higher average precision, S2 the higher specificity at 98% sensitivity.
std::pair<PredictionSet, PredictionSet> crossing_pair();

}  // namespace mdrank
