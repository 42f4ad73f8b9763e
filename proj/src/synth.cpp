#include "mdrank/synth.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "mdrank/error.hpp"
#include "mdrank/rng.hpp"

namespace mdrank {

namespace {

std::string item_id(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%05zu", prefix, i + 1);
  return buf;
}

std::vector<Label> shuffled_labels(std::size_t n_pos, std::size_t n_neg, std::uint64_t seed) {
  std::vector<Label> labels(n_pos, Label::Malignant);
  labels.resize(n_pos + n_neg, Label::Benign);
  std::mt19937_64 rng(stream_seed(seed, 0));
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

void check_counts(std::size_t n_pos, std::size_t n_neg) {
  if (n_pos < 1 || n_neg < 1) throw ValidationError("both classes need at least one item");
}

void check_shape(double mu, double sigma) {
  if (!std::isfinite(mu)) throw ValidationError("mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be positive and finite");
}

}  // namespace

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double binormal_auc(double mu, double sigma) noexcept { return normal_cdf(mu / std::sqrt(1.0 + sigma * sigma)); }

PredictionSet binormal_scores(const BinormalSpec& spec, std::string system_id) {
  check_counts(spec.n_pos, spec.n_neg);
  check_shape(spec.mu, spec.sigma);
  const auto labels = shuffled_labels(spec.n_pos, spec.n_neg, spec.seed);
  std::mt19937_64 rng(stream_seed(spec.seed, 1));
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<LabeledScore> items;
  items.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double draw = z(rng);
    const double score = labels[i] == Label::Malignant ? spec.mu + spec.sigma * draw : draw;
    items.push_back({item_id("img", i), score, labels[i]});
  }
  return PredictionSet(std::move(system_id), std::move(items));
}

FeatureDataset gaussian_features(const GaussianClassSpec& benign, const GaussianClassSpec& malignant,
                                 std::uint64_t seed) {
  check_counts(malignant.n, benign.n);
  const auto d = benign.mean.size();
  if (d < 1) throw ValidationError("feature dimension must be at least 1");

  Eigen::MatrixXd factors[2];
  const GaussianClassSpec* classes[2] = {&benign, &malignant};
  for (int c = 0; c < 2; ++c) {
    const auto& g = *classes[c];
    if (g.mean.size() != d || g.covariance.rows() != d || g.covariance.cols() != d) {
      throw ValidationError("class mean/covariance dimensions disagree");
    }
    const double scale = std::max(1.0, g.covariance.cwiseAbs().maxCoeff());
    if ((g.covariance - g.covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ValidationError("covariance is not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(g.covariance);
    if (llt.info() != Eigen::Success) throw ValidationError("covariance is not positive definite");
    factors[c] = llt.matrixL();
  }

  const auto labels = shuffled_labels(malignant.n, benign.n, seed);
  std::mt19937_64 rng(stream_seed(seed, 1));
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<FeatureRow> rows;
  rows.reserve(labels.size());
  Eigen::VectorXd draw(d);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int c = labels[i] == Label::Malignant ? 1 : 0;
    for (Eigen::Index j = 0; j < d; ++j) draw(j) = z(rng);
    const Eigen::VectorXd x = classes[c]->mean + factors[c] * draw;
    rows.push_back({item_id("les", i), labels[i], std::vector<double>(x.data(), x.data() + d)});
  }
  return FeatureDataset(std::move(rows));
}

std::vector<PredictionSet> synth_challenge(const SynthChallengeSpec& spec) {
  check_counts(spec.n_pos, spec.n_neg);
  if (spec.systems.empty()) throw ValidationError("challenge field needs at least one system");
  const auto labels = shuffled_labels(spec.n_pos, spec.n_neg, spec.seed);
  std::vector<PredictionSet> field;
  field.reserve(spec.systems.size());
  for (std::size_t s = 0; s < spec.systems.size(); ++s) {
    const auto& shape = spec.systems[s];
    check_shape(shape.mu, shape.sigma);
    std::mt19937_64 rng(stream_seed(spec.seed, s + 1));
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<LabeledScore> items;
    items.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const double draw = z(rng);
      // Submissions are posterior-like: map the latent score through the
      // logistic, which leaves every rank-based measure unchanged.
      const double latent = labels[i] == Label::Malignant ? shape.mu + shape.sigma * draw : draw;
      items.push_back({item_id("img", i), 1.0 / (1.0 + std::exp(-latent)), labels[i]});
    }
    char name[32];
    std::snprintf(name, sizeof name, "sys%02zu", s + 1);
    field.emplace_back(name, std::move(items));
  }
  return field;
}

SynthChallengeSpec crossing_field(std::size_t n_systems, std::uint64_t seed) {
  SynthChallengeSpec spec;
  spec.seed = seed;
  for (std::size_t s = 0; s < n_systems; ++s) {
    // sigma from 0.5 to 2.5; mu keeps the binormal AUC near 0.80-0.85.
    const double t = n_systems > 1 ? static_cast<double>(s) / static_cast<double>(n_systems - 1) : 0.0;
    const double sigma = 0.5 + 2.0 * t;
    const double auc_target = 0.80 + 0.05 * std::sin(3.0 * static_cast<double>(s));
    // Invert Phi numerically: mu = z * sqrt(1 + sigma^2) with Phi(z) = auc_target.
    double lo = -10.0;
    double hi = 10.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (normal_cdf(mid) < auc_target ? lo : hi) = mid;
    }
    spec.systems.push_back({0.5 * (lo + hi) * std::sqrt(1.0 + sigma * sigma), sigma});
  }
  return spec;
}

std::pair<PredictionSet, PredictionSet> crossing_pair() {
  constexpr Label M = Label::Malignant;
  constexpr Label B = Label::Benign;
  // Items i01-i04 are malignant. S1 ranks three of them on top and the fourth
  // below every benign item; S2 interleaves them but keeps all four above the
  // lowest benign item.
  std::vector<LabeledScore> s1 = {
      {"i01", 0.95, M}, {"i02", 0.90, M}, {"i03", 0.85, M}, {"i04", 0.10, M}, {"i05", 0.80, B},
      {"i06", 0.70, B}, {"i07", 0.60, B}, {"i08", 0.50, B}, {"i09", 0.40, B}, {"i10", 0.30, B},
  };
  std::vector<LabeledScore> s2 = {
      {"i01", 0.90, M}, {"i02", 0.65, M}, {"i03", 0.55, M}, {"i04", 0.45, M}, {"i05", 0.95, B},
      {"i06", 0.80, B}, {"i07", 0.70, B}, {"i08", 0.60, B}, {"i09", 0.50, B}, {"i10", 0.30, B},
  };
  return {PredictionSet("S1", std::move(s1)), PredictionSet("S2", std::move(s2))};
}

}  // namespace mdrank
