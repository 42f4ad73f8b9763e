#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mdrank/error.hpp"
#include "mdrank/gda.hpp"
#include "mdrank/synth.hpp"
#include "oracles.hpp"

using namespace mdrank;

namespace {

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }
std::vector<Label> to_vec(std::span<const Label> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(NormalCdf, AgreesWithQuadrature) {
  for (double x : {-3.0, -1.0, 0.0, 0.5, 0.8415, 2.0}) EXPECT_NEAR(normal_cdf(x), oracle::phi_quadrature(x), 1e-10);
  EXPECT_NEAR(binormal_auc(1.19, 1.0), oracle::phi_quadrature(1.19 / std::sqrt(2.0)), 1e-10);
  EXPECT_NEAR(binormal_auc(1.19, 1.0), 0.800, 5e-4);
}

TEST(Binormal, DefaultsAndDeterminism) {
  const auto a = binormal_scores({});
  EXPECT_EQ(a.n_pos(), 75u);
  EXPECT_EQ(a.n_neg(), 304u);
  EXPECT_EQ(a.items().front().item_id, "img00001");
  const auto b = binormal_scores({});
  EXPECT_TRUE(std::equal(a.scores().begin(), a.scores().end(), b.scores().begin()));
  const auto c = binormal_scores({.seed = 43});
  EXPECT_FALSE(std::equal(a.scores().begin(), a.scores().end(), c.scores().begin()));
}

TEST(Binormal, AucMatchesShape) {
  const auto chance = binormal_scores({.n_pos = 1000, .n_neg = 1000, .mu = 0.0});
  EXPECT_NEAR(auc_roc(chance), 0.5, 0.04);
  const auto easy = binormal_scores({.n_pos = 100, .n_neg = 100, .mu = 6.0});
  EXPECT_GE(auc_roc(easy), 0.999);
  const auto mid = binormal_scores({.n_pos = 2000, .n_neg = 2000, .mu = 1.19});
  EXPECT_NEAR(auc_roc(mid), oracle::phi_quadrature(1.19 / std::sqrt(2.0)), 0.02);
  const auto wide = binormal_scores({.n_pos = 2000, .n_neg = 2000, .mu = 1.0, .sigma = 2.0});
  EXPECT_NEAR(auc_roc(wide), oracle::phi_quadrature(1.0 / std::sqrt(5.0)), 0.02);
}

TEST(Binormal, RejectsBadShapes) {
  EXPECT_THROW(binormal_scores({.n_pos = 0}), ValidationError);
  EXPECT_THROW(binormal_scores({.sigma = 0.0}), ValidationError);
  EXPECT_THROW(binormal_scores({.sigma = -1.0}), ValidationError);
}

TEST(GaussianFeatures, MomentsAndErrors) {
  GaussianClassSpec benign{500, Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1)};
  GaussianClassSpec malignant{500, Eigen::VectorXd::Constant(1, 2.0), Eigen::MatrixXd::Identity(1, 1)};
  const auto ds = gaussian_features(benign, malignant, 7);
  double sb = 0, sm = 0;
  for (const auto& r : ds.rows()) (r.label == Label::Malignant ? sm : sb) += r.features[0];
  EXPECT_NEAR(sb / 500.0, 0.0, 0.15);
  EXPECT_NEAR(sm / 500.0, 2.0, 0.15);
  EXPECT_EQ(ds.rows().front().item_id, "les00001");

  GaussianClassSpec bad = benign;
  bad.covariance(0, 0) = -1.0;
  EXPECT_THROW(gaussian_features(bad, malignant, 1), ValidationError);
}

TEST(GaussianFeatures, IdenticalClassesGiveChanceLda) {
  GaussianClassSpec same{200, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2)};
  const auto train = gaussian_features(same, same, 1);
  const auto test = gaussian_features(same, same, 2);
  const auto model = fit_gda(train, GdaVariant::Lda);
  EXPECT_NEAR(auc_roc(posterior_scores(model, test)), 0.5, 0.1);
}

TEST(CrossingPair, MeasuresDisagreeOnOrder) {
  const auto [s1, s2] = crossing_pair();
  const auto ap1 = oracle::step_sum_ap(to_vec(s1.scores()), to_vec(s1.labels()));
  const auto ap2 = oracle::step_sum_ap(to_vec(s2.scores()), to_vec(s2.labels()));
  const auto sp1 = oracle::spec_at_least(to_vec(s1.scores()), to_vec(s1.labels()), 0.98);
  const auto sp2 = oracle::spec_at_least(to_vec(s2.scores()), to_vec(s2.labels()), 0.98);
  EXPECT_GT(ap1, ap2);
  EXPECT_LT(sp1, sp2);
  EXPECT_EQ(average_precision(s1), ap1);
  EXPECT_EQ(spec_at_sensitivity(s2, 0.98), sp2);
}

TEST(CrossingPair, SuchPairsExistAmongAllRankings) {
  // Every placement of 4 positives among 10 ranked items; look for a pair
  // where AP and spec@0.98 order the two rankings oppositely.
  std::vector<std::pair<double, double>> measures;
  for (int mask = 0; mask < 1024; ++mask) {
    if (__builtin_popcount(mask) != 4) continue;
    std::vector<double> s;
    std::vector<Label> l;
    for (int i = 0; i < 10; ++i) {
      s.push_back(10.0 - i);
      l.push_back(mask >> i & 1 ? Label::Malignant : Label::Benign);
    }
    measures.emplace_back(oracle::step_sum_ap(s, l), oracle::spec_at_least(s, l, 0.98));
  }
  ASSERT_EQ(measures.size(), 210u);
  int reversals = 0;
  for (const auto& a : measures) {
    for (const auto& b : measures) reversals += a.first > b.first && a.second < b.second;
  }
  EXPECT_GT(reversals, 0);
}

TEST(CrossingField, ProducesRankReversals) {
  const auto spec = crossing_field(10, 42);
  ASSERT_EQ(spec.systems.size(), 10u);
  const auto field = synth_challenge(spec);
  ASSERT_EQ(field.size(), 10u);
  EXPECT_EQ(field.front().system_id(), "sys01");
  for (const auto& ps : field) {
    EXPECT_EQ(ps.n_pos(), 75u);
    for (double s : ps.scores()) {
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, 1.0);
    }
  }
  std::vector<std::pair<double, double>> v;
  for (const auto& ps : field) v.emplace_back(average_precision(ps), spec_at_sensitivity(ps, 0.98));
  int reversals = 0;
  for (const auto& a : v) {
    for (const auto& b : v) reversals += a.first > b.first && a.second < b.second;
  }
  EXPECT_GT(reversals, 0);
}
