#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mdrank/curves.hpp"
#include "oracles.hpp"

using namespace mdrank;

namespace {

constexpr Label M = Label::Malignant;
constexpr Label B = Label::Benign;

struct Set {
  std::vector<double> s;
  std::vector<Label> l;
  ScoreView view() const { return make_score_view(s, l); }
};

Set perfect() { return {{0.9, 0.8, 0.4, 0.3}, {M, M, B, B}}; }
Set mixed() { return {{0.8, 0.6, 0.4, 0.2}, {M, B, M, B}}; }
Set anti_perfect() { return {{0.9, 0.8, 0.4, 0.3}, {B, B, M, M}}; }
// One malignant item tied with a benign one; this puts a diagonal segment in the ROC.
Set tied_pair() { return {{0.9, 0.5, 0.5, 0.1}, {M, M, B, B}}; }

}  // namespace

TEST(Confusion, InclusiveThreshold) {
  const auto s = Set{{0.7, 0.6, 0.5, 0.2}, {M, B, M, B}};
  const auto c = confusion_at_threshold(s.view(), 0.55);
  EXPECT_EQ(c, (ConfusionCounts{1, 1, 1, 1}));
  EXPECT_EQ(confusion_at_threshold(s.view(), 0.5).tp, 2u);
}

TEST(RocCurve, PerfectPath) {
  const auto roc = roc_curve(perfect().view());
  std::vector<std::pair<double, double>> got;
  for (const auto& p : roc.points) got.emplace_back(p.sensitivity, p.specificity);
  const std::vector<std::pair<double, double>> want = {{0, 1}, {0.5, 1}, {1, 1}, {1, 0.5}, {1, 0}, {1, 0}};
  EXPECT_EQ(got, want);
  EXPECT_TRUE(std::isinf(roc.points.front().threshold));
  EXPECT_TRUE(std::isinf(roc.points.back().threshold));
  EXPECT_FALSE(roc.points.front().precision.has_value());
}

TEST(RocCurve, TiesFormOnePoint) {
  const auto roc = roc_curve(tied_pair().view());
  // +inf, 0.9, 0.5, 0.1, -inf
  ASSERT_EQ(roc.points.size(), 5u);
  EXPECT_EQ(roc.points[2].sensitivity, 1.0);
  EXPECT_EQ(roc.points[2].specificity, 0.5);
}

TEST(Auc, Examples) {
  EXPECT_EQ(auc_roc(mixed().view()), 0.75);
  EXPECT_EQ(auc_roc(perfect().view()), 1.0);
  EXPECT_EQ(auc_roc(anti_perfect().view()), 0.0);
  EXPECT_EQ(auc_roc(tied_pair().view()), 0.875);
  EXPECT_DOUBLE_EQ(auc_roc(roc_curve(tied_pair().view())), 0.875);
}

TEST(AveragePrecision, Examples) {
  EXPECT_DOUBLE_EQ(average_precision(mixed().view()), 5.0 / 6.0);
  EXPECT_EQ(average_precision(perfect().view()), 1.0);
  const Set second = {{0.9, 0.1}, {B, M}};
  EXPECT_EQ(average_precision(second.view()), 0.5);
  // Step sum over the anti-perfect ranking: 1/2 * 1/3 + 1/2 * 2/4.
  EXPECT_DOUBLE_EQ(average_precision(anti_perfect().view()), 5.0 / 12.0);
}

TEST(PrCurve, PerfectPrecisionStaysOne) {
  const auto pr = pr_curve(perfect().view());
  ASSERT_FALSE(pr.points.empty());
  for (const auto& p : pr.points) {
    if (p.recall <= 1.0 && p.threshold >= 0.8) EXPECT_EQ(p.precision, 1.0);
  }
}

TEST(SpecAtSensitivity, AtLeastAndInterpolate) {
  EXPECT_EQ(spec_at_sensitivity(mixed().view(), 0.95), 0.5);
  EXPECT_EQ(spec_at_sensitivity(mixed().view(), 0.95, SpecConvention::Interpolate), 0.5);
  EXPECT_EQ(spec_at_sensitivity(tied_pair().view(), 0.75), 0.5);
  EXPECT_DOUBLE_EQ(spec_at_sensitivity(tied_pair().view(), 0.75, SpecConvention::Interpolate), 0.75);
  EXPECT_EQ(spec_at_sensitivity(perfect().view(), 1.0), 1.0);
  EXPECT_THROW(spec_at_sensitivity(perfect().view(), 0.0), std::invalid_argument);
  EXPECT_THROW(spec_at_sensitivity(perfect().view(), 1.01), std::invalid_argument);
}

TEST(SpecAtSensitivity, CountingOnSeventyFivePositives) {
  // Smallest number of detected positives meeting each target.
  const auto required = [](double target) {
    for (int k = 0; k <= 75; ++k) {
      if (k / 75.0 >= target) return k;
    }
    return -1;
  };
  EXPECT_EQ(required(0.95), 72);
  EXPECT_EQ(required(0.98), 74);
  EXPECT_EQ(required(0.99), 75);
  // One missed melanoma out of 75 falls short of 99%.
  EXPECT_NEAR(74.0 / 75.0, 0.9867, 5e-5);
  EXPECT_LT(74.0 / 75.0, 0.99);

  // Same arithmetic through the library: positives ranked 1..75 above all
  // negatives except that negative j sits just above positive 75 - j.
  std::vector<double> s;
  std::vector<Label> l;
  for (int i = 0; i < 75; ++i) {
    s.push_back(1000.0 - i);
    l.push_back(M);
  }
  for (int j = 0; j < 10; ++j) {
    s.push_back(1000.0 - (74 - j) + 0.5);
    l.push_back(B);
  }
  for (int j = 0; j < 90; ++j) {
    s.push_back(-static_cast<double>(j));
    l.push_back(B);
  }
  const auto v = make_score_view(s, l);
  // Detecting 72, 74 or 75 positives admits 7, 9 or 10 negatives.
  EXPECT_DOUBLE_EQ(spec_at_sensitivity(v, 0.95), 93.0 / 100.0);
  EXPECT_DOUBLE_EQ(spec_at_sensitivity(v, 0.98), 91.0 / 100.0);
  EXPECT_DOUBLE_EQ(spec_at_sensitivity(v, 0.99), 90.0 / 100.0);
  EXPECT_EQ(spec_at_sensitivity(v, 0.95), oracle::spec_at_least(s, l, 0.95));
}

TEST(PartialAuc, Staircase) {
  EXPECT_EQ(partial_auc(perfect().view()), 1.0);
  EXPECT_EQ(partial_auc(anti_perfect().view()), 0.0);
  EXPECT_DOUBLE_EQ(partial_auc(tied_pair().view(), 0.95), 0.5);
  EXPECT_DOUBLE_EQ(partial_auc(tied_pair().view(), 0.0), 0.75);
  EXPECT_THROW(partial_auc(perfect().view(), 1.0), std::invalid_argument);
  EXPECT_THROW(partial_auc(perfect().view(), -0.1), std::invalid_argument);
}

TEST(Measures, ReportOnAntiPerfect) {
  const auto s = anti_perfect();
  const auto r = measure_report("anti", s.view());
  EXPECT_EQ(r.auc_roc, 0.0);
  EXPECT_EQ(r.spec_at_95, 0.0);
  EXPECT_EQ(r.spec_at_98, 0.0);
  EXPECT_EQ(r.spec_at_99, 0.0);
  EXPECT_EQ(r.pauc_95_100, 0.0);
  EXPECT_DOUBLE_EQ(r.average_precision, 5.0 / 12.0);
}

TEST(Measures, NamesRoundTrip) {
  for (auto m : kAllMeasures) EXPECT_EQ(parse_measure(measure_key(m)), m);
  EXPECT_EQ(parse_measure("se98"), Measure::SpecAt98);
  EXPECT_FALSE(parse_measure("f1").has_value());
  EXPECT_EQ(parse_convention("interpolate"), SpecConvention::Interpolate);
}

// Property checks against the brute-force oracles on random sets with ties.

TEST(CurveProperties, MatchOracles) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const auto set = oracle::random_set(rng, 2, 60);
    const auto v = make_score_view(set.scores, set.labels);
    EXPECT_EQ(auc_roc(v), oracle::pairwise_auc(set.scores, set.labels));
    EXPECT_EQ(average_precision(v), oracle::step_sum_ap(set.scores, set.labels));
    for (double t : {0.5, 0.95, 0.98, 0.99, 1.0}) {
      EXPECT_EQ(spec_at_sensitivity(v, t), oracle::spec_at_least(set.scores, set.labels, t));
    }
    EXPECT_NEAR(partial_auc(v, 0.9), oracle::pauc_grid(set.scores, set.labels, 0.9, 20000), 2e-3);
  }
}

TEST(CurveProperties, RocIsMonotoneAndCountsSum) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto set = oracle::random_set(rng, 2, 80);
    const auto v = make_score_view(set.scores, set.labels);
    const auto roc = roc_curve(v);
    for (std::size_t i = 0; i < roc.points.size(); ++i) {
      const auto& p = roc.points[i];
      EXPECT_EQ(p.counts.tp + p.counts.fn, v.n_pos);
      EXPECT_EQ(p.counts.fp + p.counts.tn, v.n_neg);
      if (i > 0) {
        EXPECT_GE(p.sensitivity, roc.points[i - 1].sensitivity);
        EXPECT_LE(p.specificity, roc.points[i - 1].specificity);
      }
    }
    double interp_prev = 1.0;
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
      const double at_least = spec_at_sensitivity(v, t);
      const double interp = spec_at_sensitivity(v, t, SpecConvention::Interpolate);
      EXPECT_GE(interp + 1e-15, at_least);
      EXPECT_LE(interp, interp_prev + 1e-15);
      interp_prev = interp;
    }
    const double ap = average_precision(v);
    EXPECT_GE(ap, 0.0);
    EXPECT_LE(ap, 1.0);
  }
}

TEST(CurveProperties, InvariantUnderIncreasingTransforms) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const auto set = oracle::random_set(rng, 2, 40);
    const auto v = make_score_view(set.scores, set.labels);
    std::vector<double> t(set.scores.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = std::exp(3.0 * set.scores[i]) - 7.0;
    const auto w = make_score_view(t, set.labels);
    for (auto m : kAllMeasures) EXPECT_EQ(evaluate_measure(v, m), evaluate_measure(w, m));
  }
}
