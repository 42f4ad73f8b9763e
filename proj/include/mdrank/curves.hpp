#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdrank/prediction_data.hpp"

namespace mdrank {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Decision rule is inclusive: an item is called malignant iff score >= threshold.
struct OperatingPoint {
  double threshold = 0.0;
  ConfusionCounts counts;
  double sensitivity = 0.0;
  double specificity = 0.0;
  std::optional<double> precision;  // empty when nothing is called malignant
};

/// Points in decreasing-threshold order: a virtual (SE=0, SP=1) point at
/// +inf, one point per distinct score (ties grouped), and a virtual
/// (SE=1, SP=0) point at -inf.
struct RocCurve {
  std::vector<OperatingPoint> points;
};

struct PrPoint {
  double threshold = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

/// One point per distinct score, decreasing threshold. The zero-prediction
/// endpoint is omitted, so precision is always defined.
struct PrCurve {
  std::vector<PrPoint> points;
};

enum class SpecConvention {
  AtLeast,      // fewest predicted positives with SE >= target
  Interpolate,  // linear in SP between the ROC points bracketing the target
};

std::string_view convention_name(SpecConvention c) noexcept;
std::optional<SpecConvention> parse_convention(std::string_view name) noexcept;

ConfusionCounts confusion_at_threshold(const ScoreView& data, double threshold);

RocCurve roc_curve(const ScoreView& data);
PrCurve pr_curve(const ScoreView& data);

/// Trapezoidal area in (1-SP, SE) space. Evaluated in integer arithmetic, so
/// it agrees bit-for-bit with the half-credit pairwise count.
double auc_roc(const ScoreView& data);
double auc_roc(const RocCurve& curve);

/// Non-interpolated step sum over tie groups: sum_k (R_k - R_{k-1}) * P_k.
double average_precision(const ScoreView& data);

double spec_at_sensitivity(const ScoreView& data, double target,
                           SpecConvention convention = SpecConvention::AtLeast);
double spec_at_sensitivity(const RocCurve& curve, double target,
                           SpecConvention convention = SpecConvention::AtLeast);

/// Normalized area under the at-least specificity staircase for SE in [lo, 1].
double partial_auc(const ScoreView& data, double lo = 0.95);
double partial_auc(const RocCurve& curve, double lo = 0.95);

/// Selectable summary measures. All are higher-is-better and lie in [0,1].
enum class Measure {
  AveragePrecision,
  AucRoc,
  SpecAt95,
  SpecAt98,
  SpecAt99,
  PartialAuc95,
};

inline constexpr std::array<Measure, 6> kAllMeasures = {
    Measure::AveragePrecision, Measure::AucRoc,   Measure::SpecAt95,
    Measure::SpecAt98,         Measure::SpecAt99, Measure::PartialAuc95,
};

/// Stable machine name, e.g. "spec_at_0.98".
std::string_view measure_key(Measure m) noexcept;
/// Table row label, e.g. "SE = 98%".
std::string_view measure_label(Measure m) noexcept;
std::optional<Measure> parse_measure(std::string_view name) noexcept;

double evaluate_measure(const ScoreView& data, Measure m, SpecConvention convention = SpecConvention::AtLeast);

struct MeasureReport {
  std::string system_id;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  double average_precision = 0.0;
  double auc_roc = 0.0;
  double spec_at_95 = 0.0;
  double spec_at_98 = 0.0;
  double spec_at_99 = 0.0;
  double pauc_95_100 = 0.0;

  double value(Measure m) const noexcept;
};

MeasureReport measure_report(const PredictionSet& ps, SpecConvention convention = SpecConvention::AtLeast);
MeasureReport measure_report(std::string system_id, const ScoreView& data,
                             SpecConvention convention = SpecConvention::AtLeast);

}  // namespace mdrank
