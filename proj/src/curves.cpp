#include "mdrank/curves.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mdrank {

namespace {

// Cumulative counts after admitting every item with score >= threshold.
struct TieGroup {
  double threshold;
  std::size_t tp;
  std::size_t fp;
};

std::vector<TieGroup> tie_groups(const ScoreView& data) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return data.scores[a] > data.scores[b]; });

  std::vector<TieGroup> groups;
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double s = data.scores[order[k]];
    for (; k < order.size() && data.scores[order[k]] == s; ++k) {
      (data.labels[order[k]] == Label::Malignant ? tp : fp) += 1;
    }
    groups.push_back({s, tp, fp});
  }
  return groups;
}

OperatingPoint make_point(double threshold, std::size_t tp, std::size_t fp, std::size_t n_pos, std::size_t n_neg) {
  OperatingPoint p;
  p.threshold = threshold;
  p.counts = {tp, fp, n_neg - fp, n_pos - tp};
  p.sensitivity = static_cast<double>(tp) / static_cast<double>(n_pos);
  p.specificity = static_cast<double>(n_neg - fp) / static_cast<double>(n_neg);
  if (tp + fp > 0) p.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  return p;
}

void check_target(double target) {
  if (!(target > 0.0 && target <= 1.0)) throw std::invalid_argument("target sensitivity must lie in (0, 1]");
}

void check_lo(double lo) {
  if (!(lo >= 0.0 && lo < 1.0)) throw std::invalid_argument("partial AUC lower bound must lie in [0, 1)");
}

}  // namespace

std::string_view convention_name(SpecConvention c) noexcept {
  return c == SpecConvention::AtLeast ? "at-least" : "interpolate";
}

std::optional<SpecConvention> parse_convention(std::string_view name) noexcept {
  if (name == "at-least") return SpecConvention::AtLeast;
  if (name == "interpolate") return SpecConvention::Interpolate;
  return std::nullopt;
}

ConfusionCounts confusion_at_threshold(const ScoreView& data, double threshold) {
  ConfusionCounts c;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const bool called = data.scores[i] >= threshold;
    if (data.labels[i] == Label::Malignant) {
      (called ? c.tp : c.fn) += 1;
    } else {
      (called ? c.fp : c.tn) += 1;
    }
  }
  return c;
}

RocCurve roc_curve(const ScoreView& data) {
  const auto groups = tie_groups(data);
  RocCurve curve;
  curve.points.reserve(groups.size() + 2);
  curve.points.push_back(make_point(std::numeric_limits<double>::infinity(), 0, 0, data.n_pos, data.n_neg));
  for (const auto& g : groups) curve.points.push_back(make_point(g.threshold, g.tp, g.fp, data.n_pos, data.n_neg));
  curve.points.push_back(
      make_point(-std::numeric_limits<double>::infinity(), data.n_pos, data.n_neg, data.n_pos, data.n_neg));
  return curve;
}

PrCurve pr_curve(const ScoreView& data) {
  const auto groups = tie_groups(data);
  PrCurve curve;
  curve.points.reserve(groups.size());
  for (const auto& g : groups) {
    curve.points.push_back({g.threshold, static_cast<double>(g.tp) / static_cast<double>(data.n_pos),
                            static_cast<double>(g.tp) / static_cast<double>(g.tp + g.fp)});
  }
  return curve;
}

double auc_roc(const RocCurve& curve) {
  if (curve.points.size() < 2) throw std::invalid_argument("ROC curve needs at least two points");
  const auto& last = curve.points.back().counts;
  const std::uint64_t n_pos = last.tp + last.fn;
  const std::uint64_t n_neg = last.fp + last.tn;
  // Twice the trapezoid area in count units: sum of dFP * (TP_i + TP_{i-1}).
  std::uint64_t twice_area = 0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& a = curve.points[i - 1].counts;
    const auto& b = curve.points[i].counts;
    twice_area += static_cast<std::uint64_t>(b.fp - a.fp) * (b.tp + a.tp);
  }
  return static_cast<double>(twice_area) / static_cast<double>(2 * n_pos * n_neg);
}

double auc_roc(const ScoreView& data) { return auc_roc(roc_curve(data)); }

double average_precision(const ScoreView& data) {
  const double n_pos = static_cast<double>(data.n_pos);
  double ap = 0.0;
  std::size_t prev_tp = 0;
  for (const auto& g : tie_groups(data)) {
    if (g.tp != prev_tp) {
      const double recall_step = static_cast<double>(g.tp - prev_tp) / n_pos;
      const double precision = static_cast<double>(g.tp) / static_cast<double>(g.tp + g.fp);
      ap += recall_step * precision;
      prev_tp = g.tp;
    }
  }
  return ap;
}

double spec_at_sensitivity(const RocCurve& curve, double target, SpecConvention convention) {
  check_target(target);
  const auto& pts = curve.points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].sensitivity < target) continue;
    if (convention == SpecConvention::AtLeast || i == 0) return pts[i].specificity;
    const auto& lo = pts[i - 1];
    const auto& hi = pts[i];
    const double w = (target - lo.sensitivity) / (hi.sensitivity - lo.sensitivity);
    return lo.specificity + w * (hi.specificity - lo.specificity);
  }
  // Unreachable for a well-formed curve: the last point has SE = 1.
  return 0.0;
}

double spec_at_sensitivity(const ScoreView& data, double target, SpecConvention convention) {
  return spec_at_sensitivity(roc_curve(data), target, convention);
}

double partial_auc(const RocCurve& curve, double lo) {
  check_lo(lo);
  // SP(SE) on (SE_{i-1}, SE_i] is SP_i, the at-least specificity.
  double area = 0.0;
  const auto& pts = curve.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double left = std::max(pts[i - 1].sensitivity, lo);
    const double right = pts[i].sensitivity;
    if (right > left) area += (right - left) * pts[i].specificity;
  }
  return area / (1.0 - lo);
}

double partial_auc(const ScoreView& data, double lo) { return partial_auc(roc_curve(data), lo); }

std::string_view measure_key(Measure m) noexcept {
  switch (m) {
    case Measure::AveragePrecision: return "average_precision";
    case Measure::AucRoc: return "auc_roc";
    case Measure::SpecAt95: return "spec_at_0.95";
    case Measure::SpecAt98: return "spec_at_0.98";
    case Measure::SpecAt99: return "spec_at_0.99";
    case Measure::PartialAuc95: return "pauc_95_100";
  }
  return "";
}

std::string_view measure_label(Measure m) noexcept {
  switch (m) {
    case Measure::AveragePrecision: return "Av. precision";
    case Measure::AucRoc: return "AUC of ROC";
    case Measure::SpecAt95: return "SE = 95%";
    case Measure::SpecAt98: return "SE = 98%";
    case Measure::SpecAt99: return "SE = 99%";
    case Measure::PartialAuc95: return "pAUC 95-100%";
  }
  return "";
}

std::optional<Measure> parse_measure(std::string_view name) noexcept {
  for (auto m : kAllMeasures) {
    if (measure_key(m) == name) return m;
  }
  // Short aliases for the command line.
  if (name == "ap") return Measure::AveragePrecision;
  if (name == "auc") return Measure::AucRoc;
  if (name == "se95") return Measure::SpecAt95;
  if (name == "se98") return Measure::SpecAt98;
  if (name == "se99") return Measure::SpecAt99;
  if (name == "pauc") return Measure::PartialAuc95;
  return std::nullopt;
}

double evaluate_measure(const ScoreView& data, Measure m, SpecConvention convention) {
  switch (m) {
    case Measure::AveragePrecision: return average_precision(data);
    case Measure::AucRoc: return auc_roc(data);
    case Measure::SpecAt95: return spec_at_sensitivity(data, 0.95, convention);
    case Measure::SpecAt98: return spec_at_sensitivity(data, 0.98, convention);
    case Measure::SpecAt99: return spec_at_sensitivity(data, 0.99, convention);
    case Measure::PartialAuc95: return partial_auc(data, 0.95);
  }
  throw std::invalid_argument("unknown measure");
}

double MeasureReport::value(Measure m) const noexcept {
  switch (m) {
    case Measure::AveragePrecision: return average_precision;
    case Measure::AucRoc: return auc_roc;
    case Measure::SpecAt95: return spec_at_95;
    case Measure::SpecAt98: return spec_at_98;
    case Measure::SpecAt99: return spec_at_99;
    case Measure::PartialAuc95: return pauc_95_100;
  }
  return 0.0;
}

MeasureReport measure_report(std::string system_id, const ScoreView& data, SpecConvention convention) {
  const RocCurve curve = roc_curve(data);
  MeasureReport r;
  r.system_id = std::move(system_id);
  r.n_pos = data.n_pos;
  r.n_neg = data.n_neg;
  r.average_precision = average_precision(data);
  r.auc_roc = auc_roc(curve);
  r.spec_at_95 = spec_at_sensitivity(curve, 0.95, convention);
  r.spec_at_98 = spec_at_sensitivity(curve, 0.98, convention);
  r.spec_at_99 = spec_at_sensitivity(curve, 0.99, convention);
  r.pauc_95_100 = partial_auc(curve, 0.95);
  return r;
}

MeasureReport measure_report(const PredictionSet& ps, SpecConvention convention) {
  return measure_report(ps.system_id(), ps.view(), convention);
}

}  // namespace mdrank
