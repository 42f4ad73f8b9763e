#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdrank/curves.hpp"
#include "mdrank/ranking.hpp"
#include "mdrank/resampling.hpp"

namespace mdrank {

/// Key/value pair in the report's meta block. Values are emitted verbatim as
/// JSON strings unless `numeric` is set.
struct MetaField {
  std::string key;
  std::string value;
  bool numeric = false;
};

struct ReportMeta {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;
  SpecConvention convention = SpecConvention::AtLeast;
  double ci_level = 0.95;
  std::vector<MetaField> extra;  // command-specific, in insertion order
};

struct SystemEntry {
  MeasureReport measures;
  std::vector<ResampleSummary> resampling;
};

/// Everything a command produces. JSON is the canonical rendering.
struct EvaluationReport {
  ReportMeta meta;
  std::vector<SystemEntry> systems;
  std::optional<RankingTable> ranking;
  std::vector<RankAgreement> agreements;
  std::vector<RankStability> stability;
};

/// Measure values rounded to 6 significant digits, as they appear in JSON and CSV.
double round_sig6(double value);

/// Deterministic JSON: fixed key order, measure values at 6 significant digits,
/// meta numbers in shortest round-trip form. Ends with a newline.
std::string to_json(const EvaluationReport& report);

/// One row per (system, measure) with resampling columns when present.
std::string to_csv(const EvaluationReport& report);

/// Measures as rows, one column per report, 2-decimal values. Used for the
/// single-system score table and the per-classifier grid.
std::string render_score_grid(const std::vector<std::string>& column_names,
                              const std::vector<MeasureReport>& reports, const std::vector<Measure>& measures);

/// Row label used by render_score_grid, e.g. "Average precision".
std::string_view measure_row_label(Measure m) noexcept;

inline const std::vector<Measure> kSummaryMeasures = {Measure::AveragePrecision, Measure::AucRoc, Measure::SpecAt95,
                                                    Measure::SpecAt98, Measure::SpecAt99};
inline const std::vector<Measure> kHighSensitivityMeasures = {Measure::SpecAt95, Measure::SpecAt98,
                                                              Measure::SpecAt99};

// ROC plots: sensitivity (vertical) against specificity running from 1 at the
// left to 0 at the right, with the 95-100% sensitivity band shaded.

struct NamedCurve {
  std::string name;
  RocCurve curve;
};

std::string render_roc_svg(const std::vector<NamedCurve>& curves);
std::string render_roc_text(const std::vector<NamedCurve>& curves, int width = 61, int height = 21);
/// Writes the SVG document; throws ValidationError for an empty list and
/// IoError for an unwritable path.
void render_roc_plot(const std::vector<NamedCurve>& curves, const std::string& path);

}  // namespace mdrank
