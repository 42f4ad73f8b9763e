#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdrank {

/// Ground-truth class of an item. Malignant is the positive class.
enum class Label : std::uint8_t { Benign = 0, Malignant = 1 };

std::string_view label_name(Label label) noexcept;

struct LabeledScore {
  std::string item_id;
  double score = 0.0;
  Label label = Label::Benign;
};

struct ScoreRecord {
  std::string item_id;
  double score = 0.0;
};

struct TruthRecord {
  std::string item_id;
  Label label = Label::Benign;
};

/// Non-owning scores/labels pair that every measure kernel consumes.
/// Both classes are guaranteed present; build with make_score_view() or
/// PredictionSet::view().
struct ScoreView {
  std::span<const double> scores;
  std::span<const Label> labels;
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;

  std::size_t size() const noexcept { return scores.size(); }
};

/// Counts classes and throws ValidationError when either class is absent or
/// the spans disagree in length.
ScoreView make_score_view(std::span<const double> scores, std::span<const Label> labels);

/// One system's validated predictions joined with ground truth. Immutable.
class PredictionSet {
 public:
  /// Enforces: non-empty unique ids, finite scores, both classes present.
  PredictionSet(std::string system_id, std::vector<LabeledScore> items);

  const std::string& system_id() const noexcept { return system_id_; }
  const std::vector<LabeledScore>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  std::size_t n_pos() const noexcept { return n_pos_; }
  std::size_t n_neg() const noexcept { return n_neg_; }

  std::span<const double> scores() const noexcept { return scores_; }
  std::span<const Label> labels() const noexcept { return labels_; }
  ScoreView view() const noexcept { return {scores_, labels_, n_pos_, n_neg_}; }
  operator ScoreView() const noexcept { return view(); }  // NOLINT(google-explicit-constructor)

 private:
  std::string system_id_;
  std::vector<LabeledScore> items_;
  std::vector<double> scores_;
  std::vector<Label> labels_;
  std::size_t n_pos_ = 0;
  std::size_t n_neg_ = 0;
};

struct FeatureRow {
  std::string item_id;
  Label label = Label::Benign;
  std::vector<double> features;
};

/// Labeled feature vectors of one common dimension d >= 1, both classes present.
class FeatureDataset {
 public:
  explicit FeatureDataset(std::vector<FeatureRow> rows);

  const std::vector<FeatureRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t n_pos() const noexcept { return n_pos_; }
  std::size_t n_neg() const noexcept { return n_neg_; }

  /// Rows at the given indices, in that order.
  FeatureDataset subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<FeatureRow> rows_;
  std::size_t dim_ = 0;
  std::size_t n_pos_ = 0;
  std::size_t n_neg_ = 0;
};

struct JoinOptions {
  /// Truth ids without a prediction become warnings instead of errors.
  bool allow_partial = false;
};

// Parsers for the comma-separated formats. Headers must match exactly after
// trimming; `\n` and `\r\n` line endings are accepted; blank lines are
// skipped. Errors carry the 1-based line number.

/// `image_id,score`
std::vector<ScoreRecord> parse_predictions(std::string_view text, std::string_view system_id = {});
/// `image_id,label` with labels benign/malignant (any case) or 0/1.
std::vector<TruthRecord> parse_truth(std::string_view text);
/// `image_id,label,f1,...,fd`
FeatureDataset parse_features(std::string_view text);

Label parse_label(std::string_view token, std::size_t line = 0);

/// Inner join on item id. Scores outside [0,1] and (with allow_partial) any
/// dropped truth ids are reported through `warnings` when given.
PredictionSet join(std::span<const ScoreRecord> preds, std::span<const TruthRecord> truth,
                   std::string system_id, const JoinOptions& options = {},
                   std::vector<std::string>* warnings = nullptr);

std::string write_predictions(const PredictionSet& ps);
std::string write_truth(const PredictionSet& ps);
std::string write_features(const FeatureDataset& ds);

/// Shortest decimal text that parses back to the same double.
std::string format_round_trip(double value);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace mdrank
