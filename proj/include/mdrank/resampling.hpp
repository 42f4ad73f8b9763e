#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mdrank/curves.hpp"
#include "mdrank/gda.hpp"
#include "mdrank/prediction_data.hpp"
#include "mdrank/rng.hpp"

namespace mdrank {

/// Summary of a resampled measure. replicate_values[r] always belongs to
/// replicate r, whatever the execution order.
struct ResampleSummary {
  std::string measure_name;
  double point_estimate = 0.0;
  std::vector<double> replicate_values;
  double mean = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double ci_level = 0.95;
  std::size_t n_replicates = 0;
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct BootstrapOptions {
  std::size_t n_replicates = 1000;
  std::uint64_t seed = 42;
  bool stratified = true;
  double ci_level = 0.95;
  SpecConvention convention = SpecConvention::AtLeast;
  int threads = 0;  // 0: OpenMP default
};

/// Unstratified replicates that lose a class are redrawn at most this often.
inline constexpr int kMaxRedraws = 1000;

/// Item indices for one bootstrap replicate. Stratified draws keep the class
/// counts; unstratified draws are redrawn until both classes appear.
std::vector<std::size_t> bootstrap_indices(std::span<const Label> labels, std::mt19937_64& rng, bool stratified);

/// Percentile interval from the order statistics of `values` (nearest rank).
std::pair<double, double> percentile_interval(std::vector<double> values, double level);

/// Parallel over replicates. Bit-identical to bootstrap_measure_serial for any
/// thread count.
ResampleSummary bootstrap_measure(const ScoreView& data, Measure measure, const BootstrapOptions& options);
/// Single-threaded reference implementation.
ResampleSummary bootstrap_measure_serial(const ScoreView& data, Measure measure, const BootstrapOptions& options);

struct FoldAssignment {
  std::size_t k = 0;
  std::vector<std::size_t> fold;  // fold index per dataset row
  std::vector<std::string> item_ids;
  bool stratified = true;

  std::vector<std::size_t> members(std::size_t f) const;
};

FoldAssignment stratified_kfold(const FeatureDataset& ds, std::size_t k, std::uint64_t seed);

struct CvOptions {
  Sweep sweep = Sweep::Threshold;
  PriorMode prior;
  SpecConvention convention = SpecConvention::AtLeast;
  double ci_level = 0.95;
  int threads = 0;
};

/// Held-out scores of every item, each produced by the model fitted on the
/// other k-1 folds, as one pooled PredictionSet.
PredictionSet cv_pooled_scores(const FeatureDataset& ds, GdaVariant variant, const FoldAssignment& folds,
                               const CvOptions& options = {});

/// Pooled measure as point estimate; per-fold measures as replicate values.
ResampleSummary cv_measure(const FeatureDataset& ds, GdaVariant variant, std::size_t k, Measure measure,
                           std::uint64_t seed, const CvOptions& options = {});

}  // namespace mdrank
