#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdrank/curves.hpp"
#include "mdrank/prediction_data.hpp"

namespace mdrank {

/// Competition ranking ("1,2,2,4") of higher-is-better scores.
std::map<std::string, int> rank_by_measure(const std::map<std::string, double>& scores);

/// Systems x measures grid of scores and per-measure ranks.
struct RankingTable {
  std::vector<std::string> systems;
  std::vector<Measure> measures;
  std::vector<std::vector<double>> score;  // [system][measure]
  std::vector<std::vector<int>> rank;      // [system][measure]

  std::map<std::string, int> ranks_for(std::size_t measure_index) const;
};

RankingTable cross_ranking_table(const std::vector<MeasureReport>& reports,
                                 const std::vector<Measure>& measures = {kAllMeasures.begin(), kAllMeasures.end()});

/// Measures as rows, systems as columns. A cell shows the 2-decimal score
/// where the system ranks first for that row's measure and the rank elsewhere.
std::string render_ranking_table(const RankingTable& table);

struct PairCounts {
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  std::int64_t tied_a = 0;     // tied in A only
  std::int64_t tied_b = 0;     // tied in B only
  std::int64_t tied_both = 0;
};

PairCounts count_pairs(const std::map<std::string, int>& rank_a, const std::map<std::string, int>& rank_b);

/// Kendall tau-b. Empty when either ranking is constant (tau-b undefined).
std::optional<double> kendall_tau(const std::map<std::string, int>& rank_a, const std::map<std::string, int>& rank_b);

struct RankAgreement {
  Measure a;
  Measure b;
  std::optional<double> kendall_tau;
  std::int64_t pairwise_flip_count = 0;
};

std::vector<RankAgreement> rank_agreements(const RankingTable& table);

/// Outranking counts over bootstrap replicates for every ordered system pair.
struct RankStability {
  Measure measure = Measure::AveragePrecision;
  std::vector<std::string> systems;
  std::size_t n_replicates = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::int64_t>> wins;  // wins[i][j]: replicates with i strictly above j
  std::vector<std::vector<std::int64_t>> ties;  // symmetric

  double outrank_fraction(std::size_t i, std::size_t j) const;
  double tie_fraction(std::size_t i, std::size_t j) const;
};

struct StabilityOptions {
  std::size_t n_replicates = 1000;
  std::uint64_t seed = 42;
  SpecConvention convention = SpecConvention::AtLeast;
  int threads = 0;
};

/// Paired stratified bootstrap: each replicate draws one item resample and
/// re-scores every system on it. Systems must cover the same items with the
/// same labels.
RankStability rank_stability(const std::vector<PredictionSet>& systems, Measure measure,
                             const StabilityOptions& options);
RankStability rank_stability_serial(const std::vector<PredictionSet>& systems, Measure measure,
                                    const StabilityOptions& options);

}  // namespace mdrank
