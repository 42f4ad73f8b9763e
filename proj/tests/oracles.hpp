#pragma once

// Brute-force reference computations used only by the tests. Each one is
// written against the definitions directly (pair counting, threshold-by-
// threshold rescans, numeric integration) and shares no code with the
// library's sorted-sweep kernels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "mdrank/prediction_data.hpp"

namespace mdrank::oracle {

struct Counts {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline Counts count_at(const std::vector<double>& s, const std::vector<Label>& l, double t) {
  Counts c;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const bool called = s[i] >= t;
    if (l[i] == Label::Malignant) {
      (called ? c.tp : c.fn)++;
    } else {
      (called ? c.fp : c.tn)++;
    }
  }
  return c;
}

inline std::size_t positives(const std::vector<Label>& l) {
  return static_cast<std::size_t>(std::count(l.begin(), l.end(), Label::Malignant));
}

/// Mean over (pos, neg) pairs of 1[s_pos > s_neg] + 1/2 1[s_pos = s_neg].
inline double pairwise_auc(const std::vector<double>& s, const std::vector<Label>& l) {
  std::uint64_t twice = 0;
  std::uint64_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < s.size(); ++i) (l[i] == Label::Malignant ? n_pos : n_neg)++;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (l[i] != Label::Malignant) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (l[j] != Label::Benign) continue;
      if (s[i] > s[j]) twice += 2;
      else if (s[i] == s[j]) twice += 1;
    }
  }
  return static_cast<double>(twice) / static_cast<double>(2 * n_pos * n_neg);
}

/// Distinct scores, descending.
inline std::vector<double> thresholds_desc(const std::vector<double>& s) {
  std::set<double, std::greater<>> distinct(s.begin(), s.end());
  return {distinct.begin(), distinct.end()};
}

/// Step sum over distinct thresholds, each evaluated by a full rescan.
inline double step_sum_ap(const std::vector<double>& s, const std::vector<Label>& l) {
  const double n_pos = static_cast<double>(positives(l));
  double ap = 0.0;
  std::size_t prev_tp = 0;
  for (double t : thresholds_desc(s)) {
    const Counts c = count_at(s, l, t);
    if (c.tp == prev_tp) continue;
    ap += (static_cast<double>(c.tp - prev_tp) / n_pos) * (static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp));
    prev_tp = c.tp;
  }
  return ap;
}

/// Specificity at the highest threshold whose sensitivity reaches the target.
inline double spec_at_least(const std::vector<double>& s, const std::vector<Label>& l, double target) {
  const double n_pos = static_cast<double>(positives(l));
  for (double t : thresholds_desc(s)) {
    const Counts c = count_at(s, l, t);
    if (static_cast<double>(c.tp) / n_pos >= target) {
      return static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    }
  }
  return 0.0;
}

/// Midpoint-rule integral of the at-least staircase over [lo, 1], normalized.
inline double pauc_grid(const std::vector<double>& s, const std::vector<Label>& l, double lo, int cells) {
  // Precompute (SE, SP) per threshold once; a cell midpoint then picks the
  // first threshold with SE >= midpoint.
  const double n_pos = static_cast<double>(positives(l));
  std::vector<std::pair<double, double>> steps;
  for (double t : thresholds_desc(s)) {
    const Counts c = count_at(s, l, t);
    steps.emplace_back(static_cast<double>(c.tp) / n_pos, static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp));
  }
  const double h = (1.0 - lo) / cells;
  double sum = 0.0;
  for (int k = 0; k < cells; ++k) {
    const double mid = lo + (k + 0.5) * h;
    for (const auto& [se, sp] : steps) {
      if (se >= mid) {
        sum += sp;
        break;
      }
    }
  }
  return sum * h / (1.0 - lo);
}

/// Standard normal CDF by composite Simpson integration of the density.
inline double phi_quadrature(double x) {
  const double lo = -12.0;
  if (x <= lo) return 0.0;
  const int n = 200000;  // even
  const double h = (x - lo) / n;
  const auto pdf = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI); };
  double sum = pdf(lo) + pdf(x);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * pdf(lo + i * h);
  return sum * h / 3.0;
}

/// AUC by sorting and summing ranks (Mann-Whitney U with mid-ranks).
inline double rank_sum_auc(const std::vector<double>& pos, const std::vector<double>& neg) {
  std::vector<std::pair<double, int>> all;
  all.reserve(pos.size() + neg.size());
  for (double v : pos) all.emplace_back(v, 1);
  for (double v : neg) all.emplace_back(v, 0);
  std::sort(all.begin(), all.end());
  long double rank_sum = 0.0L;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const long double mid_rank = (static_cast<long double>(i + 1) + static_cast<long double>(j)) / 2.0L;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second == 1) rank_sum += mid_rank;
    }
    i = j;
  }
  const long double np = static_cast<long double>(pos.size());
  const long double nn = static_cast<long double>(neg.size());
  return static_cast<double>((rank_sum - np * (np + 1.0L) / 2.0L) / (np * nn));
}

/// Kendall tau-b from explicit pair enumeration over rank vectors.
inline double tau_b_bruteforce(const std::vector<int>& a, const std::vector<int>& b, bool* defined = nullptr) {
  long long conc = 0, disc = 0, ties_a = 0, ties_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const int sa = (a[i] > a[j]) - (a[i] < a[j]);
      const int sb = (b[i] > b[j]) - (b[i] < b[j]);
      if (sa == 0) ++ties_a;
      if (sb == 0) ++ties_b;
      if (sa * sb > 0) ++conc;
      if (sa * sb < 0) ++disc;
    }
  }
  const long long n0 = static_cast<long long>(a.size() * (a.size() - 1) / 2);
  const double denom = std::sqrt(static_cast<double>(n0 - ties_a) * static_cast<double>(n0 - ties_b));
  if (defined) *defined = denom > 0.0;
  return denom > 0.0 ? static_cast<double>(conc - disc) / denom : 0.0;
}

/// Random labeled score vectors with both classes and deliberate ties.
struct RandomSet {
  std::vector<double> scores;
  std::vector<Label> labels;
};

inline RandomSet random_set(std::mt19937_64& rng, std::size_t n_min, std::size_t n_max) {
  std::uniform_int_distribution<std::size_t> size_dist(std::max<std::size_t>(2, n_min), n_max);
  const std::size_t n = size_dist(rng);
  // Coarse grids force ties; some sets use continuous scores.
  std::uniform_int_distribution<int> grid_dist(0, 3);
  const int grid_kind = grid_dist(rng);
  const int levels = grid_kind == 0 ? 2 : grid_kind == 1 ? 5 : grid_kind == 2 ? 20 : 0;
  RandomSet set;
  std::bernoulli_distribution coin(0.4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> level(0, std::max(levels - 1, 0));
  for (std::size_t i = 0; i < n; ++i) {
    set.labels.push_back(coin(rng) ? Label::Malignant : Label::Benign);
    set.scores.push_back(levels ? static_cast<double>(level(rng)) / levels : u(rng));
  }
  set.labels[0] = Label::Malignant;
  set.labels[1] = Label::Benign;
  std::shuffle(set.labels.begin(), set.labels.end(), rng);
  return set;
}

}  // namespace mdrank::oracle
