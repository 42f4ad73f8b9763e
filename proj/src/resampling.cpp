#include "mdrank/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>

#include <omp.h>

#include "mdrank/error.hpp"

namespace mdrank {

namespace {

// Replicate r: resample, then evaluate. Shared by the serial and parallel paths.
double bootstrap_replicate(const ScoreView& data, Measure measure, const BootstrapOptions& options, std::size_t r,
                           std::vector<double>& scores, std::vector<Label>& labels) {
  std::mt19937_64 rng(stream_seed(options.seed, r));
  const auto idx = bootstrap_indices(data.labels, rng, options.stratified);
  scores.resize(idx.size());
  labels.resize(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    scores[i] = data.scores[idx[i]];
    labels[i] = data.labels[idx[i]];
  }
  return evaluate_measure(make_score_view(scores, labels), measure, options.convention);
}

void check_options(const BootstrapOptions& options) {
  if (options.n_replicates < 1) throw ValidationError("bootstrap needs at least one replicate");
  if (!(options.ci_level > 0.0 && options.ci_level < 1.0)) throw ValidationError("CI level must lie in (0, 1)");
}

ResampleSummary summarize(std::string name, double point, std::vector<double> values, double ci_level,
                          std::uint64_t seed, bool stratified) {
  ResampleSummary s;
  s.measure_name = std::move(name);
  s.point_estimate = point;
  s.ci_level = ci_level;
  s.seed = seed;
  s.stratified = stratified;
  s.n_replicates = values.size();
  if (!values.empty()) {
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    std::tie(s.ci_lo, s.ci_hi) = percentile_interval(values, ci_level);
  }
  s.replicate_values = std::move(values);
  return s;
}

}  // namespace

std::vector<std::size_t> bootstrap_indices(std::span<const Label> labels, std::mt19937_64& rng, bool stratified) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> out(n);
  if (stratified) {
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < n; ++i) (labels[i] == Label::Malignant ? pos : neg).push_back(i);
    std::size_t k = 0;
    for (const auto* cls : {&pos, &neg}) {
      if (cls->empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, cls->size() - 1);
      for (std::size_t j = 0; j < cls->size(); ++j) out[k++] = (*cls)[pick(rng)];
    }
    return out;
  }
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    bool has_pos = false;
    bool has_neg = false;
    for (auto& i : out) {
      i = pick(rng);
      (labels[i] == Label::Malignant ? has_pos : has_neg) = true;
    }
    if (has_pos && has_neg) return out;
  }
  throw ValidationError("unstratified bootstrap replicate lost a class in " + std::to_string(kMaxRedraws) +
                        " consecutive draws; use stratified resampling");
}

std::pair<double, double> percentile_interval(std::vector<double> values, double level) {
  if (values.empty()) throw std::invalid_argument("percentile interval of an empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  const double tail = (1.0 - level) / 2.0;
  // Nearest-rank: the ceil(n*p)-th order statistic, 1-based.
  const auto rank = [&](double p) {
    const double r = std::ceil(n * p - 1e-9);
    return static_cast<std::size_t>(std::clamp(r, 1.0, n)) - 1;
  };
  return {values[rank(tail)], values[rank(1.0 - tail)]};
}

ResampleSummary bootstrap_measure_serial(const ScoreView& data, Measure measure, const BootstrapOptions& options) {
  check_options(options);
  std::vector<double> values(options.n_replicates);
  std::vector<double> scores;
  std::vector<Label> labels;
  for (std::size_t r = 0; r < options.n_replicates; ++r) {
    values[r] = bootstrap_replicate(data, measure, options, r, scores, labels);
  }
  return summarize(std::string(measure_key(measure)), evaluate_measure(data, measure, options.convention),
                   std::move(values), options.ci_level, options.seed, options.stratified);
}

ResampleSummary bootstrap_measure(const ScoreView& data, Measure measure, const BootstrapOptions& options) {
  check_options(options);
  const auto n = static_cast<std::int64_t>(options.n_replicates);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
  std::vector<double> values(options.n_replicates);
  std::exception_ptr error;

#pragma omp parallel num_threads(threads)
  {
    std::vector<double> scores;
    std::vector<Label> labels;
#pragma omp for schedule(dynamic, 8)
    for (std::int64_t r = 0; r < n; ++r) {
      try {
        values[static_cast<std::size_t>(r)] =
            bootstrap_replicate(data, measure, options, static_cast<std::size_t>(r), scores, labels);
      } catch (...) {
#pragma omp critical(mdrank_bootstrap_error)
        if (!error) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return summarize(std::string(measure_key(measure)), evaluate_measure(data, measure, options.convention),
                   std::move(values), options.ci_level, options.seed, options.stratified);
}

std::vector<std::size_t> FoldAssignment::members(std::size_t f) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] == f) out.push_back(i);
  }
  return out;
}

FoldAssignment stratified_kfold(const FeatureDataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ValidationError("cross-validation needs k >= 2");
  if (ds.n_pos() < k || ds.n_neg() < k) {
    throw ValidationError("each class needs at least k = " + std::to_string(k) + " items (malignant: " +
                          std::to_string(ds.n_pos()) + ", benign: " + std::to_string(ds.n_neg()) + ")");
  }
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < ds.size(); ++i) (ds.rows()[i].label == Label::Malignant ? pos : neg).push_back(i);

  std::mt19937_64 rng(stream_seed(seed, 0));
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);

  FoldAssignment fa;
  fa.k = k;
  fa.fold.assign(ds.size(), 0);
  fa.item_ids.reserve(ds.size());
  for (const auto& row : ds.rows()) fa.item_ids.push_back(row.item_id);
  // Deal positives round-robin, then continue dealing negatives where the
  // positives stopped so that fold sizes also differ by at most one.
  std::size_t next = 0;
  for (const auto* cls : {&pos, &neg}) {
    for (auto i : *cls) {
      fa.fold[i] = next;
      next = (next + 1) % k;
    }
  }
  return fa;
}

PredictionSet cv_pooled_scores(const FeatureDataset& ds, GdaVariant variant, const FoldAssignment& folds,
                               const CvOptions& options) {
  if (folds.fold.size() != ds.size()) throw ValidationError("fold assignment does not match the dataset");
  std::vector<double> scores(ds.size());
  std::exception_ptr error;
  const auto k = static_cast<std::int64_t>(folds.k);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();

#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (std::int64_t f = 0; f < k; ++f) {
    try {
      std::vector<std::size_t> train_idx;
      std::vector<std::size_t> test_idx;
      for (std::size_t i = 0; i < ds.size(); ++i) {
        (folds.fold[i] == static_cast<std::size_t>(f) ? test_idx : train_idx).push_back(i);
      }
      GdaModel model = [&] {
        try {
          return fit_gda(ds.subset(train_idx), variant, options.prior);
        } catch (const ValidationError& e) {
          throw FitError("fold " + std::to_string(f) + ": " + e.what());
        }
      }();
      for (auto i : test_idx) {
        const auto& x = ds.rows()[i].features;
        scores[i] = options.sweep == Sweep::Threshold ? model.posterior(x) : model.log_likelihood_ratio(x);
      }
    } catch (...) {
#pragma omp critical(mdrank_cv_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  std::vector<LabeledScore> items;
  items.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) items.push_back({ds.rows()[i].item_id, scores[i], ds.rows()[i].label});
  return PredictionSet(std::string(variant_key(variant)), std::move(items));
}

ResampleSummary cv_measure(const FeatureDataset& ds, GdaVariant variant, std::size_t k, Measure measure,
                           std::uint64_t seed, const CvOptions& options) {
  const FoldAssignment folds = stratified_kfold(ds, k, seed);
  const PredictionSet pooled = cv_pooled_scores(ds, variant, folds, options);
  const double point = evaluate_measure(pooled.view(), measure, options.convention);

  std::vector<double> per_fold;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<double> s;
    std::vector<Label> l;
    for (auto i : folds.members(f)) {
      s.push_back(pooled.scores()[i]);
      l.push_back(pooled.labels()[i]);
    }
    const bool both = std::count(l.begin(), l.end(), Label::Malignant) > 0 &&
                      std::count(l.begin(), l.end(), Label::Benign) > 0;
    if (both) per_fold.push_back(evaluate_measure(make_score_view(s, l), measure, options.convention));
  }
  return summarize(std::string(measure_key(measure)), point, std::move(per_fold), options.ci_level, seed, true);
}

}  // namespace mdrank
