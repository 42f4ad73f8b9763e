#include "mdrank/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <sstream>
#include <unordered_map>

#include <omp.h>

#include "mdrank/error.hpp"
#include "mdrank/resampling.hpp"

namespace mdrank {

std::map<std::string, int> rank_by_measure(const std::map<std::string, double>& scores) {
  if (scores.empty()) throw ValidationError("ranking needs at least one system");
  for (const auto& [system, s] : scores) {
    if (!std::isfinite(s)) throw ValidationError("non-finite score for system '" + system + "'");
  }
  std::map<std::string, int> ranks;
  for (const auto& [system, s] : scores) {
    int better = 0;
    for (const auto& [other, t] : scores) better += t > s ? 1 : 0;
    ranks[system] = better + 1;
  }
  return ranks;
}

std::map<std::string, int> RankingTable::ranks_for(std::size_t measure_index) const {
  std::map<std::string, int> out;
  for (std::size_t s = 0; s < systems.size(); ++s) out[systems[s]] = rank[s][measure_index];
  return out;
}

RankingTable cross_ranking_table(const std::vector<MeasureReport>& reports, const std::vector<Measure>& measures) {
  if (reports.empty()) throw ValidationError("ranking table needs at least one report");
  if (measures.empty()) throw ValidationError("ranking table needs at least one measure");
  RankingTable t;
  t.measures = measures;
  for (const auto& r : reports) t.systems.push_back(r.system_id);
  {
    auto sorted = t.systems;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ValidationError("duplicate system id in ranking table");
    }
  }
  t.score.assign(reports.size(), std::vector<double>(measures.size()));
  t.rank.assign(reports.size(), std::vector<int>(measures.size()));
  for (std::size_t m = 0; m < measures.size(); ++m) {
    std::map<std::string, double> column;
    for (std::size_t s = 0; s < reports.size(); ++s) {
      t.score[s][m] = reports[s].value(measures[m]);
      column[reports[s].system_id] = t.score[s][m];
    }
    const auto ranks = rank_by_measure(column);
    for (std::size_t s = 0; s < reports.size(); ++s) t.rank[s][m] = ranks.at(t.systems[s]);
  }
  return t;
}

std::string render_ranking_table(const RankingTable& table) {
  std::size_t label_width = std::string_view("Measure").size();
  for (auto m : table.measures) label_width = std::max(label_width, measure_label(m).size());
  std::size_t cell_width = 4;
  for (const auto& s : table.systems) cell_width = std::max(cell_width, s.size());

  std::ostringstream out;
  const auto pad = [&](std::string_view text, std::size_t width) {
    out << text;
    for (std::size_t i = text.size(); i < width; ++i) out << ' ';
  };
  pad("Measure", label_width);
  for (const auto& s : table.systems) {
    out << "  ";
    pad(s, cell_width);
  }
  out << '\n';
  for (std::size_t m = 0; m < table.measures.size(); ++m) {
    pad(measure_label(table.measures[m]), label_width);
    for (std::size_t s = 0; s < table.systems.size(); ++s) {
      out << "  ";
      if (table.rank[s][m] == 1) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", table.score[s][m]);
        pad(buf, cell_width);
      } else {
        pad(std::to_string(table.rank[s][m]), cell_width);
      }
    }
    out << '\n';
  }
  std::string text = out.str();
  // Drop trailing padding on each line.
  std::string trimmed;
  std::size_t start = 0;
  while (start < text.size()) {
    auto eol = text.find('\n', start);
    auto line = text.substr(start, eol - start);
    line.erase(line.find_last_not_of(' ') + 1);
    trimmed += line + '\n';
    start = eol + 1;
  }
  return trimmed;
}

PairCounts count_pairs(const std::map<std::string, int>& rank_a, const std::map<std::string, int>& rank_b) {
  if (rank_a.size() != rank_b.size()) throw ValidationError("rankings cover different systems");
  std::vector<std::pair<int, int>> v;
  v.reserve(rank_a.size());
  for (const auto& [system, ra] : rank_a) {
    const auto it = rank_b.find(system);
    if (it == rank_b.end()) throw ValidationError("system '" + system + "' missing from the second ranking");
    v.emplace_back(ra, it->second);
  }
  PairCounts c;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      const int da = v[i].first - v[j].first;
      const int db = v[i].second - v[j].second;
      if (da == 0 && db == 0) {
        ++c.tied_both;
      } else if (da == 0) {
        ++c.tied_a;
      } else if (db == 0) {
        ++c.tied_b;
      } else if ((da > 0) == (db > 0)) {
        ++c.concordant;
      } else {
        ++c.discordant;
      }
    }
  }
  return c;
}

std::optional<double> kendall_tau(const std::map<std::string, int>& rank_a, const std::map<std::string, int>& rank_b) {
  if (rank_a.size() < 2) throw ValidationError("Kendall tau needs at least two systems");
  const PairCounts c = count_pairs(rank_a, rank_b);
  // Pairs untied in A: concordant + discordant + tied in B only.
  const double untied_a = static_cast<double>(c.concordant + c.discordant + c.tied_b);
  const double untied_b = static_cast<double>(c.concordant + c.discordant + c.tied_a);
  if (untied_a == 0.0 || untied_b == 0.0) return std::nullopt;
  return static_cast<double>(c.concordant - c.discordant) / std::sqrt(untied_a * untied_b);
}

std::vector<RankAgreement> rank_agreements(const RankingTable& table) {
  std::vector<RankAgreement> out;
  if (table.systems.size() < 2) return out;
  for (std::size_t a = 0; a < table.measures.size(); ++a) {
    const auto ra = table.ranks_for(a);
    for (std::size_t b = a + 1; b < table.measures.size(); ++b) {
      const auto rb = table.ranks_for(b);
      out.push_back({table.measures[a], table.measures[b], kendall_tau(ra, rb), count_pairs(ra, rb).discordant});
    }
  }
  return out;
}

double RankStability::outrank_fraction(std::size_t i, std::size_t j) const {
  return static_cast<double>(wins.at(i).at(j)) / static_cast<double>(n_replicates);
}

double RankStability::tie_fraction(std::size_t i, std::size_t j) const {
  return static_cast<double>(ties.at(i).at(j)) / static_cast<double>(n_replicates);
}

namespace {

// Scores of every system aligned to the item order of the first system.
struct AlignedField {
  std::vector<Label> labels;
  std::vector<std::vector<double>> scores;  // [system][item]
};

AlignedField align(const std::vector<PredictionSet>& systems) {
  if (systems.empty()) throw ValidationError("rank stability needs at least one system");
  const auto& ref = systems.front();
  std::unordered_map<std::string_view, std::size_t> position;
  for (std::size_t i = 0; i < ref.size(); ++i) position.emplace(ref.items()[i].item_id, i);

  AlignedField field;
  field.labels.assign(ref.labels().begin(), ref.labels().end());
  for (const auto& ps : systems) {
    if (ps.size() != ref.size()) {
      throw ValidationError("system '" + ps.system_id() + "' covers " + std::to_string(ps.size()) +
                            " items, expected " + std::to_string(ref.size()));
    }
    std::vector<double> aligned(ref.size());
    for (const auto& item : ps.items()) {
      const auto it = position.find(item.item_id);
      if (it == position.end()) {
        throw ValidationError("system '" + ps.system_id() + "' has item '" + item.item_id +
                              "' not scored by '" + ref.system_id() + "'");
      }
      if (field.labels[it->second] != item.label) {
        throw ValidationError("item '" + item.item_id + "' has inconsistent labels across systems");
      }
      aligned[it->second] = item.score;
    }
    field.scores.push_back(std::move(aligned));
  }
  return field;
}

void replicate_values(const AlignedField& field, Measure measure, const StabilityOptions& options, std::size_t r,
                      std::span<double> out) {
  std::mt19937_64 rng(stream_seed(options.seed, r));
  const auto idx = bootstrap_indices(field.labels, rng, /*stratified=*/true);
  std::vector<double> s(idx.size());
  std::vector<Label> l(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) l[i] = field.labels[idx[i]];
  for (std::size_t sys = 0; sys < field.scores.size(); ++sys) {
    for (std::size_t i = 0; i < idx.size(); ++i) s[i] = field.scores[sys][idx[i]];
    out[sys] = evaluate_measure(make_score_view(s, l), measure, options.convention);
  }
}

RankStability tally(const std::vector<PredictionSet>& systems, Measure measure, const StabilityOptions& options,
                    const std::vector<double>& values) {
  const std::size_t n = systems.size();
  RankStability st;
  st.measure = measure;
  st.n_replicates = options.n_replicates;
  st.seed = options.seed;
  for (const auto& ps : systems) st.systems.push_back(ps.system_id());
  st.wins.assign(n, std::vector<std::int64_t>(n, 0));
  st.ties.assign(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t r = 0; r < options.n_replicates; ++r) {
    const double* v = values.data() + r * n;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (v[i] > v[j]) {
          ++st.wins[i][j];
        } else if (v[i] == v[j]) {
          ++st.ties[i][j];
        }
      }
    }
  }
  return st;
}

void check_stability_options(const StabilityOptions& options) {
  if (options.n_replicates < 1) throw ValidationError("rank stability needs at least one replicate");
}

}  // namespace

RankStability rank_stability_serial(const std::vector<PredictionSet>& systems, Measure measure,
                                    const StabilityOptions& options) {
  check_stability_options(options);
  const AlignedField field = align(systems);
  const std::size_t n = systems.size();
  std::vector<double> values(options.n_replicates * n);
  for (std::size_t r = 0; r < options.n_replicates; ++r) {
    replicate_values(field, measure, options, r, std::span<double>(values.data() + r * n, n));
  }
  return tally(systems, measure, options, values);
}

RankStability rank_stability(const std::vector<PredictionSet>& systems, Measure measure,
                             const StabilityOptions& options) {
  check_stability_options(options);
  const AlignedField field = align(systems);
  const std::size_t n = systems.size();
  std::vector<double> values(options.n_replicates * n);
  const auto reps = static_cast<std::int64_t>(options.n_replicates);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
  std::exception_ptr error;

#pragma omp parallel for num_threads(threads) schedule(dynamic, 4)
  for (std::int64_t r = 0; r < reps; ++r) {
    try {
      const auto ru = static_cast<std::size_t>(r);
      replicate_values(field, measure, options, ru, std::span<double>(values.data() + ru * n, n));
    } catch (...) {
#pragma omp critical(mdrank_stability_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return tally(systems, measure, options, values);
}

}  // namespace mdrank
