#include "mdrank/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace mdrank {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string sig6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

ordered_json conventions_block(const ReportMeta& meta) {
  ordered_json c;
  c["spec_at_sensitivity"] = std::string(convention_name(meta.convention));
  c["average_precision"] = "step-sum";
  c["decision_rule"] = "score>=threshold";
  c["ties"] = "grouped";
  c["partial_auc"] = "at-least-staircase";
  c["confidence_interval"] = "percentile-nearest-rank";
  c["ci_level"] = meta.ci_level;
  return c;
}

ordered_json summary_json(const ResampleSummary& s) {
  ordered_json j;
  j["point_estimate"] = round_sig6(s.point_estimate);
  j["mean"] = round_sig6(s.mean);
  j["ci_lo"] = round_sig6(s.ci_lo);
  j["ci_hi"] = round_sig6(s.ci_hi);
  j["n_replicates"] = s.n_replicates;
  j["seed"] = s.seed;
  j["stratified"] = s.stratified;
  return j;
}

}  // namespace

double round_sig6(double value) { return std::strtod(sig6(value).c_str(), nullptr); }

std::string to_json(const EvaluationReport& report) {
  ordered_json root;
  ordered_json meta;
  meta["tool"] = "mdrank";
  meta["version"] = MDRANK_VERSION;
  meta["command"] = report.meta.command;
  if (report.meta.seed) {
    meta["seed"] = *report.meta.seed;
  } else {
    meta["seed"] = nullptr;
  }
  meta["n_pos"] = report.meta.n_pos;
  meta["n_neg"] = report.meta.n_neg;
  meta["conventions"] = conventions_block(report.meta);
  for (const auto& f : report.meta.extra) {
    if (f.numeric) {
      meta[f.key] = ordered_json::parse(f.value);
    } else {
      meta[f.key] = f.value;
    }
  }
  root["meta"] = std::move(meta);

  ordered_json systems = ordered_json::array();
  for (const auto& entry : report.systems) {
    ordered_json sys;
    sys["system_id"] = entry.measures.system_id;
    sys["n_pos"] = entry.measures.n_pos;
    sys["n_neg"] = entry.measures.n_neg;
    ordered_json measures;
    for (auto m : kAllMeasures) measures[std::string(measure_key(m))] = round_sig6(entry.measures.value(m));
    sys["measures"] = std::move(measures);
    if (!entry.resampling.empty()) {
      ordered_json rs;
      for (const auto& s : entry.resampling) rs[s.measure_name] = summary_json(s);
      sys["resampling"] = std::move(rs);
    }
    systems.push_back(std::move(sys));
  }
  root["systems"] = std::move(systems);

  if (report.ranking) {
    const auto& t = *report.ranking;
    ordered_json ranking;
    ordered_json measure_names = ordered_json::array();
    for (auto m : t.measures) measure_names.push_back(std::string(measure_key(m)));
    ranking["measures"] = std::move(measure_names);
    ordered_json rows = ordered_json::array();
    for (std::size_t s = 0; s < t.systems.size(); ++s) {
      ordered_json row;
      row["system_id"] = t.systems[s];
      ordered_json scores;
      ordered_json ranks;
      for (std::size_t m = 0; m < t.measures.size(); ++m) {
        scores[std::string(measure_key(t.measures[m]))] = round_sig6(t.score[s][m]);
        ranks[std::string(measure_key(t.measures[m]))] = t.rank[s][m];
      }
      row["scores"] = std::move(scores);
      row["ranks"] = std::move(ranks);
      rows.push_back(std::move(row));
    }
    ranking["rows"] = std::move(rows);
    ranking["rendered"] = render_ranking_table(t);
    root["ranking"] = std::move(ranking);
  }

  if (!report.agreements.empty()) {
    ordered_json agreements = ordered_json::array();
    for (const auto& a : report.agreements) {
      ordered_json j;
      j["measure_a"] = std::string(measure_key(a.a));
      j["measure_b"] = std::string(measure_key(a.b));
      if (a.kendall_tau) {
        j["kendall_tau"] = round_sig6(*a.kendall_tau);
      } else {
        j["kendall_tau"] = nullptr;
      }
      j["pairwise_flip_count"] = a.pairwise_flip_count;
      agreements.push_back(std::move(j));
    }
    root["rank_agreement"] = std::move(agreements);
  }

  if (!report.stability.empty()) {
    ordered_json stability = ordered_json::array();
    for (const auto& st : report.stability) {
      ordered_json j;
      j["measure"] = std::string(measure_key(st.measure));
      j["n_replicates"] = st.n_replicates;
      j["seed"] = st.seed;
      ordered_json pairs = ordered_json::array();
      for (std::size_t a = 0; a < st.systems.size(); ++a) {
        for (std::size_t b = a + 1; b < st.systems.size(); ++b) {
          ordered_json p;
          p["system_a"] = st.systems[a];
          p["system_b"] = st.systems[b];
          p["a_over_b"] = round_sig6(st.outrank_fraction(a, b));
          p["b_over_a"] = round_sig6(st.outrank_fraction(b, a));
          p["tie"] = round_sig6(st.tie_fraction(a, b));
          pairs.push_back(std::move(p));
        }
      }
      j["pairs"] = std::move(pairs);
      stability.push_back(std::move(j));
    }
    root["rank_stability"] = std::move(stability);
  }

  return root.dump(2) + "\n";
}

std::string to_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out << "system_id,measure,value,mean,ci_lo,ci_hi,n_replicates\n";
  for (const auto& entry : report.systems) {
    for (auto m : kAllMeasures) {
      out << entry.measures.system_id << ',' << measure_key(m) << ',' << sig6(entry.measures.value(m));
      const ResampleSummary* summary = nullptr;
      for (const auto& s : entry.resampling) {
        if (s.measure_name == measure_key(m)) summary = &s;
      }
      if (summary) {
        out << ',' << sig6(summary->mean) << ',' << sig6(summary->ci_lo) << ',' << sig6(summary->ci_hi) << ','
            << summary->n_replicates;
      } else {
        out << ",,,,";
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string_view measure_row_label(Measure m) noexcept {
  switch (m) {
    case Measure::AveragePrecision: return "Average precision";
    case Measure::AucRoc: return "AUC of the ROC";
    default: return measure_label(m);
  }
}

std::string render_score_grid(const std::vector<std::string>& column_names, const std::vector<MeasureReport>& reports,
                              const std::vector<Measure>& measures) {
  std::size_t label_width = 0;
  for (auto m : measures) label_width = std::max(label_width, measure_row_label(m).size());
  std::size_t cell_width = 4;
  for (const auto& c : column_names) cell_width = std::max(cell_width, c.size());

  std::string out(label_width, ' ');
  for (const auto& c : column_names) {
    out += "  ";
    out += std::string(cell_width - c.size(), ' ') + c;
  }
  out += '\n';
  for (auto m : measures) {
    const auto label = measure_row_label(m);
    out += std::string(label) + std::string(label_width - label.size(), ' ');
    for (const auto& r : reports) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", r.value(m));
      const std::string cell = buf;
      out += "  " + std::string(cell_width - std::min(cell_width, cell.size()), ' ') + cell;
    }
    out += '\n';
  }
  return out;
}

}  // namespace mdrank
