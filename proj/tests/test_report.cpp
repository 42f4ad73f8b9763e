#include <gtest/gtest.h>

#include <json.hpp>

#include "mdrank/error.hpp"
#include "mdrank/report.hpp"
#include "mdrank/synth.hpp"

using namespace mdrank;

namespace {

EvaluationReport sample_report() {
  const auto ps = binormal_scores({.n_pos = 20, .n_neg = 60});
  EvaluationReport r;
  r.meta.command = "evaluate";
  r.meta.seed = 42;
  r.meta.n_pos = ps.n_pos();
  r.meta.n_neg = ps.n_neg();
  SystemEntry e{measure_report(ps), {}};
  e.resampling.push_back(bootstrap_measure(ps, Measure::AucRoc, {.n_replicates = 50}));
  r.systems.push_back(e);
  return r;
}

}  // namespace

TEST(RoundSig6, KeepsSixDigits) {
  EXPECT_EQ(round_sig6(0.123456789), 0.123457);
  EXPECT_EQ(round_sig6(1.0), 1.0);
  EXPECT_EQ(round_sig6(5.0 / 6.0), 0.833333);
}

TEST(Json, DeterministicAndComplete) {
  const auto r = sample_report();
  const auto text = to_json(r);
  EXPECT_EQ(text, to_json(r));
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["meta"]["tool"], "mdrank");
  EXPECT_EQ(j["meta"]["seed"], 42);
  EXPECT_EQ(j["meta"]["conventions"]["spec_at_sensitivity"], "at-least");
  EXPECT_EQ(j["meta"]["conventions"]["decision_rule"], "score>=threshold");
  EXPECT_EQ(j["meta"]["conventions"]["average_precision"], "step-sum");
  const auto& m = j["systems"][0]["measures"];
  for (auto k : kAllMeasures) EXPECT_TRUE(m.contains(std::string(measure_key(k))));
  EXPECT_EQ(j["systems"][0]["resampling"]["auc_roc"]["n_replicates"], 50);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Json, ConventionRecorded) {
  auto r = sample_report();
  r.meta.convention = SpecConvention::Interpolate;
  EXPECT_EQ(nlohmann::json::parse(to_json(r))["meta"]["conventions"]["spec_at_sensitivity"], "interpolate");
}

TEST(Csv, ValuesMatchJson) {
  const auto r = sample_report();
  const auto j = nlohmann::json::parse(to_json(r));
  const auto csv = to_csv(r);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "system_id,measure,value,mean,ci_lo,ci_hi,n_replicates");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    const std::string key = line.substr(c1 + 1, c2 - c1 - 1);
    const double v = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
    EXPECT_EQ(v, j["systems"][0]["measures"][key].get<double>()) << key;
  }
  EXPECT_EQ(rows, 6);
}

TEST(ScoreGrid, SingleSystemLayout) {
  MeasureReport r;
  r.average_precision = 0.35;
  r.auc_roc = 0.64;
  r.spec_at_95 = 0.23;
  r.spec_at_98 = 0.13;
  r.spec_at_99 = 0.12;
  EXPECT_EQ(render_score_grid({"Automatic"}, {r}, kSummaryMeasures),
            "                   Automatic\n"
            "Average precision       0.35\n"
            "AUC of the ROC          0.64\n"
            "SE = 95%                0.23\n"
            "SE = 98%                0.13\n"
            "SE = 99%                0.12\n");
}

TEST(ScoreGrid, ClassifierColumns) {
  std::vector<MeasureReport> reports(4);
  for (std::size_t i = 0; i < 4; ++i) reports[i].spec_at_95 = 0.1 * static_cast<double>(i + 1);
  const auto text = render_score_grid({"LDA", "QDA", "dLDA", "dQDA"}, reports, kHighSensitivityMeasures);
  EXPECT_EQ(text.substr(0, text.find('\n')), "           LDA   QDA  dLDA  dQDA");
  EXPECT_NE(text.find("SE = 95%  0.10  0.20  0.30  0.40"), std::string::npos) << text;
}

TEST(RocPlot, SvgStructure) {
  const std::vector<double> s = {0.9, 0.8, 0.4, 0.3};
  const std::vector<Label> l = {Label::Malignant, Label::Malignant, Label::Benign, Label::Benign};
  const auto perfect = roc_curve(make_score_view(s, l));
  const auto other = roc_curve(binormal_scores({.n_pos = 10, .n_neg = 10}));
  const auto svg = render_roc_svg({{"perfect", perfect}, {"other", other}});
  const auto count = [&](std::string_view needle) {
    int n = 0;
    for (auto p = svg.find(needle); p != std::string::npos; p = svg.find(needle, p + 1)) ++n;
    return n;
  };
  EXPECT_EQ(count("class=\"roc-curve\""), 2);
  EXPECT_EQ(count("class=\"legend-entry\""), 2);
  EXPECT_EQ(count("class=\"high-sensitivity-band\""), 1);
  // Top-left corner: specificity 1, sensitivity 1.
  const auto first_curve = svg.substr(svg.find("class=\"roc-curve\""));
  EXPECT_NE(first_curve.substr(0, first_curve.find("/>")).find("60.000,20.000"), std::string::npos);
  EXPECT_THROW(render_roc_svg({}), ValidationError);
  EXPECT_THROW(render_roc_plot({{"p", perfect}}, "/nonexistent/dir/plot.svg"), IoError);
  EXPECT_FALSE(render_roc_text({{"p", perfect}}).empty());
}
