#include "mdrank/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mdrank/curves.hpp"
#include "mdrank/error.hpp"
#include "mdrank/gda.hpp"
#include "mdrank/prediction_data.hpp"
#include "mdrank/ranking.hpp"
#include "mdrank/report.hpp"
#include "mdrank/resampling.hpp"
#include "mdrank/synth.hpp"

namespace mdrank {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kDefaultSeed = 42;

struct EvaluateArgs {
  std::string predictions;
  std::string truth;
  std::size_t bootstrap = 0;
  std::optional<std::uint64_t> seed;
  std::string convention = "at-least";
  std::string out;
  std::string format = "json";
  std::string plot;
  bool partial = false;
  double ci_level = 0.95;
  int threads = 0;
};

struct RankArgs {
  std::string submissions;
  std::string truth;
  std::string measures;
  std::size_t stability = 0;
  std::optional<std::uint64_t> seed;
  std::string convention = "at-least";
  std::string out;
  bool partial = false;
  int threads = 0;
};

struct GdaArgs {
  std::string train;
  std::string test;
  std::size_t cv = 0;
  std::string variant = "qda";
  std::string sweep = "prior";
  std::optional<std::uint64_t> seed;
  std::optional<double> prior;
  std::string convention = "at-least";
  std::string out;
  std::string format = "json";
  std::string save_model;
  int threads = 0;
};

struct SynthArgs {
  std::size_t pos = 75;
  std::size_t neg = 304;
  double mu = 1.0;
  double sigma = 1.0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string truth_out;
  bool features = false;
  std::size_t dim = 2;
  double rho = 0.0;
  std::size_t systems = 0;
};

struct PlotArgs {
  std::vector<std::string> predictions;
  std::string truth;
  std::string out;
  bool text = false;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MDRANK_SEED"); env && *env) {
    std::uint64_t value = 0;
    const std::string_view s(env);
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || end != s.data() + s.size()) {
      throw ValidationError("MDRANK_SEED is not an unsigned integer: '" + std::string(s) + "'");
    }
    return value;
  }
  return kDefaultSeed;
}

SpecConvention resolve_convention(const std::string& name) {
  const auto c = parse_convention(name);
  if (!c) throw ValidationError("unknown convention '" + name + "' (expected at-least or interpolate)");
  return *c;
}

std::string file_stem(const std::string& path) { return fs::path(path).stem().string(); }

std::string default_truth_path(const std::string& out) {
  const fs::path p(out);
  if (p.extension() == ".csv") return (p.parent_path() / (p.stem().string() + "_truth.csv")).string();
  return out + "_truth.csv";
}

PredictionSet load_prediction_set(const std::string& predictions_path, const std::vector<TruthRecord>& truth,
                                  bool partial, std::ostream& err) {
  const std::string system_id = file_stem(predictions_path);
  const auto preds = parse_predictions(read_text_file(predictions_path), system_id);
  std::vector<std::string> warnings;
  auto ps = join(preds, truth, system_id, JoinOptions{partial}, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return ps;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_file(out_path, text);
  }
}

std::vector<ResampleSummary> bootstrap_all(const ScoreView& data, const BootstrapOptions& options) {
  std::vector<ResampleSummary> out;
  for (auto m : kAllMeasures) out.push_back(bootstrap_measure(data, m, options));
  return out;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  if (a.format != "json" && a.format != "csv") throw ValidationError("unknown format '" + a.format + "'");
  const SpecConvention convention = resolve_convention(a.convention);
  const std::uint64_t seed = resolve_seed(a.seed);
  const auto truth = parse_truth(read_text_file(a.truth));
  const PredictionSet ps = load_prediction_set(a.predictions, truth, a.partial, err);

  EvaluationReport report;
  report.meta.command = "evaluate";
  report.meta.seed = seed;
  report.meta.n_pos = ps.n_pos();
  report.meta.n_neg = ps.n_neg();
  report.meta.convention = convention;
  report.meta.ci_level = a.ci_level;
  SystemEntry entry{measure_report(ps, convention), {}};
  if (a.bootstrap > 0) {
    BootstrapOptions opts;
    opts.n_replicates = a.bootstrap;
    opts.seed = seed;
    opts.ci_level = a.ci_level;
    opts.convention = convention;
    opts.threads = a.threads;
    entry.resampling = bootstrap_all(ps.view(), opts);
  }
  report.systems.push_back(entry);

  if (!a.plot.empty()) render_roc_plot({{ps.system_id(), roc_curve(ps)}}, a.plot);
  emit(a.format == "json" ? to_json(report) : to_csv(report), a.out, out);
  if (!a.out.empty()) out << render_score_grid({ps.system_id()}, {entry.measures}, kSummaryMeasures);
  return kExitOk;
}

std::vector<Measure> resolve_measures(const std::string& list) {
  if (list.empty()) return {kAllMeasures.begin(), kAllMeasures.end()};
  std::vector<Measure> out;
  std::stringstream ss(list);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto m = parse_measure(token);
    if (!m) throw ValidationError("unknown measure '" + token + "'");
    if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
  }
  if (out.empty()) throw ValidationError("no measures selected");
  return out;
}

int cmd_rank(const RankArgs& a, std::ostream& out, std::ostream& err) {
  const SpecConvention convention = resolve_convention(a.convention);
  const std::uint64_t seed = resolve_seed(a.seed);
  const auto measures = resolve_measures(a.measures);
  const auto truth = parse_truth(read_text_file(a.truth));

  std::error_code ec;
  if (!fs::is_directory(a.submissions, ec)) throw IoError("submissions directory '" + a.submissions + "' not found");
  std::vector<std::string> files;
  const fs::path truth_path = fs::weakly_canonical(a.truth, ec);
  for (const auto& entry : fs::directory_iterator(a.submissions)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    if (fs::weakly_canonical(entry.path(), ec) == truth_path) continue;
    files.push_back(entry.path().string());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw ValidationError("no *.csv submissions in '" + a.submissions + "'");

  std::vector<PredictionSet> systems;
  std::vector<MeasureReport> reports;
  for (const auto& f : files) {
    systems.push_back(load_prediction_set(f, truth, a.partial, err));
    reports.push_back(measure_report(systems.back(), convention));
  }

  EvaluationReport report;
  report.meta.command = "rank";
  report.meta.seed = seed;
  report.meta.n_pos = systems.front().n_pos();
  report.meta.n_neg = systems.front().n_neg();
  report.meta.convention = convention;
  report.meta.extra.push_back({"n_systems", std::to_string(systems.size()), true});
  for (const auto& r : reports) report.systems.push_back({r, {}});
  report.ranking = cross_ranking_table(reports, measures);
  report.agreements = rank_agreements(*report.ranking);
  if (a.stability > 0) {
    StabilityOptions opts;
    opts.n_replicates = a.stability;
    opts.seed = seed;
    opts.convention = convention;
    opts.threads = a.threads;
    for (auto m : measures) report.stability.push_back(rank_stability(systems, m, opts));
  }
  emit(to_json(report), a.out, out);
  if (!a.out.empty()) out << render_ranking_table(*report.ranking);
  return kExitOk;
}

int cmd_gda(const GdaArgs& a, std::ostream& out, std::ostream& err) {
  (void)err;
  if (a.format != "json" && a.format != "csv") throw ValidationError("unknown format '" + a.format + "'");
  if (a.test.empty() == (a.cv == 0)) throw ValidationError("give exactly one of --test FILE or --cv K");
  const SpecConvention convention = resolve_convention(a.convention);
  const std::uint64_t seed = resolve_seed(a.seed);
  const auto sweep = parse_sweep(a.sweep);
  if (!sweep) throw ValidationError("unknown sweep '" + a.sweep + "' (expected prior or threshold)");
  std::vector<GdaVariant> variants;
  if (a.variant == "all") {
    variants.assign(kAllVariants.begin(), kAllVariants.end());
  } else {
    const auto v = parse_variant(a.variant);
    if (!v) throw ValidationError("unknown variant '" + a.variant + "'");
    variants.push_back(*v);
  }
  if (!a.save_model.empty() && (variants.size() != 1 || a.cv > 0)) {
    throw ValidationError("--save-model needs a single variant and --test");
  }

  const FeatureDataset train = parse_features(read_text_file(a.train));
  std::optional<FeatureDataset> test;
  if (!a.test.empty()) {
    test.emplace(parse_features(read_text_file(a.test)));
    if (test->dim() != train.dim()) {
      throw ValidationError("test features have dimension " + std::to_string(test->dim()) + ", training has " +
                            std::to_string(train.dim()));
    }
  }
  const PriorMode prior{a.prior};

  EvaluationReport report;
  report.meta.command = "gda";
  report.meta.seed = seed;
  report.meta.convention = convention;
  report.meta.extra.push_back({"sweep", std::string(sweep_key(*sweep)), false});
  report.meta.extra.push_back({"protocol", a.cv > 0 ? "cross-validation" : "train-test", false});
  if (a.cv > 0) report.meta.extra.push_back({"cv_folds", std::to_string(a.cv), true});
  report.meta.extra.push_back({"ridge_scale", format_round_trip(kRidgeScale), true});
  report.meta.extra.push_back(
      {"prior", a.prior ? format_round_trip(*a.prior) : std::string("empirical"), a.prior.has_value()});

  std::vector<std::string> columns;
  std::vector<MeasureReport> reports;
  for (auto v : variants) {
    const std::string id(variant_key(v));
    SystemEntry entry;
    if (test) {
      const GdaModel model = fit_gda(train, v, prior);
      if (!a.save_model.empty()) write_text_file(a.save_model, serialize_model(model));
      const PredictionSet scores = sweep_scores(model, *test, *sweep, id);
      entry.measures = measure_report(scores, convention);
    } else {
      CvOptions opts;
      opts.sweep = *sweep;
      opts.prior = prior;
      opts.convention = convention;
      opts.threads = a.threads;
      const FoldAssignment folds = stratified_kfold(train, a.cv, seed);
      const PredictionSet pooled = cv_pooled_scores(train, v, folds, opts);
      entry.measures = measure_report(pooled, convention);
      for (auto m : kAllMeasures) entry.resampling.push_back(cv_measure(train, v, a.cv, m, seed, opts));
    }
    columns.push_back(std::string(variant_label(v)));
    reports.push_back(entry.measures);
    report.systems.push_back(std::move(entry));
  }
  report.meta.n_pos = reports.front().n_pos;
  report.meta.n_neg = reports.front().n_neg;

  emit(a.format == "json" ? to_json(report) : to_csv(report), a.out, out);
  if (!a.out.empty()) out << render_score_grid(columns, reports, kHighSensitivityMeasures);
  return kExitOk;
}

Eigen::MatrixXd equicorrelated(std::size_t d, double rho, double scale) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d), rho);
  m.diagonal().setOnes();
  return scale * m;
}

int cmd_synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
  (void)err;
  const std::uint64_t seed = resolve_seed(a.seed);
  if (a.out.empty()) throw ValidationError("--out is required");
  if (a.pos < 1 || a.neg < 1) throw ValidationError("--pos and --neg must be at least 1");
  if (!(a.sigma > 0.0)) throw ValidationError("--sigma must be positive");

  if (a.features) {
    if (a.dim < 1) throw ValidationError("--dim must be at least 1");
    if (!(a.rho > -1.0 / static_cast<double>(std::max<std::size_t>(a.dim, 2) - 1) && a.rho < 1.0)) {
      throw ValidationError("--rho gives a covariance that is not positive definite");
    }
    const auto d = static_cast<Eigen::Index>(a.dim);
    GaussianClassSpec benign{a.neg, Eigen::VectorXd::Zero(d), equicorrelated(a.dim, a.rho, 1.0)};
    // Tapered shift mu * (d - j) / d: a uniform shift along an equicorrelated
    // covariance would make the pooled full and diagonal rules coincide.
    Eigen::VectorXd shift(d);
    for (Eigen::Index j = 0; j < d; ++j) shift(j) = a.mu * static_cast<double>(d - j) / static_cast<double>(d);
    GaussianClassSpec malignant{a.pos, shift,
                                equicorrelated(a.dim, a.rho, a.sigma * a.sigma)};
    write_text_file(a.out, write_features(gaussian_features(benign, malignant, seed)));
    out << "wrote " << a.out << '\n';
    return kExitOk;
  }

  const std::string truth_out = a.truth_out.empty() ? default_truth_path(a.out) : a.truth_out;
  if (a.systems > 0) {
    SynthChallengeSpec spec = crossing_field(a.systems, seed);
    spec.n_pos = a.pos;
    spec.n_neg = a.neg;
    const auto field = synth_challenge(spec);
    std::error_code ec;
    fs::create_directories(a.out, ec);
    if (ec) throw IoError("cannot create directory '" + a.out + "': " + ec.message());
    for (const auto& ps : field) write_text_file((fs::path(a.out) / (ps.system_id() + ".csv")).string(),
                                                 write_predictions(ps));
    write_text_file(truth_out, write_truth(field.front()));
    out << "wrote " << field.size() << " submissions to " << a.out << " and truth to " << truth_out << '\n';
    return kExitOk;
  }

  const PredictionSet ps = binormal_scores({a.pos, a.neg, a.mu, a.sigma, seed}, file_stem(a.out));
  write_text_file(a.out, write_predictions(ps));
  write_text_file(truth_out, write_truth(ps));
  out << "wrote " << a.out << " and " << truth_out << '\n';
  return kExitOk;
}

int cmd_plot(const PlotArgs& a, std::ostream& out, std::ostream& err) {
  const auto truth = parse_truth(read_text_file(a.truth));
  std::vector<NamedCurve> curves;
  for (const auto& p : a.predictions) {
    const PredictionSet ps = load_prediction_set(p, truth, false, err);
    curves.push_back({ps.system_id(), roc_curve(ps)});
  }
  if (!a.out.empty()) render_roc_plot(curves, a.out);
  if (a.text || a.out.empty()) out << render_roc_text(curves);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mdrank: evaluate and rank binary diagnostic classifiers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MDRANK_VERSION);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Score one submission against ground truth");
  evaluate->add_option("--predictions", ev.predictions, "image_id,score file")->required();
  evaluate->add_option("--truth", ev.truth, "image_id,label file")->required();
  evaluate->add_option("--bootstrap", ev.bootstrap, "Stratified bootstrap replicates (0: none)");
  evaluate->add_option("--seed", ev.seed, "Random seed (default: $MDRANK_SEED, else 42)");
  evaluate->add_option("--convention", ev.convention, "Specificity convention: at-least|interpolate");
  evaluate->add_option("--out", ev.out, "Report file (default: stdout)");
  evaluate->add_option("--format", ev.format, "json|csv");
  evaluate->add_option("--plot", ev.plot, "Also write an SVG ROC plot");
  evaluate->add_option("--ci-level", ev.ci_level, "Percentile interval level");
  evaluate->add_option("--threads", ev.threads, "Worker threads (0: all)");
  evaluate->add_flag("--partial", ev.partial, "Allow truth items without predictions");

  RankArgs rk;
  auto* rank = app.add_subcommand("rank", "Rank a directory of submissions under several measures");
  rank->add_option("--submissions", rk.submissions, "Directory of *.csv submissions")->required();
  rank->add_option("--truth", rk.truth, "image_id,label file")->required();
  rank->add_option("--measures", rk.measures, "Comma-separated measure list");
  rank->add_option("--stability", rk.stability, "Paired bootstrap replicates for rank stability");
  rank->add_option("--seed", rk.seed, "Random seed (default: $MDRANK_SEED, else 42)");
  rank->add_option("--convention", rk.convention, "Specificity convention: at-least|interpolate");
  rank->add_option("--out", rk.out, "Report file (default: stdout)");
  rank->add_option("--threads", rk.threads, "Worker threads (0: all)");
  rank->add_flag("--partial", rk.partial, "Allow truth items without predictions");

  GdaArgs gd;
  auto* gda = app.add_subcommand("gda", "Fit Gaussian discriminant classifiers and report measures");
  gda->add_option("--train", gd.train, "Training feature file")->required();
  auto* test_opt = gda->add_option("--test", gd.test, "Test feature file");
  auto* cv_opt = gda->add_option("--cv", gd.cv, "Stratified k-fold cross-validation on the training file");
  test_opt->excludes(cv_opt);
  gda->add_option("--variant", gd.variant, "lda|qda|dlda|dqda|all");
  gda->add_option("--sweep", gd.sweep, "prior|threshold");
  gda->add_option("--seed", gd.seed, "Random seed (default: $MDRANK_SEED, else 42)");
  gda->add_option("--prior", gd.prior, "Fixed malignant prior instead of the class fraction");
  gda->add_option("--convention", gd.convention, "Specificity convention: at-least|interpolate");
  gda->add_option("--out", gd.out, "Report file (default: stdout)");
  gda->add_option("--format", gd.format, "json|csv");
  gda->add_option("--save-model", gd.save_model, "Write the fitted model");
  gda->add_option("--threads", gd.threads, "Worker threads (0: all)");

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Generate synthetic cohorts");
  synth->add_option("--pos", sy.pos, "Malignant items");
  synth->add_option("--neg", sy.neg, "Benign items");
  synth->add_option("--mu", sy.mu, "Malignant-class mean");
  synth->add_option("--sigma", sy.sigma, "Malignant-class standard deviation");
  synth->add_option("--seed", sy.seed, "Random seed (default: $MDRANK_SEED, else 42)");
  synth->add_option("--out", sy.out, "Prediction file, feature file, or submissions directory")->required();
  synth->add_option("--truth-out", sy.truth_out, "Truth file (default: <out>_truth.csv)");
  synth->add_flag("--features", sy.features, "Write a Gaussian feature file instead of scores");
  synth->add_option("--dim", sy.dim, "Feature dimension (with --features)");
  synth->add_option("--rho", sy.rho, "Feature correlation (with --features)");
  synth->add_option("--systems", sy.systems, "Write a field of this many crossing-ROC submissions");

  PlotArgs pl;
  auto* plot = app.add_subcommand("plot", "Plot ROC curves");
  plot->add_option("--predictions", pl.predictions, "Submission file (repeatable)")->required();
  plot->add_option("--truth", pl.truth, "image_id,label file")->required();
  plot->add_option("--out", pl.out, "SVG output path");
  plot->add_flag("--text", pl.text, "Print a text plot");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*evaluate) return cmd_evaluate(ev, out, err);
    if (*rank) return cmd_rank(rk, out, err);
    if (*gda) return cmd_gda(gd, out, err);
    if (*synth) return cmd_synth(sy, out, err);
    if (*plot) return cmd_plot(pl, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace mdrank
