#include "mdrank/gda.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mdrank/error.hpp"

namespace mdrank {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

void add_ridge(ClassGaussian& g, std::string_view cls) {
  const auto d = g.covariance.rows();
  const double mean_diag = g.covariance.diagonal().mean();
  g.ridge = kRidgeScale * mean_diag;
  g.covariance.diagonal().array() += g.ridge;
  for (Eigen::Index j = 0; j < d; ++j) {
    if (!(g.covariance(j, j) > 0.0)) {
      throw FitError(std::string(cls) + " covariance is degenerate in feature f" + std::to_string(j + 1) +
                     " even after ridge regularization");
    }
  }
}

}  // namespace

std::string_view variant_key(GdaVariant v) noexcept {
  switch (v) {
    case GdaVariant::Lda: return "lda";
    case GdaVariant::Qda: return "qda";
    case GdaVariant::DiagLda: return "dlda";
    case GdaVariant::DiagQda: return "dqda";
  }
  return "";
}

std::string_view variant_label(GdaVariant v) noexcept {
  switch (v) {
    case GdaVariant::Lda: return "LDA";
    case GdaVariant::Qda: return "QDA";
    case GdaVariant::DiagLda: return "dLDA";
    case GdaVariant::DiagQda: return "dQDA";
  }
  return "";
}

std::optional<GdaVariant> parse_variant(std::string_view name) noexcept {
  for (auto v : kAllVariants) {
    if (variant_key(v) == name || variant_label(v) == name) return v;
  }
  return std::nullopt;
}

std::string_view sweep_key(Sweep s) noexcept { return s == Sweep::Threshold ? "threshold" : "prior"; }

std::optional<Sweep> parse_sweep(std::string_view name) noexcept {
  if (name == "threshold") return Sweep::Threshold;
  if (name == "prior") return Sweep::Prior;
  return std::nullopt;
}

double logistic(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

GdaModel::GdaModel(GdaVariant variant, double prior_malignant, ClassGaussian benign, ClassGaussian malignant)
    : variant_(variant), prior_(prior_malignant), benign_(std::move(benign)), malignant_(std::move(malignant)) {
  if (!(prior_ > 0.0 && prior_ < 1.0)) throw ValidationError("prior probability must lie in (0, 1)");
  const auto d = benign_.mean.size();
  if (d == 0) throw ValidationError("model dimension must be at least 1");
  for (const ClassGaussian* g : {&benign_, &malignant_}) {
    if (g->mean.size() != d || g->covariance.rows() != d || g->covariance.cols() != d) {
      throw ValidationError("model mean/covariance shapes disagree");
    }
    if (!g->mean.allFinite() || !g->covariance.allFinite()) throw ValidationError("model has non-finite parameters");
    const double scale = g->covariance.cwiseAbs().maxCoeff();
    if ((g->covariance - g->covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ValidationError("model covariance is not symmetric");
    }
  }
  benign_factor_ = factorize(benign_, "benign");
  malignant_factor_ = factorize(malignant_, "malignant");
}

GdaModel::Factor GdaModel::factorize(const ClassGaussian& g, std::string_view cls) const {
  Factor f;
  if (is_diagonal(variant_)) {
    const Eigen::VectorXd var = g.covariance.diagonal();
    for (Eigen::Index j = 0; j < var.size(); ++j) {
      if (!(var(j) > 0.0)) {
        throw FitError(std::string(cls) + " variance of feature f" + std::to_string(j + 1) + " is not positive");
      }
    }
    f.inv_var = var.cwiseInverse();
    f.log_det = var.array().log().sum();
  } else {
    f.llt.compute(g.covariance);
    if (f.llt.info() != Eigen::Success) {
      throw FitError(std::string(cls) + " covariance is not positive definite");
    }
    f.log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
  }
  return f;
}

double GdaModel::log_density(const ClassGaussian& g, const Factor& f,
                             const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Eigen::VectorXd diff = x - g.mean;
  double mahalanobis = 0.0;
  if (is_diagonal(variant_)) {
    mahalanobis = (diff.array().square() * f.inv_var.array()).sum();
  } else {
    mahalanobis = f.llt.matrixL().solve(diff).squaredNorm();
  }
  return -0.5 * (mahalanobis + f.log_det);
}

double GdaModel::log_likelihood_ratio(std::span<const double> x) const {
  if (x.size() != dim()) {
    throw ValidationError("feature vector has " + std::to_string(x.size()) + " components, model expects " +
                          std::to_string(dim()));
  }
  const auto v = as_vector(x);
  return log_density(malignant_, malignant_factor_, v) - log_density(benign_, benign_factor_, v);
}

double GdaModel::posterior(std::span<const double> x, std::optional<double> prior_override) const {
  const double p = prior_override.value_or(prior_);
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("prior probability must lie in (0, 1)");
  return logistic(log_likelihood_ratio(x) + std::log(p) - std::log1p(-p));
}

double GdaModel::posterior_benign(std::span<const double> x, std::optional<double> prior_override) const {
  const double p = prior_override.value_or(prior_);
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("prior probability must lie in (0, 1)");
  return logistic(-(log_likelihood_ratio(x) + std::log(p) - std::log1p(-p)));
}

GdaModel fit_gda(const FeatureDataset& train, GdaVariant variant, PriorMode prior) {
  const auto d = static_cast<Eigen::Index>(train.dim());
  if (train.n_pos() < 2 || train.n_neg() < 2) {
    throw FitError(std::string("each class needs at least 2 training items (malignant: ") +
                   std::to_string(train.n_pos()) + ", benign: " + std::to_string(train.n_neg()) + ")");
  }

  // A feature with zero spread over the whole training set makes every
  // covariance singular in that direction; the ridge is not meant to hide it.
  for (Eigen::Index j = 0; j < d; ++j) {
    const double first = train.rows().front().features[static_cast<std::size_t>(j)];
    bool constant = true;
    for (const auto& row : train.rows()) {
      if (row.features[static_cast<std::size_t>(j)] != first) {
        constant = false;
        break;
      }
    }
    if (constant) {
      throw FitError("feature f" + std::to_string(j + 1) + " is constant across all training items");
    }
  }

  ClassGaussian benign{Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d), 0.0};
  ClassGaussian malignant{Eigen::VectorXd::Zero(d), Eigen::MatrixXd::Zero(d, d), 0.0};
  for (const auto& row : train.rows()) {
    auto& g = row.label == Label::Malignant ? malignant : benign;
    g.mean += as_vector(row.features);
  }
  benign.mean /= static_cast<double>(train.n_neg());
  malignant.mean /= static_cast<double>(train.n_pos());

  // Scatter matrices about the class means.
  for (const auto& row : train.rows()) {
    auto& g = row.label == Label::Malignant ? malignant : benign;
    const Eigen::VectorXd diff = as_vector(row.features) - g.mean;
    g.covariance.selfadjointView<Eigen::Lower>().rankUpdate(diff);
  }
  benign.covariance = benign.covariance.selfadjointView<Eigen::Lower>();
  malignant.covariance = malignant.covariance.selfadjointView<Eigen::Lower>();

  if (is_pooled(variant)) {
    const Eigen::MatrixXd pooled =
        (benign.covariance + malignant.covariance) / static_cast<double>(train.size());
    benign.covariance = pooled;
    malignant.covariance = pooled;
  } else {
    benign.covariance /= static_cast<double>(train.n_neg());
    malignant.covariance /= static_cast<double>(train.n_pos());
  }
  if (is_diagonal(variant)) {
    benign.covariance = Eigen::MatrixXd(benign.covariance.diagonal().asDiagonal());
    malignant.covariance = Eigen::MatrixXd(malignant.covariance.diagonal().asDiagonal());
  }
  add_ridge(benign, "benign");
  add_ridge(malignant, "malignant");

  double pi = static_cast<double>(train.n_pos()) / static_cast<double>(train.size());
  if (prior.fixed) {
    pi = *prior.fixed;
    if (!(pi > 0.0 && pi < 1.0)) throw ValidationError("fixed prior must lie in (0, 1)");
  }
  return GdaModel(variant, pi, std::move(benign), std::move(malignant));
}

namespace {

template <typename ScoreFn>
PredictionSet score_dataset(const FeatureDataset& test, std::string system_id, ScoreFn&& fn) {
  std::vector<LabeledScore> items;
  items.reserve(test.size());
  for (const auto& row : test.rows()) items.push_back({row.item_id, fn(row.features), row.label});
  return PredictionSet(std::move(system_id), std::move(items));
}

}  // namespace

PredictionSet posterior_scores(const GdaModel& model, const FeatureDataset& test, std::string system_id) {
  if (system_id.empty()) system_id = std::string(variant_key(model.variant()));
  return score_dataset(test, std::move(system_id),
                       [&](std::span<const double> x) { return model.posterior(x); });
}

PredictionSet llr_scores(const GdaModel& model, const FeatureDataset& test, std::string system_id) {
  if (system_id.empty()) system_id = std::string(variant_key(model.variant()));
  return score_dataset(test, std::move(system_id),
                       [&](std::span<const double> x) { return model.log_likelihood_ratio(x); });
}

PredictionSet sweep_scores(const GdaModel& model, const FeatureDataset& test, Sweep sweep, std::string system_id) {
  return sweep == Sweep::Threshold ? posterior_scores(model, test, std::move(system_id))
                                   : llr_scores(model, test, std::move(system_id));
}

RocCurve threshold_sweep_roc(const GdaModel& model, const FeatureDataset& test) {
  return roc_curve(posterior_scores(model, test));
}

RocCurve prior_sweep_roc(const GdaModel& model, const FeatureDataset& test) {
  return roc_curve(llr_scores(model, test));
}

double prior_for_llr_cut(double llr) noexcept { return logistic(-llr); }

std::string serialize_model(const GdaModel& model) {
  std::ostringstream out;
  const auto write_vec = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << format_round_trip(v(i));
    out << '\n';
  };
  out << "mdrank-gda-model 1\n";
  out << "variant " << variant_key(model.variant()) << '\n';
  out << "dim " << model.dim() << '\n';
  out << "prior_malignant " << format_round_trip(model.prior_malignant()) << '\n';
  for (const auto& [name, g] : {std::pair<const char*, const ClassGaussian*>{"benign", &model.benign()},
                                {"malignant", &model.malignant()}}) {
    out << "ridge_" << name << ' ' << format_round_trip(g->ridge) << '\n';
    out << "mean_" << name;
    write_vec(g->mean);
    out << "covariance_" << name << '\n';
    for (Eigen::Index r = 0; r < g->covariance.rows(); ++r) {
      out << ' ';
      for (Eigen::Index c = 0; c < g->covariance.cols(); ++c) {
        out << (c ? " " : "") << format_round_trip(g->covariance(r, c));
      }
      out << '\n';
    }
  }
  return out.str();
}

GdaModel parse_model(std::string_view text) {
  std::istringstream in{std::string(text)};
  const auto expect = [&](const std::string& key) {
    std::string token;
    if (!(in >> token) || token != key) throw ValidationError("model file: expected '" + key + "'");
  };
  const auto read_double = [&]() {
    std::string token;
    if (!(in >> token)) throw ValidationError("model file: truncated");
    double v = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || end != token.data() + token.size() || !std::isfinite(v)) {
      throw ValidationError("model file: bad number '" + token + "'");
    }
    return v;
  };

  expect("mdrank-gda-model");
  expect("1");
  expect("variant");
  std::string vname;
  in >> vname;
  const auto variant = parse_variant(vname);
  if (!variant) throw ValidationError("model file: unknown variant '" + vname + "'");
  expect("dim");
  long long dim = 0;
  if (!(in >> dim) || dim < 1) throw ValidationError("model file: bad dimension");
  expect("prior_malignant");
  const double prior = read_double();

  ClassGaussian classes[2];
  const char* names[2] = {"benign", "malignant"};
  for (int k = 0; k < 2; ++k) {
    auto& g = classes[k];
    expect(std::string("ridge_") + names[k]);
    g.ridge = read_double();
    expect(std::string("mean_") + names[k]);
    g.mean.resize(dim);
    for (long long i = 0; i < dim; ++i) g.mean(i) = read_double();
    expect(std::string("covariance_") + names[k]);
    g.covariance.resize(dim, dim);
    for (long long r = 0; r < dim; ++r) {
      for (long long c = 0; c < dim; ++c) g.covariance(r, c) = read_double();
    }
  }
  return GdaModel(*variant, prior, std::move(classes[0]), std::move(classes[1]));
}

}  // namespace mdrank
