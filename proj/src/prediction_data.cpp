#include "mdrank/prediction_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mdrank/error.hpp"

namespace mdrank {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

struct Row {
  std::size_t line;
  std::vector<std::string_view> fields;
};

// Header row plus data rows, blank lines dropped.
struct Table {
  Row header;
  std::vector<Row> rows;
};

Table split_table(std::string_view text, std::string_view what) {
  Table table;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    if (!have_header) {
      table.header = {line_no, split_fields(line)};
      have_header = true;
    } else {
      table.rows.push_back({line_no, split_fields(line)});
    }
  }
  if (!have_header) throw ValidationError("empty " + std::string(what) + " file");
  if (table.rows.empty()) throw ValidationError(std::string(what) + " file has a header but no data rows");
  return table;
}

void expect_header(const Row& header, std::initializer_list<std::string_view> names) {
  bool ok = header.fields.size() == names.size();
  if (ok) ok = std::equal(names.begin(), names.end(), header.fields.begin());
  if (!ok) {
    std::string expected;
    for (auto n : names) {
      if (!expected.empty()) expected += ',';
      expected += n;
    }
    throw ValidationError("expected header '" + expected + "'", header.line);
  }
}

void check_id(std::string_view id, std::size_t line) {
  if (id.empty()) throw ValidationError("empty image_id", line);
  for (unsigned char c : id) {
    if (c < 0x20 || c == 0x7f) throw ValidationError("image_id contains a control character", line);
  }
}

double parse_finite(std::string_view token, std::size_t line, std::string_view what) {
  std::string_view t = token;
  if (!t.empty() && t.front() == '+') t.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || end != t.data() + t.size() || t.empty()) {
    throw ValidationError("cannot parse " + std::string(what) + " '" + std::string(token) + "'", line);
  }
  if (!std::isfinite(value)) {
    throw ValidationError("non-finite " + std::string(what) + " '" + std::string(token) + "'", line);
  }
  return value;
}

void check_column_count(const Row& row, std::size_t expected) {
  if (row.fields.size() != expected) {
    throw ValidationError("expected " + std::to_string(expected) + " columns, found " +
                              std::to_string(row.fields.size()),
                          row.line);
  }
}

std::string join_names(const std::vector<std::string>& names, std::size_t limit = 10) {
  std::string out;
  for (std::size_t i = 0; i < names.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  if (names.size() > limit) out += ", ... (" + std::to_string(names.size()) + " total)";
  return out;
}

}  // namespace

std::string_view label_name(Label label) noexcept {
  return label == Label::Malignant ? "malignant" : "benign";
}

ScoreView make_score_view(std::span<const double> scores, std::span<const Label> labels) {
  if (scores.size() != labels.size()) throw ValidationError("scores and labels differ in length");
  const auto n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::Malignant));
  const auto n_neg = labels.size() - n_pos;
  if (n_pos == 0) throw ValidationError("no malignant items: both classes must be present");
  if (n_neg == 0) throw ValidationError("no benign items: both classes must be present");
  return {scores, labels, n_pos, n_neg};
}

PredictionSet::PredictionSet(std::string system_id, std::vector<LabeledScore> items)
    : system_id_(std::move(system_id)), items_(std::move(items)) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(items_.size());
  scores_.reserve(items_.size());
  labels_.reserve(items_.size());
  for (const auto& item : items_) {
    if (item.item_id.empty()) throw ValidationError("empty item id in system '" + system_id_ + "'");
    if (!seen.insert(item.item_id).second) {
      throw ValidationError("duplicate item id '" + item.item_id + "' in system '" + system_id_ + "'");
    }
    if (!std::isfinite(item.score)) {
      throw ValidationError("non-finite score for item '" + item.item_id + "'");
    }
    scores_.push_back(item.score);
    labels_.push_back(item.label);
    (item.label == Label::Malignant ? n_pos_ : n_neg_) += 1;
  }
  if (n_pos_ == 0 || n_neg_ == 0) {
    throw ValidationError("system '" + system_id_ + "': " +
                          (n_pos_ == 0 ? "no malignant items" : "no benign items") +
                          " (both classes must be present)");
  }
}

FeatureDataset::FeatureDataset(std::vector<FeatureRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw ValidationError("feature dataset is empty");
  dim_ = rows_.front().features.size();
  if (dim_ == 0) throw ValidationError("feature vectors must have at least one component");
  for (const auto& row : rows_) {
    if (row.features.size() != dim_) {
      throw ValidationError("item '" + row.item_id + "' has " + std::to_string(row.features.size()) +
                            " features, expected " + std::to_string(dim_));
    }
    for (double v : row.features) {
      if (!std::isfinite(v)) throw ValidationError("non-finite feature value for item '" + row.item_id + "'");
    }
    (row.label == Label::Malignant ? n_pos_ : n_neg_) += 1;
  }
  if (n_pos_ == 0 || n_neg_ == 0) {
    throw ValidationError(std::string("feature dataset has ") +
                          (n_pos_ == 0 ? "no malignant items" : "no benign items"));
  }
}

FeatureDataset FeatureDataset::subset(std::span<const std::size_t> indices) const {
  std::vector<FeatureRow> picked;
  picked.reserve(indices.size());
  for (auto i : indices) picked.push_back(rows_.at(i));
  return FeatureDataset(std::move(picked));
}

std::vector<ScoreRecord> parse_predictions(std::string_view text, std::string_view system_id) {
  try {
    const Table table = split_table(text, "predictions");
    expect_header(table.header, {"image_id", "score"});
    std::vector<ScoreRecord> out;
    out.reserve(table.rows.size());
    std::unordered_map<std::string_view, std::size_t> first_line;
    for (const auto& row : table.rows) {
      check_column_count(row, 2);
      check_id(row.fields[0], row.line);
      const auto [it, inserted] = first_line.emplace(row.fields[0], row.line);
      if (!inserted) {
        throw ValidationError("duplicate image_id '" + std::string(row.fields[0]) + "' (first seen on line " +
                                  std::to_string(it->second) + ")",
                              row.line);
      }
      out.push_back({std::string(row.fields[0]), parse_finite(row.fields[1], row.line, "score")});
    }
    return out;
  } catch (const ValidationError& e) {
    if (system_id.empty()) throw;
    throw ValidationError(std::string(system_id) + ": " + e.what());
  }
}

Label parse_label(std::string_view token, std::size_t line) {
  std::string lower(token);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "malignant" || lower == "1") return Label::Malignant;
  if (lower == "benign" || lower == "0") return Label::Benign;
  throw ValidationError("unknown label '" + std::string(token) + "' (expected benign, malignant, 0 or 1)", line);
}

std::vector<TruthRecord> parse_truth(std::string_view text) {
  const Table table = split_table(text, "truth");
  expect_header(table.header, {"image_id", "label"});
  std::vector<TruthRecord> out;
  out.reserve(table.rows.size());
  std::unordered_map<std::string_view, std::size_t> first_line;
  for (const auto& row : table.rows) {
    check_column_count(row, 2);
    check_id(row.fields[0], row.line);
    const auto [it, inserted] = first_line.emplace(row.fields[0], row.line);
    if (!inserted) {
      throw ValidationError("duplicate image_id '" + std::string(row.fields[0]) + "' (first seen on line " +
                                std::to_string(it->second) + ")",
                            row.line);
    }
    out.push_back({std::string(row.fields[0]), parse_label(row.fields[1], row.line)});
  }
  return out;
}

FeatureDataset parse_features(std::string_view text) {
  const Table table = split_table(text, "feature");
  const auto& header = table.header.fields;
  if (header.size() < 3 || header[0] != "image_id" || header[1] != "label") {
    throw ValidationError("expected header 'image_id,label,f1,...,fd'", table.header.line);
  }
  const std::size_t dim = header.size() - 2;
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[j + 2] != "f" + std::to_string(j + 1)) {
      throw ValidationError("feature column " + std::to_string(j + 1) + " must be named 'f" +
                                std::to_string(j + 1) + "'",
                            table.header.line);
    }
  }
  std::vector<FeatureRow> rows;
  rows.reserve(table.rows.size());
  std::unordered_map<std::string_view, std::size_t> first_line;
  for (const auto& row : table.rows) {
    check_column_count(row, dim + 2);
    check_id(row.fields[0], row.line);
    if (!first_line.emplace(row.fields[0], row.line).second) {
      throw ValidationError("duplicate image_id '" + std::string(row.fields[0]) + "'", row.line);
    }
    FeatureRow fr{std::string(row.fields[0]), parse_label(row.fields[1], row.line), {}};
    fr.features.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      fr.features.push_back(parse_finite(row.fields[j + 2], row.line, "feature value"));
    }
    rows.push_back(std::move(fr));
  }
  return FeatureDataset(std::move(rows));
}

PredictionSet join(std::span<const ScoreRecord> preds, std::span<const TruthRecord> truth, std::string system_id,
                   const JoinOptions& options, std::vector<std::string>* warnings) {
  std::unordered_map<std::string_view, Label> truth_by_id;
  truth_by_id.reserve(truth.size());
  for (const auto& t : truth) {
    if (!truth_by_id.emplace(t.item_id, t.label).second) {
      throw ValidationError("duplicate truth id '" + t.item_id + "'");
    }
  }

  std::vector<LabeledScore> items;
  items.reserve(preds.size());
  std::vector<std::string> missing_from_truth;
  std::unordered_set<std::string_view> predicted;
  std::size_t out_of_range = 0;
  for (const auto& p : preds) {
    predicted.insert(p.item_id);
    const auto it = truth_by_id.find(p.item_id);
    if (it == truth_by_id.end()) {
      missing_from_truth.push_back(p.item_id);
      continue;
    }
    if (p.score < 0.0 || p.score > 1.0) ++out_of_range;
    items.push_back({p.item_id, p.score, it->second});
  }
  if (!missing_from_truth.empty()) {
    throw ValidationError(system_id + ": prediction ids missing from truth: " + join_names(missing_from_truth));
  }

  std::vector<std::string> missing_predictions;
  for (const auto& t : truth) {
    if (!predicted.contains(t.item_id)) missing_predictions.push_back(t.item_id);
  }
  if (!missing_predictions.empty()) {
    const std::string msg = system_id + ": truth ids without a prediction: " + join_names(missing_predictions);
    if (!options.allow_partial) throw ValidationError(msg);
    if (warnings) warnings->push_back(msg);
  }
  if (out_of_range > 0 && warnings) {
    warnings->push_back(system_id + ": " + std::to_string(out_of_range) +
                        " score(s) outside [0,1]; measures depend only on score order");
  }
  return PredictionSet(std::move(system_id), std::move(items));
}

std::string format_round_trip(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc() ? end : buf);
}

std::string write_predictions(const PredictionSet& ps) {
  std::string out = "image_id,score\n";
  for (const auto& item : ps.items()) {
    out += item.item_id;
    out += ',';
    out += format_round_trip(item.score);
    out += '\n';
  }
  return out;
}

std::string write_truth(const PredictionSet& ps) {
  std::string out = "image_id,label\n";
  for (const auto& item : ps.items()) {
    out += item.item_id;
    out += ',';
    out += label_name(item.label);
    out += '\n';
  }
  return out;
}

std::string write_features(const FeatureDataset& ds) {
  std::string out = "image_id,label";
  for (std::size_t j = 0; j < ds.dim(); ++j) out += ",f" + std::to_string(j + 1);
  out += '\n';
  for (const auto& row : ds.rows()) {
    out += row.item_id;
    out += ',';
    out += label_name(row.label);
    for (double v : row.features) {
      out += ',';
      out += format_round_trip(v);
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return std::move(buffer).str();
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("error writing '" + path + "'");
}

}  // namespace mdrank
