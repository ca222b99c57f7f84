#ifndef TOPPUSH_DATA_IO_HPP
#define TOPPUSH_DATA_IO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toppush/errors.hpp"
#include "toppush/metrics.hpp"
#include "toppush/types.hpp"

namespace toppush {

// ---------------------------------------------------------------------------
// LIBSVM sparse text format: `<label> (<index>:<value> )*` per line, 1-based
// strictly increasing indices, `#` starts a comment to end of line. Labels
// {+1,-1} or {1,0}; 0 maps to the negative class.
// ---------------------------------------------------------------------------

struct LabeledInstance {
  bool positive = false;
  FeatureVector x;
};

namespace detail {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double_token(std::string_view tok, long line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ParseError("bad numeric value '" + std::string(tok) + "'", line);
  return v;
}

inline bool parse_label_token(std::string_view tok, long line) {
  if (tok == "+1" || tok == "1") return true;
  if (tok == "-1" || tok == "0") return false;
  (void)line;
  throw UnknownLabel("unknown label '" + std::string(tok) + "' on line " + std::to_string(line));
}

}  // namespace detail

// Parses instances in file order. d is the maximum 1-based index seen across
// the whole file; every instance is widened to it.
inline std::vector<LabeledInstance> read_libsvm_instances(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");

  std::vector<LabeledInstance> instances;
  int max_index = -1;  // 0-based
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view sv(line);
    if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);

    auto next_token = [&]() -> std::string_view {
      std::size_t b = sv.find_first_not_of(" \t\r");
      if (b == std::string_view::npos) return {};
      std::size_t e = sv.find_first_of(" \t\r", b);
      std::string_view tok = sv.substr(b, e == std::string_view::npos ? sv.size() - b : e - b);
      sv.remove_prefix(e == std::string_view::npos ? sv.size() : e);
      return tok;
    };

    std::string_view label_tok = next_token();
    if (label_tok.empty()) continue;  // blank or comment-only line

    LabeledInstance inst;
    inst.positive = detail::parse_label_token(label_tok, line_number);
    int last_index = -1;
    for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw ParseError("expected index:value, got '" + std::string(tok) + "'", line_number);
      int index_1based = 0;
      {
        const char* first = tok.data();
        const char* last = tok.data() + colon;
        auto [ptr, ec] = std::from_chars(first, last, index_1based);
        if (ec != std::errc() || ptr != last || index_1based < 1)
          throw ParseError("bad feature index '" + std::string(tok.substr(0, colon)) + "'",
                           line_number);
      }
      const double value = detail::parse_double_token(tok.substr(colon + 1), line_number);
      if (!std::isfinite(value))
        throw NonFiniteValue("non-finite feature value on line " + std::to_string(line_number));
      const int index = index_1based - 1;
      if (index <= last_index)
        throw ParseError("feature indices must be strictly increasing", line_number);
      last_index = index;
      inst.x.entries.push_back({index, value});
    }
    max_index = std::max(max_index, last_index);
    instances.push_back(std::move(inst));
  }
  const int dim = max_index + 1;
  for (LabeledInstance& inst : instances) inst.x.dim = dim;
  return instances;
}

inline RankingDataset read_libsvm(const std::string& path) {
  const std::vector<LabeledInstance> instances = read_libsvm_instances(path);
  FeatureMatrix positives, negatives;
  for (const LabeledInstance& inst : instances) {
    positives.dim = negatives.dim = inst.x.dim;
    (inst.positive ? positives : negatives).rows.push_back(inst.x);
  }
  return build_dataset(std::move(positives), std::move(negatives));
}

// Positives first, then negatives; values at 17 significant digits so a
// read-back reproduces the dataset bit-exactly.
inline void write_libsvm(const RankingDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  auto write_rows = [&](const FeatureMatrix& mat, const char* label) {
    for (const FeatureVector& row : mat.rows) {
      out << label;
      for (const Feature& f : row.entries)
        out << ' ' << (f.index + 1) << ':' << detail::format_double(f.value);
      out << '\n';
    }
  };
  write_rows(data.positives, "+1");
  write_rows(data.negatives, "-1");
}

// ---------------------------------------------------------------------------
// Deterministic stratified split.
// ---------------------------------------------------------------------------

struct SplitSpec {
  double train_fraction = 2.0 / 3.0;
  std::uint64_t seed = 0;
};

inline std::pair<RankingDataset, RankingDataset> stratified_split(const RankingDataset& data,
                                                                  const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw InvalidInput("train_fraction must lie in (0, 1)");
  if (data.num_positives() == 0 || data.num_negatives() == 0)
    throw EmptyClass("both classes are required for a stratified split");

  std::mt19937_64 rng(spec.seed);
  auto split_class = [&](const FeatureMatrix& mat) {
    std::vector<std::size_t> order(mat.count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    // floor with an at-least-one-train guarantee; the small nudge keeps exact
    // fractions like 2/3 * 3 from landing just under the integer.
    std::size_t n_train = static_cast<std::size_t>(
        std::floor(spec.train_fraction * static_cast<double>(mat.count()) + 1e-9));
    n_train = std::max<std::size_t>(1, std::min(n_train, mat.count()));
    FeatureMatrix train, test;
    train.dim = test.dim = mat.dim;
    for (std::size_t i = 0; i < order.size(); ++i)
      (i < n_train ? train : test).rows.push_back(mat.rows[order[i]]);
    return std::pair(std::move(train), std::move(test));
  };

  auto [pos_train, pos_test] = split_class(data.positives);
  auto [neg_train, neg_test] = split_class(data.negatives);

  RankingDataset train, test;
  train.dim = test.dim = data.dim;
  train.positives = std::move(pos_train);
  train.negatives = std::move(neg_train);
  test.positives = std::move(pos_test);
  test.negatives = std::move(neg_test);
  return {std::move(train), std::move(test)};
}

// ---------------------------------------------------------------------------
// Unit-ball rescaling. Training-time theory assumes ||x|| <= 1; metrics are
// invariant to it, but lambda's meaning is scale-dependent, so the factor is
// recorded in the model for prediction.
// ---------------------------------------------------------------------------

inline std::pair<RankingDataset, double> scale_to_unit_ball(const RankingDataset& data) {
  double max_norm = 0.0;
  auto scan = [&](const FeatureMatrix& mat) {
    for (const FeatureVector& row : mat.rows) {
      double norm2 = 0.0;
      for (const Feature& f : row.entries) norm2 += f.value * f.value;
      max_norm = std::max(max_norm, std::sqrt(norm2));
    }
  };
  scan(data.positives);
  scan(data.negatives);
  if (max_norm <= 1.0) return {data, 1.0};

  RankingDataset scaled = data;
  const double inv = 1.0 / max_norm;
  auto rescale = [&](FeatureMatrix& mat) {
    for (FeatureVector& row : mat.rows)
      for (Feature& f : row.entries) f.value *= inv;
  };
  rescale(scaled.positives);
  rescale(scaled.negatives);
  return {std::move(scaled), max_norm};
}

// ---------------------------------------------------------------------------
// Model files: line-oriented text with an explicit schema version. Sparse
// weight storage kicks in when more than half the weights are zero.
// ---------------------------------------------------------------------------

inline void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  const std::size_t nonzeros = static_cast<std::size_t>(
      std::count_if(model.weights.begin(), model.weights.end(), [](double w) { return w != 0.0; }));
  const bool sparse = 2 * nonzeros < model.weights.size();
  out << "toppush-model 1\n";
  out << "dim " << model.weights.size() << '\n';
  out << "loss " << loss_kind_name(model.loss_kind) << '\n';
  out << "lambda " << detail::format_double(model.lambda) << '\n';
  out << "epsilon " << detail::format_double(model.trained_epsilon) << '\n';
  out << "iterations " << model.iterations_used << '\n';
  out << "scale_factor " << detail::format_double(model.scale_factor) << '\n';
  if (sparse) {
    out << "weights sparse " << nonzeros << '\n';
    for (std::size_t i = 0; i < model.weights.size(); ++i)
      if (model.weights[i] != 0.0)
        out << i << ' ' << detail::format_double(model.weights[i]) << '\n';
  } else {
    out << "weights dense " << model.weights.size() << '\n';
    for (double w : model.weights) out << detail::format_double(w) << '\n';
  }
}

inline Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file '" + path + "'");
  std::string line;
  long line_number = 0;
  auto next_line = [&]() -> std::string& {
    if (!std::getline(in, line)) throw ParseError("unexpected end of model file", line_number);
    ++line_number;
    return line;
  };

  {
    std::istringstream header(next_line());
    std::string magic;
    int version = 0;
    header >> magic >> version;
    if (magic != "toppush-model" || version != 1)
      throw ParseError("not a toppush model file (or unsupported schema)", line_number);
  }

  Model model;
  std::size_t dim = 0;
  auto expect_key = [&](const char* key) -> std::istringstream {
    std::istringstream fields(next_line());
    std::string k;
    fields >> k;
    if (k != key) throw ParseError("expected '" + std::string(key) + "', got '" + k + "'", line_number);
    return fields;
  };

  expect_key("dim") >> dim;
  {
    std::string name;
    expect_key("loss") >> name;
    if (name != loss_kind_name(LossKind::TruncatedQuadratic))
      throw ParseError("unsupported loss kind '" + name + "'", line_number);
    model.loss_kind = LossKind::TruncatedQuadratic;
  }
  expect_key("lambda") >> model.lambda;
  expect_key("epsilon") >> model.trained_epsilon;
  expect_key("iterations") >> model.iterations_used;
  expect_key("scale_factor") >> model.scale_factor;

  std::string storage;
  std::size_t count = 0;
  {
    std::istringstream fields(next_line());
    std::string k;
    fields >> k >> storage >> count;
    if (k != "weights" || (storage != "sparse" && storage != "dense"))
      throw ParseError("malformed weights header", line_number);
  }
  model.weights.assign(dim, 0.0);
  if (storage == "sparse") {
    for (std::size_t r = 0; r < count; ++r) {
      std::istringstream fields(next_line());
      std::size_t index = 0;
      double value = 0.0;
      if (!(fields >> index >> value) || index >= dim)
        throw ParseError("malformed sparse weight entry", line_number);
      model.weights[index] = value;
    }
  } else {
    if (count != dim) throw ParseError("dense weight count != dim", line_number);
    for (std::size_t i = 0; i < dim; ++i) {
      std::istringstream fields(next_line());
      if (!(fields >> model.weights[i])) throw ParseError("malformed dense weight", line_number);
    }
  }
  for (double w : model.weights)
    if (!std::isfinite(w)) throw NonFiniteValue("non-finite weight in model file");
  if (!(model.lambda > 0.0)) throw ParseError("lambda must be positive", line_number);
  return model;
}

// ---------------------------------------------------------------------------
// Prediction-time scoring. Indices the model has never seen score zero; the
// stored scale factor reproduces the training-time representation.
// ---------------------------------------------------------------------------

inline double predict_score(const Model& model, const FeatureVector& x) {
  double s = 0.0;
  for (const Feature& f : x.entries)
    if (f.index < model.dim()) s += model.weights[f.index] * f.value;
  return s / model.scale_factor;
}

inline ScoredDataset score_dataset(const Model& model, const RankingDataset& data) {
  ScoredDataset s;
  s.positive_scores.reserve(data.num_positives());
  s.negative_scores.reserve(data.num_negatives());
  for (const FeatureVector& row : data.positives.rows)
    s.positive_scores.push_back(predict_score(model, row));
  for (const FeatureVector& row : data.negatives.rows)
    s.negative_scores.push_back(predict_score(model, row));
  return s;
}

// Flat key-value record, one metric per line.
inline void write_metrics_report(const MetricsReport& report, std::ostream& out) {
  out << "pos_at_top " << detail::format_double(report.pos_at_top) << '\n';
  out << "average_precision " << detail::format_double(report.average_precision) << '\n';
  out << "ndcg " << detail::format_double(report.ndcg) << '\n';
  out << "auc " << detail::format_double(report.auc) << '\n';
  out << "ranking_loss " << detail::format_double(report.ranking_loss) << '\n';
  out << "surrogate_loss " << detail::format_double(report.surrogate_loss) << '\n';
}

}  // namespace toppush

#endif  // TOPPUSH_DATA_IO_HPP
