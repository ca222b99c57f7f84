#ifndef TOPPUSH_TYPES_HPP
#define TOPPUSH_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "toppush/errors.hpp"

namespace toppush {

// One nonzero coordinate of a sparse instance.
struct Feature {
  int index = 0;  // 0-based, < dim of the owning vector
  double value = 0.0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

// Sparse instance x in R^d: sorted nonzero entries, strictly increasing
// indices, no explicit zeros required. Dense vectors are the full-index case.
struct FeatureVector {
  std::vector<Feature> entries;
  int dim = 0;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Row-oriented sparse matrix: all rows share the same dimension.
struct FeatureMatrix {
  std::vector<FeatureVector> rows;
  int dim = 0;

  std::size_t count() const { return rows.size(); }

  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

enum class LossKind {
  TruncatedQuadratic,
};

inline std::string loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::TruncatedQuadratic:
      return "truncated_quadratic";
  }
  return "unknown";
}

// Paired positive/negative matrices; the unit a trainer consumes.
struct RankingDataset {
  FeatureMatrix positives;
  FeatureMatrix negatives;
  int dim = 0;

  std::size_t num_positives() const { return positives.count(); }
  std::size_t num_negatives() const { return negatives.count(); }

  friend bool operator==(const RankingDataset&, const RankingDataset&) = default;
};

// Learned linear scorer f(x) = w'x plus the training configuration that
// produced it. scale_factor records any unit-ball rescaling applied to the
// training data so prediction can apply the same one.
struct Model {
  std::vector<double> weights;
  double lambda = 1.0;
  LossKind loss_kind = LossKind::TruncatedQuadratic;
  double trained_epsilon = 1e-4;
  std::int64_t iterations_used = 0;
  double scale_factor = 1.0;

  int dim() const { return static_cast<int>(weights.size()); }
};

// Dual variables (alpha, beta), nonnegative with equal coordinate sums.
struct DualState {
  std::vector<double> alpha;
  std::vector<double> beta;
};

// Relative tolerance for the equal-sums constraint: projections are exact in
// real arithmetic but floating-point sums drift.
inline constexpr double kFeasibilityTolerance = 1e-9;

namespace detail {

inline void check_feature_vector(const FeatureVector& x) {
  int last = -1;
  for (const Feature& f : x.entries) {
    if (f.index <= last)
      throw InvalidInput("feature indices must be strictly increasing");
    if (f.index >= x.dim)
      throw DimensionMismatch("feature index " + std::to_string(f.index) +
                              " out of range for dimension " + std::to_string(x.dim));
    if (!std::isfinite(f.value))
      throw NonFiniteValue("non-finite feature value at index " + std::to_string(f.index));
    last = f.index;
  }
}

inline void check_matrix(const FeatureMatrix& m, const char* which) {
  for (const FeatureVector& row : m.rows) {
    if (row.dim != m.dim)
      throw DimensionMismatch(std::string(which) + " row dimension " + std::to_string(row.dim) +
                              " != matrix dimension " + std::to_string(m.dim));
    check_feature_vector(row);
  }
}

}  // namespace detail

// Validates and assembles a training dataset. Inputs are copied, never
// mutated; every entry is preserved bit-exactly.
inline RankingDataset build_dataset(FeatureMatrix positives, FeatureMatrix negatives) {
  if (positives.rows.empty()) throw EmptyClass("no positive instances");
  if (negatives.rows.empty()) throw EmptyClass("no negative instances");
  if (positives.dim != negatives.dim)
    throw DimensionMismatch("positive dimension " + std::to_string(positives.dim) +
                            " != negative dimension " + std::to_string(negatives.dim));
  detail::check_matrix(positives, "positive");
  detail::check_matrix(negatives, "negative");
  RankingDataset data;
  data.dim = positives.dim;
  data.positives = std::move(positives);
  data.negatives = std::move(negatives);
  return data;
}

// f(x) = w'x. Strict about dimensions; see predict_score in data_io.hpp for
// the lenient prediction-time variant.
inline double score(const Model& model, const FeatureVector& x) {
  if (x.dim != model.dim())
    throw DimensionMismatch("instance dimension " + std::to_string(x.dim) +
                            " != model dimension " + std::to_string(model.dim()));
  double s = 0.0;
  for (const Feature& f : x.entries) s += model.weights[f.index] * f.value;
  return s;
}

inline double feasibility_residual(const DualState& state) {
  double sum_alpha = 0.0, sum_beta = 0.0;
  for (double a : state.alpha) sum_alpha += a;
  for (double b : state.beta) sum_beta += b;
  return std::abs(sum_alpha - sum_beta) / std::max(1.0, sum_alpha);
}

inline bool is_feasible(const DualState& state, double tol = kFeasibilityTolerance) {
  for (double a : state.alpha)
    if (!(a >= 0.0)) return false;
  for (double b : state.beta)
    if (!(b >= 0.0)) return false;
  return feasibility_residual(state) <= tol;
}

}  // namespace toppush

#endif  // TOPPUSH_TYPES_HPP
