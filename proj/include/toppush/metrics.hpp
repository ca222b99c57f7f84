#ifndef TOPPUSH_METRICS_HPP
#define TOPPUSH_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "toppush/errors.hpp"
#include "toppush/loss.hpp"
#include "toppush/types.hpp"

// Top-of-list evaluation over scored datasets. Ranking loss and the top loss
// use <= (a tie counts as an error); AUC uses the half-tie Wilcoxon
// convention; AP and NDCG break score ties pessimistically, placing negatives
// above tied positives.

namespace toppush {

struct ScoredDataset {
  std::vector<double> positive_scores;
  std::vector<double> negative_scores;
};

struct MetricsReport {
  double pos_at_top = 0.0;
  double average_precision = 0.0;
  double ndcg = 0.0;
  double auc = 0.0;
  double ranking_loss = 0.0;
  double surrogate_loss = 0.0;
};

namespace detail {

inline void check_scores(const ScoredDataset& s) {
  if (s.positive_scores.empty()) throw EmptyClass("no positive scores");
  if (s.negative_scores.empty()) throw EmptyClass("no negative scores");
  for (double v : s.positive_scores)
    if (!std::isfinite(v)) throw NonFiniteValue("non-finite positive score");
  for (double v : s.negative_scores)
    if (!std::isfinite(v)) throw NonFiniteValue("non-finite negative score");
}

// Ranks (1-based) of the positives in the merged descending order, negatives
// placed above tied positives. rank = #negatives at-or-above + position among
// the sorted positives.
inline std::vector<std::size_t> pessimistic_positive_ranks(const ScoredDataset& s) {
  std::vector<double> pos = s.positive_scores;
  std::vector<double> neg = s.negative_scores;
  std::sort(pos.begin(), pos.end(), std::greater<>());
  std::sort(neg.begin(), neg.end());
  std::vector<std::size_t> ranks(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    // negatives with score >= pos[i]
    const std::size_t above =
        neg.size() - (std::lower_bound(neg.begin(), neg.end(), pos[i]) - neg.begin());
    ranks[i] = above + i + 1;
  }
  return ranks;
}

}  // namespace detail

// Fraction of misordered positive-negative pairs, ties counted as errors.
inline double ranking_loss(const ScoredDataset& s) {
  detail::check_scores(s);
  std::vector<double> neg = s.negative_scores;
  std::sort(neg.begin(), neg.end());
  std::size_t violations = 0;
  for (double p : s.positive_scores) {
    // pairs with p <= n, i.e. negatives at or above p
    violations += neg.size() - (std::lower_bound(neg.begin(), neg.end(), p) - neg.begin());
  }
  return static_cast<double>(violations) /
         (static_cast<double>(s.positive_scores.size()) * static_cast<double>(neg.size()));
}

// Fraction of positives at or below the top-ranked negative.
inline double top_loss(const ScoredDataset& s) {
  detail::check_scores(s);
  const double max_neg =
      *std::max_element(s.negative_scores.begin(), s.negative_scores.end());
  std::size_t below = 0;
  for (double p : s.positive_scores) below += (p <= max_neg) ? 1 : 0;
  return static_cast<double>(below) / static_cast<double>(s.positive_scores.size());
}

// Fraction of positives strictly above the top-ranked negative.
inline double pos_at_top(const ScoredDataset& s) { return 1.0 - top_loss(s); }

inline double surrogate_top_loss(const ScoredDataset& s, LossKind kind) {
  detail::check_scores(s);
  const double max_neg =
      *std::max_element(s.negative_scores.begin(), s.negative_scores.end());
  double sum = 0.0;
  for (double p : s.positive_scores) sum += loss_value(kind, max_neg - p);
  return sum / static_cast<double>(s.positive_scores.size());
}

// Literal max-over-negatives form; for a non-decreasing loss it coincides
// with surrogate_top_loss, and the test suite holds it to that.
inline double infinite_push_loss(const ScoredDataset& s, LossKind kind) {
  detail::check_scores(s);
  double worst = 0.0;
  bool first = true;
  for (double nscore : s.negative_scores) {
    double sum = 0.0;
    for (double p : s.positive_scores) sum += loss_value(kind, nscore - p);
    sum /= static_cast<double>(s.positive_scores.size());
    if (first || sum > worst) {
      worst = sum;
      first = false;
    }
  }
  return worst;
}

inline double auc(const ScoredDataset& s) {
  detail::check_scores(s);
  std::vector<double> neg = s.negative_scores;
  std::sort(neg.begin(), neg.end());
  double wins = 0.0;
  for (double p : s.positive_scores) {
    const std::size_t strictly_below =
        std::lower_bound(neg.begin(), neg.end(), p) - neg.begin();
    const std::size_t tied =
        (std::upper_bound(neg.begin(), neg.end(), p) - neg.begin()) - strictly_below;
    wins += static_cast<double>(strictly_below) + 0.5 * static_cast<double>(tied);
  }
  return wins / (static_cast<double>(s.positive_scores.size()) * static_cast<double>(neg.size()));
}

inline double average_precision(const ScoredDataset& s) {
  detail::check_scores(s);
  const std::vector<std::size_t> ranks = detail::pessimistic_positive_ranks(s);
  double sum = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i)
    sum += static_cast<double>(i + 1) / static_cast<double>(ranks[i]);
  return sum / static_cast<double>(ranks.size());
}

// Binary-relevance NDCG at full depth with log2(1 + rank) discounts.
inline double ndcg(const ScoredDataset& s) {
  detail::check_scores(s);
  const std::vector<std::size_t> ranks = detail::pessimistic_positive_ranks(s);
  double dcg = 0.0, ideal = 0.0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    dcg += 1.0 / std::log2(static_cast<double>(ranks[i]) + 1.0);
    ideal += 1.0 / std::log2(static_cast<double>(i + 1) + 1.0);
  }
  return dcg / ideal;
}

inline MetricsReport compute_metrics(const ScoredDataset& s, LossKind kind) {
  MetricsReport r;
  r.pos_at_top = pos_at_top(s);
  r.average_precision = average_precision(s);
  r.ndcg = ndcg(s);
  r.auc = auc(s);
  r.ranking_loss = ranking_loss(s);
  r.surrogate_loss = surrogate_top_loss(s, kind);
  return r;
}

}  // namespace toppush

#endif  // TOPPUSH_METRICS_HPP
