#ifndef TOPPUSH_PROJECTION_HPP
#define TOPPUSH_PROJECTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "toppush/errors.hpp"
#include "toppush/types.hpp"

// Euclidean projection onto {alpha >= 0, beta >= 0, sum(alpha) == sum(beta)}.
//
// The minimizer has the form alpha = [alpha0 - gamma]+, beta = [beta0 + gamma]+
// where gamma is a root of
//
//   rho(gamma) = sum_i [alpha0_i - gamma]+ - sum_j [beta0_j + gamma]+ ,
//
// a non-increasing piecewise-linear function whose breakpoints are the merged
// values {alpha0_i} u {-beta0_j}. project() locates the root by randomized
// partitioning of the breakpoint set (expected linear time); project_oracle()
// sorts the breakpoints and scans (O(N log N)), kept as an independent
// reference implementation.

namespace toppush {

struct ProjectionInput {
  std::vector<double> alpha0;
  std::vector<double> beta0;
};

struct ProjectionResult {
  std::vector<double> alpha;
  std::vector<double> beta;
  double gamma = 0.0;
};

inline double rho(double gamma, const ProjectionInput& input) {
  double s = 0.0;
  for (double a : input.alpha0) s += std::max(a - gamma, 0.0);
  for (double b : input.beta0) s -= std::max(b + gamma, 0.0);
  return s;
}

namespace detail {

inline void check_projection_input(const ProjectionInput& input) {
  if (input.alpha0.empty() || input.beta0.empty())
    throw InvalidInput("projection needs at least one alpha and one beta coordinate");
  for (double a : input.alpha0)
    if (!std::isfinite(a)) throw NonFiniteValue("non-finite alpha in projection input");
  for (double b : input.beta0)
    if (!std::isfinite(b)) throw NonFiniteValue("non-finite beta in projection input");
}

// Fixed-point fast path: points already in the cone (up to the feasibility
// tolerance) project to themselves, which makes re-projection exact.
inline bool already_feasible(const ProjectionInput& input) {
  double sum_alpha = 0.0, sum_beta = 0.0;
  for (double a : input.alpha0) {
    if (a < 0.0) return false;
    sum_alpha += a;
  }
  for (double b : input.beta0) {
    if (b < 0.0) return false;
    sum_beta += b;
  }
  return std::abs(sum_alpha - sum_beta) <= kFeasibilityTolerance * std::max(1.0, sum_alpha);
}

inline ProjectionResult clip(const ProjectionInput& input, double gamma) {
  ProjectionResult r;
  r.gamma = gamma;
  r.alpha.resize(input.alpha0.size());
  r.beta.resize(input.beta0.size());
  for (std::size_t i = 0; i < input.alpha0.size(); ++i)
    r.alpha[i] = std::max(input.alpha0[i] - gamma, 0.0);
  for (std::size_t j = 0; j < input.beta0.size(); ++j)
    r.beta[j] = std::max(input.beta0[j] + gamma, 0.0);
  return r;
}

// All-clipped degeneracy: when max(alpha0) <= -max(beta0) both outputs are
// zero vectors and rho vanishes on a whole interval of gamma values. gamma is
// pinned to the right endpoint -max(beta0), which is also where the
// randomized search settles.
inline bool degenerate_gamma(const ProjectionInput& input, double* gamma) {
  double amax = *std::max_element(input.alpha0.begin(), input.alpha0.end());
  double bmax = *std::max_element(input.beta0.begin(), input.beta0.end());
  if (amax <= -bmax) {
    *gamma = -bmax;
    return true;
  }
  return false;
}

}  // namespace detail

// Exact projection in expected linear time. The seed drives pivot choice only;
// the output is seed-independent up to summation round-off.
inline ProjectionResult project(const ProjectionInput& input, std::uint64_t rng_seed) {
  detail::check_projection_input(input);
  if (detail::already_feasible(input))
    return ProjectionResult{input.alpha0, input.beta0, 0.0};

  // ua holds candidate alpha0 values, ub holds -beta0 values; the active
  // windows shrink toward the breakpoint interval bracketing the root.
  std::vector<double> ua = input.alpha0;
  std::vector<double> ub(input.beta0.size());
  for (std::size_t j = 0; j < input.beta0.size(); ++j) ub[j] = -input.beta0[j];

  std::size_t abeg = 0, aend = ua.size();
  std::size_t bbeg = 0, bend = ub.size();
  double sum_above = 0.0;  // alpha0 values confirmed above the root
  double sum_below = 0.0;  // -beta0 values confirmed at or below it
  std::size_t n_above = 0, n_below = 0;

  // Three-way partition of a window against the pivot value: [beg, lt) > u,
  // [lt, gt) == u, [gt, end) < u. Returns the sum of the strictly-greater
  // part; gradient steps routinely produce long runs of identical values, so
  // the whole equality class must be resolved in one round to keep the
  // expected-linear bound.
  const auto three_way = [](std::vector<double>& v, std::size_t beg, std::size_t end, double u,
                            std::size_t* lt_out, std::size_t* gt_out, double* sum_greater,
                            double* sum_less) {
    std::size_t lt = beg, i = beg, gt = end;
    double above = 0.0, below = 0.0;
    while (i < gt) {
      const double x = v[i];
      if (x > u) {
        above += x;
        std::swap(v[i], v[lt]);
        ++lt;
        ++i;
      } else if (x == u) {
        ++i;
      } else {
        below += x;
        std::swap(v[i], v[--gt]);
      }
    }
    *lt_out = lt;
    *gt_out = gt;
    *sum_greater = above;
    *sum_less = below;
  };

  std::mt19937_64 rng(rng_seed);
  while (abeg < aend || bbeg < bend) {
    const std::size_t na = aend - abeg, nb = bend - bbeg;
    std::uniform_int_distribution<std::size_t> pick(0, na + nb - 1);
    const std::size_t t = pick(rng);
    const double u = t < na ? ua[abeg + t] : ub[bbeg + (t - na)];

    std::size_t alt, agt, blt, bgt;
    double a_above, a_below, b_above, b_below;
    three_way(ua, abeg, aend, u, &alt, &agt, &a_above, &a_below);
    three_way(ub, bbeg, bend, u, &blt, &bgt, &b_above, &b_below);
    const std::size_t a_greater = alt - abeg;
    const std::size_t a_equal = agt - alt;
    const std::size_t b_equal = bgt - blt;
    const std::size_t b_less = bend - bgt;

    // trial_sum - trial_n * u == rho(u): values tied with u cancel exactly,
    // so the equality classes stay out of the test.
    const double trial_sum = sum_above + a_above + sum_below + b_below;
    const double trial_n = static_cast<double>(n_above + a_greater + n_below + b_less);
    if (trial_sum < trial_n * u) {
      // rho(u) < 0: root strictly below u. Alpha values >= u (including the
      // ties) are resolved above the root; beta values >= u can never enter
      // the beta index set, drop them.
      sum_above += a_above + u * static_cast<double>(a_equal);
      n_above += a_greater + a_equal;
      abeg = agt;
      bbeg = bgt;
    } else {
      // rho(u) >= 0: root at or above u. Beta values <= u (including the
      // ties) are resolved below the root; alpha values <= u can never enter
      // the alpha index set, drop them.
      sum_below += b_below + u * static_cast<double>(b_equal);
      n_below += b_less + b_equal;
      aend = alt;
      bend = blt;
    }
  }

  double gamma;
  if (n_above + n_below == 0) {
    // Unreachable in practice: the terminal rounds always resolve a value
    // into one of the accumulators. Kept as a safety net.
    gamma = 0.0;
    detail::degenerate_gamma(input, &gamma);
  } else {
    gamma = (sum_above + sum_below) / static_cast<double>(n_above + n_below);
  }
  return detail::clip(input, gamma);
}

// Sort-and-scan reference: identical output, O(N log N). Finds the breakpoint
// interval with rho > 0 on its left edge and rho <= 0 at the next value, then
// solves that linear piece in closed form.
inline ProjectionResult project_oracle(const ProjectionInput& input) {
  detail::check_projection_input(input);
  if (detail::already_feasible(input))
    return ProjectionResult{input.alpha0, input.beta0, 0.0};
  double gamma = 0.0;
  if (detail::degenerate_gamma(input, &gamma)) return detail::clip(input, gamma);

  struct Point {
    double value;
    bool is_alpha;
  };
  const std::size_t m = input.alpha0.size();
  std::vector<Point> u;
  u.reserve(m + input.beta0.size());
  for (double a : input.alpha0) u.push_back({a, true});
  for (double b : input.beta0) u.push_back({-b, false});
  std::sort(u.begin(), u.end(),
            [](const Point& x, const Point& y) { return x.value < y.value; });
  const std::size_t k = u.size();

  // Suffix sums of alpha values and prefix sums of -beta values make rho at
  // any breakpoint an O(1) lookup.
  std::vector<double> alpha_suffix_sum(k + 1, 0.0);
  std::vector<std::size_t> alpha_suffix_cnt(k + 1, 0);
  for (std::size_t i = k; i-- > 0;) {
    alpha_suffix_sum[i] = alpha_suffix_sum[i + 1] + (u[i].is_alpha ? u[i].value : 0.0);
    alpha_suffix_cnt[i] = alpha_suffix_cnt[i + 1] + (u[i].is_alpha ? 1 : 0);
  }
  std::vector<double> beta_prefix_sum(k + 1, 0.0);
  std::vector<std::size_t> beta_prefix_cnt(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) {
    beta_prefix_sum[i + 1] = beta_prefix_sum[i] + (u[i].is_alpha ? 0.0 : u[i].value);
    beta_prefix_cnt[i + 1] = beta_prefix_cnt[i] + (u[i].is_alpha ? 0 : 1);
  }

  // group_end: one past the run of elements sharing a value. At that value v,
  // the alpha index set is the strict suffix, the beta index set the
  // inclusive prefix.
  auto rho_at = [&](std::size_t group_end) {
    const double v = u[group_end - 1].value;
    const double num = alpha_suffix_sum[group_end] + beta_prefix_sum[group_end];
    const double cnt =
        static_cast<double>(alpha_suffix_cnt[group_end] + beta_prefix_cnt[group_end]);
    return num - cnt * v;
  };
  auto group_end_from = [&](std::size_t begin) {
    std::size_t e = begin + 1;
    while (e < k && u[e].value == u[begin].value) ++e;
    return e;
  };

  std::size_t g_end = group_end_from(0);
  if (rho_at(g_end) <= 0.0) {
    // Root on the ray left of the smallest breakpoint: every alpha counts,
    // no beta does.
    return detail::clip(input, alpha_suffix_sum[0] / static_cast<double>(m));
  }

  // rho at the largest breakpoint is always <= 0, so the crossing exists.
  std::size_t last_positive_end = g_end;
  while (g_end < k) {
    const std::size_t next_end = group_end_from(g_end);
    if (rho_at(next_end) <= 0.0) break;
    last_positive_end = next_end;
    g_end = next_end;
  }
  const double num = alpha_suffix_sum[last_positive_end] + beta_prefix_sum[last_positive_end];
  const std::size_t cnt =
      alpha_suffix_cnt[last_positive_end] + beta_prefix_cnt[last_positive_end];
  return detail::clip(input, num / static_cast<double>(cnt));
}

}  // namespace toppush

#endif  // TOPPUSH_PROJECTION_HPP
