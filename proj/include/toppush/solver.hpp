#ifndef TOPPUSH_SOLVER_HPP
#define TOPPUSH_SOLVER_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "toppush/errors.hpp"
#include "toppush/loss.hpp"
#include "toppush/projection.hpp"
#include "toppush/types.hpp"

// Dual trainer. The primal problem
//
//   min_w  lambda/2 ||w||^2 + 1/m sum_i loss(max_j w'xj- - w'xi+)
//
// is solved through its dual
//
//   min_{(a,b) in Xi}  g(a,b) = 1/(2 lambda m) ||a'X+ - b'X-||^2 + sum_i conj(a_i)
//
// over Xi = {a >= 0, b >= 0, sum(a) == sum(b)}, by accelerated projected
// gradient with a doubling line search on the smoothness estimate. The primal
// weights come back as w = (a'X+ - b'X-) / (lambda m), and the dual function
// value at (a,b) is -g(a,b)/m, which makes the duality gap
// primal(w) + g(a,b)/m.

namespace toppush {

struct SolverConfig {
  double lambda = 1.0;
  double epsilon = 1e-4;
  std::int64_t max_iterations = 100000;
  LossKind loss_kind = LossKind::TruncatedQuadratic;
  std::uint64_t rng_seed = 0;
  bool record_trace = false;
};

struct IterationRecord {
  std::int64_t k = 0;
  double g_value = 0.0;
  double smoothness = 0.0;  // L_k after the line search
  int line_search_doublings = 0;
  double feasibility_residual = 0.0;
};

struct SolverTrace {
  std::vector<IterationRecord> records;
};

struct SolveOutcome {
  Model model;
  DualState dual;
  std::int64_t iterations = 0;
  double final_gap_estimate = 0.0;
  bool converged = false;
  std::optional<SolverTrace> trace;
};

// Per-iteration hook for diagnostics; receives the accepted iterate.
using IterationObserver = std::function<void(std::int64_t, const DualState&)>;

namespace detail {

inline void check_solver_config(const SolverConfig& config) {
  if (!(config.lambda > 0.0)) throw InvalidInput("lambda must be positive");
  if (!(config.epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (config.max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
}

inline void check_dual_lengths(const std::vector<double>& alpha,
                               const std::vector<double>& beta,
                               const RankingDataset& data) {
  if (alpha.size() != data.num_positives())
    throw DimensionMismatch("alpha length " + std::to_string(alpha.size()) +
                            " != positive count " + std::to_string(data.num_positives()));
  if (beta.size() != data.num_negatives())
    throw DimensionMismatch("beta length " + std::to_string(beta.size()) +
                            " != negative count " + std::to_string(data.num_negatives()));
}

// nu = a'X+ - b'X- accumulated densely; O(nnz) scatter.
inline void accumulate_nu(const std::vector<double>& alpha, const std::vector<double>& beta,
                          const RankingDataset& data, std::vector<double>* nu) {
  nu->assign(static_cast<std::size_t>(data.dim), 0.0);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (const Feature& f : data.positives.rows[i].entries)
      (*nu)[f.index] += alpha[i] * f.value;
  for (std::size_t j = 0; j < beta.size(); ++j)
    for (const Feature& f : data.negatives.rows[j].entries)
      (*nu)[f.index] -= beta[j] * f.value;
}

inline double dual_objective_from_nu(const std::vector<double>& alpha,
                                     const std::vector<double>& nu, double lambda,
                                     std::size_t m) {
  double quad = 0.0;
  for (double v : nu) quad += v * v;
  double conj = 0.0;
  for (double a : alpha) conj += conjugate_value_raw(a);
  return quad / (2.0 * lambda * static_cast<double>(m)) + conj;
}

inline void dual_gradient_from_nu(const std::vector<double>& alpha,
                                  const std::vector<double>& nu,
                                  const RankingDataset& data, double lambda,
                                  std::vector<double>* grad_alpha,
                                  std::vector<double>* grad_beta) {
  const double inv = 1.0 / (lambda * static_cast<double>(alpha.size()));
  grad_alpha->resize(alpha.size());
  grad_beta->resize(data.num_negatives());
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    double dot = 0.0;
    for (const Feature& f : data.positives.rows[i].entries) dot += nu[f.index] * f.value;
    (*grad_alpha)[i] = dot * inv + conjugate_derivative_raw(alpha[i]);
  }
  for (std::size_t j = 0; j < grad_beta->size(); ++j) {
    double dot = 0.0;
    for (const Feature& f : data.negatives.rows[j].entries) dot += nu[f.index] * f.value;
    (*grad_beta)[j] = -dot * inv;
  }
}

}  // namespace detail

// g(a,b) on the conjugate domain a >= 0 (beta is unconstrained in sign here;
// the quadratic term is defined everywhere).
inline double dual_objective(const std::vector<double>& alpha, const std::vector<double>& beta,
                             const RankingDataset& data, double lambda, LossKind kind) {
  detail::check_dual_lengths(alpha, beta, data);
  for (double a : alpha)
    if (a < 0.0) throw DomainViolation("negative alpha coordinate in dual objective");
  (void)kind;
  std::vector<double> nu;
  detail::accumulate_nu(alpha, beta, data, &nu);
  return detail::dual_objective_from_nu(alpha, nu, lambda, alpha.size());
}

// Two-pass gradient: one scatter to build nu, one row sweep for the products.
inline std::pair<std::vector<double>, std::vector<double>> dual_gradient(
    const std::vector<double>& alpha, const std::vector<double>& beta,
    const RankingDataset& data, double lambda, LossKind kind) {
  detail::check_dual_lengths(alpha, beta, data);
  for (double a : alpha)
    if (a < 0.0) throw DomainViolation("negative alpha coordinate in dual gradient");
  (void)kind;
  std::vector<double> nu;
  detail::accumulate_nu(alpha, beta, data, &nu);
  std::pair<std::vector<double>, std::vector<double>> grads;
  detail::dual_gradient_from_nu(alpha, nu, data, lambda, &grads.first, &grads.second);
  return grads;
}

// w = (a'X+ - b'X-) / (lambda m).
inline std::vector<double> recover_primal(const DualState& state, const RankingDataset& data,
                                          double lambda) {
  detail::check_dual_lengths(state.alpha, state.beta, data);
  std::vector<double> nu;
  detail::accumulate_nu(state.alpha, state.beta, data, &nu);
  const double inv = 1.0 / (lambda * static_cast<double>(data.num_positives()));
  for (double& v : nu) v *= inv;
  return nu;
}

inline double primal_objective(const std::vector<double>& w, const RankingDataset& data,
                               double lambda, LossKind kind) {
  if (w.size() != static_cast<std::size_t>(data.dim))
    throw DimensionMismatch("weight length " + std::to_string(w.size()) + " != dimension " +
                            std::to_string(data.dim));
  auto row_score = [&](const FeatureVector& row) {
    double s = 0.0;
    for (const Feature& f : row.entries) s += w[f.index] * f.value;
    return s;
  };
  double max_neg = row_score(data.negatives.rows[0]);
  for (std::size_t j = 1; j < data.num_negatives(); ++j)
    max_neg = std::max(max_neg, row_score(data.negatives.rows[j]));
  double loss_sum = 0.0;
  for (const FeatureVector& row : data.positives.rows)
    loss_sum += loss_value(kind, max_neg - row_score(row));
  double norm2 = 0.0;
  for (double v : w) norm2 += v * v;
  return 0.5 * lambda * norm2 + loss_sum / static_cast<double>(data.num_positives());
}

// primal(w(a,b)) + g(a,b)/m: nonnegative up to round-off, zero at the optimum.
inline double duality_gap(const DualState& state, const RankingDataset& data, double lambda,
                          LossKind kind) {
  const std::vector<double> w = recover_primal(state, data, lambda);
  const double dual = dual_objective(state.alpha, state.beta, data, lambda, kind);
  return primal_objective(w, data, lambda, kind) +
         dual / static_cast<double>(data.num_positives());
}

inline SolveOutcome solve(const RankingDataset& data, const SolverConfig& config,
                          const IterationObserver& observer) {
  detail::check_solver_config(config);
  const std::size_t m = data.num_positives();
  const std::size_t n = data.num_negatives();
  if (m == 0 || n == 0) throw EmptyClass("training requires both classes");

  std::vector<double> prev_a(m, 0.0), prev_b(n, 0.0);
  std::vector<double> curr_a(m, 0.0), curr_b(n, 0.0);
  std::vector<double> aux_a(m), aux_b(n);
  std::vector<double> grad_a, grad_b, nu;

  // t_{-1} = 0 and t_0 = 1 make the first two updates plain projected
  // gradient steps; Nesterov extrapolation starts on the third.
  double t_km2 = 0.0, t_km1 = 1.0;
  double smoothness = 1.0 / static_cast<double>(m + n);
  double g_curr = 0.0;  // g at (0, 0)

  std::mt19937_64 projection_seeds(config.rng_seed);

  SolveOutcome out;
  if (config.record_trace) out.trace.emplace();

  std::int64_t iterations = 0;
  bool converged = false;
  double g_new = g_curr;

  while (iterations < config.max_iterations) {
    ++iterations;
    const double omega = (t_km2 - 1.0) / t_km1;
    for (std::size_t i = 0; i < m; ++i) aux_a[i] = curr_a[i] + omega * (curr_a[i] - prev_a[i]);
    for (std::size_t j = 0; j < n; ++j) aux_b[j] = curr_b[j] + omega * (curr_b[j] - prev_b[j]);

    // The auxiliary point can leave the nonnegative orthant; the smooth
    // extension of the conjugate keeps the line search well defined there.
    detail::accumulate_nu(aux_a, aux_b, data, &nu);
    const double g_aux = detail::dual_objective_from_nu(aux_a, nu, config.lambda, m);
    detail::dual_gradient_from_nu(aux_a, nu, data, config.lambda, &grad_a, &grad_b);

    ProjectionInput step;
    step.alpha0.resize(m);
    step.beta0.resize(n);
    ProjectionResult next;
    int doublings = 0;
    const double slack = 1e-12 * (1.0 + std::abs(g_aux));
    for (;;) {
      const double inv_l = 1.0 / smoothness;
      for (std::size_t i = 0; i < m; ++i) step.alpha0[i] = aux_a[i] - inv_l * grad_a[i];
      for (std::size_t j = 0; j < n; ++j) step.beta0[j] = aux_b[j] - inv_l * grad_b[j];
      next = project(step, projection_seeds());

      detail::accumulate_nu(next.alpha, next.beta, data, &nu);
      g_new = detail::dual_objective_from_nu(next.alpha, nu, config.lambda, m);

      double linear = 0.0, dist2 = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double d = next.alpha[i] - aux_a[i];
        linear += grad_a[i] * d;
        dist2 += d * d;
      }
      for (std::size_t j = 0; j < n; ++j) {
        const double d = next.beta[j] - aux_b[j];
        linear += grad_b[j] * d;
        dist2 += d * d;
      }
      if (g_new <= g_aux + linear + 0.5 * smoothness * dist2 + slack) break;
      smoothness *= 2.0;
      if (++doublings > 200)
        throw NonFiniteValue("line search failed to certify descent; objective diverged");
    }
    if (!std::isfinite(g_new)) throw NonFiniteValue("dual objective is not finite");

    prev_a.swap(curr_a);
    prev_b.swap(curr_b);
    curr_a = std::move(next.alpha);
    curr_b = std::move(next.beta);

    const double t_k = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_km1 * t_km1));
    t_km2 = t_km1;
    t_km1 = t_k;

    if (out.trace) {
      IterationRecord rec;
      rec.k = iterations;
      rec.g_value = g_new;
      rec.smoothness = smoothness;
      rec.line_search_doublings = doublings;
      rec.feasibility_residual = feasibility_residual(DualState{curr_a, curr_b});
      out.trace->records.push_back(rec);
    }
    if (observer) observer(iterations, DualState{curr_a, curr_b});

    if (std::abs(g_new - g_curr) < config.epsilon) {
      converged = true;
      break;
    }
    g_curr = g_new;
  }

  out.dual.alpha = std::move(curr_a);
  out.dual.beta = std::move(curr_b);
  out.iterations = iterations;
  out.converged = converged;

  out.model.weights = recover_primal(out.dual, data, config.lambda);
  out.model.lambda = config.lambda;
  out.model.loss_kind = config.loss_kind;
  out.model.trained_epsilon = config.epsilon;
  out.model.iterations_used = iterations;
  out.final_gap_estimate = duality_gap(out.dual, data, config.lambda, config.loss_kind);
  return out;
}

inline SolveOutcome solve(const RankingDataset& data, const SolverConfig& config) {
  return solve(data, config, IterationObserver{});
}

}  // namespace toppush

#endif  // TOPPUSH_SOLVER_HPP
