// Acceptance suite: every criterion prints one [PASS]/[FAIL] line; the
// process exit code is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "toppush/cli.hpp"
#include "toppush/toppush.hpp"

using namespace toppush;
namespace fs = std::filesystem;

namespace {

constexpr LossKind kQuad = LossKind::TruncatedQuadratic;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double k = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// --------------------------------------------------------------------------
// 1. Projection exactness vs the sort-based oracle
// --------------------------------------------------------------------------
bool criterion_projection_exactness(std::string& detail) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> side(1, 50);
  std::uniform_real_distribution<double> entry(-5.0, 5.0);

  const double start = now_seconds();
  double worst_coord = 0.0, worst_residual = 0.0;
  bool idempotent = true;
  for (int trial = 0; trial < 10000; ++trial) {
    ProjectionInput in;
    in.alpha0.resize(side(rng));
    in.beta0.resize(side(rng));
    for (double& v : in.alpha0) v = entry(rng);
    for (double& v : in.beta0) v = entry(rng);

    const ProjectionResult fast = project(in, rng());
    const ProjectionResult slow = project_oracle(in);
    for (std::size_t i = 0; i < fast.alpha.size(); ++i)
      worst_coord = std::max(worst_coord, std::abs(fast.alpha[i] - slow.alpha[i]));
    for (std::size_t j = 0; j < fast.beta.size(); ++j)
      worst_coord = std::max(worst_coord, std::abs(fast.beta[j] - slow.beta[j]));

    double sa = 0.0, sb = 0.0;
    for (double v : fast.alpha) sa += v;
    for (double v : fast.beta) sb += v;
    worst_residual = std::max(worst_residual, std::abs(sa - sb) / std::max(1.0, sa));

    const ProjectionResult again = project({fast.alpha, fast.beta}, rng());
    if (again.alpha != fast.alpha || again.beta != fast.beta) idempotent = false;
  }
  const double elapsed = now_seconds() - start;
  detail = "max coord diff " + fmt(worst_coord) + ", max residual " + fmt(worst_residual) +
           ", idempotent " + (idempotent ? "yes" : "NO") + ", " + fmt(elapsed) + " s";
  return worst_coord <= 1e-9 && worst_residual <= 1e-9 && idempotent && elapsed < 5.0;
}

// --------------------------------------------------------------------------
// 2. Projection runtime scaling: expected linear vs the oracle's sort
// --------------------------------------------------------------------------
bool criterion_projection_scaling(std::string& detail) {
  const std::vector<std::size_t> sizes{1000, 10000, 100000, 1000000};
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> entry(-5.0, 5.0);

  std::vector<double> log_n, log_fast, log_slow;
  for (std::size_t total : sizes) {
    ProjectionInput in;
    in.alpha0.resize(total / 2);
    in.beta0.resize(total - total / 2);
    for (double& v : in.alpha0) v = entry(rng);
    for (double& v : in.beta0) v = entry(rng);

    const int reps = std::max<int>(3, static_cast<int>(2000000 / total));
    std::vector<double> fast_times, slow_times;
    for (int r = 0; r < reps; ++r) {
      double t0 = now_seconds();
      const ProjectionResult pr = project(in, rng());
      double t1 = now_seconds();
      fast_times.push_back(t1 - t0);
      if (pr.alpha.empty()) return false;  // keep the call alive

      t0 = now_seconds();
      const ProjectionResult orc = project_oracle(in);
      t1 = now_seconds();
      slow_times.push_back(t1 - t0);
      if (orc.alpha.empty()) return false;
    }
    std::sort(fast_times.begin(), fast_times.end());
    std::sort(slow_times.begin(), slow_times.end());
    log_n.push_back(std::log(static_cast<double>(total)));
    log_fast.push_back(std::log(fast_times[fast_times.size() / 2]));
    log_slow.push_back(std::log(slow_times[slow_times.size() / 2]));
  }
  const double slope_fast = least_squares_slope(log_n, log_fast);
  const double slope_slow = least_squares_slope(log_n, log_slow);
  detail = "project slope " + fmt(slope_fast) + ", oracle slope " + fmt(slope_slow);
  return slope_fast <= 1.15 && slope_slow > slope_fast;
}

// --------------------------------------------------------------------------
// 3. Analytic dual gradient vs central finite differences
// --------------------------------------------------------------------------
bool criterion_gradient_correctness(std::string& detail) {
  std::mt19937_64 rng(303);
  double worst = 0.0;
  for (int point = 0; point < 100; ++point) {
    const RankingDataset data = oracles::random_dataset(rng, 20, 20, 10);
    auto [alpha, beta] =
        oracles::random_feasible_point(rng, data.num_positives(), data.num_negatives());
    const double lambda = std::vector<double>{0.1, 1.0, 10.0}[point % 3];
    auto [ga, gb] = dual_gradient(alpha, beta, data, lambda, kQuad);
    auto [fa, fb] = oracles::fd_dual_gradient(alpha, beta, data, lambda, kQuad);

    double scale = 1.0, diff = 0.0;
    for (std::size_t i = 0; i < ga.size(); ++i) {
      scale = std::max(scale, std::abs(ga[i]));
      diff = std::max(diff, std::abs(ga[i] - fa[i]));
    }
    for (std::size_t j = 0; j < gb.size(); ++j) {
      scale = std::max(scale, std::abs(gb[j]));
      diff = std::max(diff, std::abs(gb[j] - fb[j]));
    }
    worst = std::max(worst, diff / scale);
  }
  detail = "max relative error " + fmt(worst);
  return worst <= 1e-5;
}

// --------------------------------------------------------------------------
// 4. Strong duality after optimization; weak duality at every iterate
// --------------------------------------------------------------------------
bool criterion_strong_duality(std::string& detail) {
  std::mt19937_64 rng(404);
  const std::vector<double> lambdas{0.1, 1.0, 10.0};
  double worst_rel_gap = 0.0, worst_weak = 0.0;
  for (int instance = 0; instance < 20; ++instance) {
    const RankingDataset data = oracles::random_dataset(rng, 30, 30, 10);
    SolverConfig config;
    config.lambda = lambdas[instance % lambdas.size()];
    config.epsilon = 1e-8;
    config.max_iterations = 300000;

    double min_gap = 1e300;
    const SolveOutcome outcome =
        solve(data, config, [&](std::int64_t, const DualState& state) {
          min_gap = std::min(min_gap, duality_gap(state, data, config.lambda, kQuad));
        });
    worst_weak = std::min(worst_weak, min_gap);

    const double primal =
        primal_objective(outcome.model.weights, data, config.lambda, kQuad);
    const double rel_gap = outcome.final_gap_estimate / std::max(1.0, std::abs(primal));
    worst_rel_gap = std::max(worst_rel_gap, rel_gap);
  }
  detail = "max relative gap " + fmt(worst_rel_gap) + ", min iterate gap " + fmt(worst_weak);
  return worst_rel_gap <= 1e-3 && worst_weak >= -1e-8;
}

// --------------------------------------------------------------------------
// 5. Iterations-to-epsilon growth
// --------------------------------------------------------------------------
bool criterion_convergence_rate(std::string& detail) {
  const RankingDataset data = make_overlapping(25, 25, 5, 1.0, 505);
  const std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5};
  std::vector<double> log_inv_eps, log_iters;
  for (double e : eps) {
    SolverConfig config;
    config.epsilon = e;
    config.max_iterations = 500000;
    const SolveOutcome outcome = solve(data, config);
    if (!outcome.converged) {
      detail = "did not converge at epsilon " + fmt(e);
      return false;
    }
    log_inv_eps.push_back(std::log(1.0 / e));
    log_iters.push_back(std::log(static_cast<double>(outcome.iterations)));
  }
  const double slope = least_squares_slope(log_inv_eps, log_iters);
  detail = "log-log slope " + fmt(slope);
  return slope <= 0.65;
}

// --------------------------------------------------------------------------
// 6. Per-iteration cost linear in (m+n) and in d
// --------------------------------------------------------------------------
bool criterion_iteration_linearity(std::string& detail) {
  auto median_iteration_seconds = [](std::size_t m, std::size_t n, int d) {
    const RankingDataset data = make_overlapping(m, n, d, 1.0, 606);
    SolverConfig config;
    config.epsilon = 1e-300;
    config.max_iterations = 40;
    std::vector<double> times;
    for (int rep = 0; rep < 5; ++rep) {
      const double t0 = now_seconds();
      const SolveOutcome outcome = solve(data, config);
      const double t1 = now_seconds();
      times.push_back((t1 - t0) / static_cast<double>(outcome.iterations));
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
  };

  const double base = median_iteration_seconds(1000, 1000, 25);
  const double double_mn = median_iteration_seconds(2000, 2000, 25);
  const double double_d = median_iteration_seconds(1000, 1000, 50);
  const double ratio_mn = double_mn / base;
  const double ratio_d = double_d / base;
  detail = "x2 instances ratio " + fmt(ratio_mn) + ", x2 dims ratio " + fmt(ratio_d);
  return ratio_mn <= 2.5 && ratio_d <= 2.5;
}

// --------------------------------------------------------------------------
// 7. Mean-vs-max inequality and push-loss equivalences
// --------------------------------------------------------------------------
bool criterion_loss_inequalities(std::string& detail) {
  std::mt19937_64 rng(707);
  double worst_equiv = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const ScoredDataset s = oracles::random_scores(rng, 30, 30);
    const oracles::PairCounts c = oracles::pair_counts(s);
    const long long m = static_cast<long long>(s.positive_scores.size());
    const long long n = static_cast<long long>(s.negative_scores.size());

    // ranking_loss <= top_loss <= min(n * ranking_loss, 1), exact in counts
    if (c.violations > c.worst_neg * n || c.worst_neg > c.violations || c.worst_neg > m) {
      detail = "inequality violated at trial " + std::to_string(trial);
      return false;
    }
    if (!(ranking_loss(s) <= top_loss(s) && top_loss(s) <= 1.0)) {
      detail = "double-precision inequality violated at trial " + std::to_string(trial);
      return false;
    }

    worst_equiv = std::max(
        worst_equiv, std::abs(infinite_push_loss(s, kQuad) - surrogate_top_loss(s, kQuad)));
    double indicator_push = 0.0;
    for (double nscore : s.negative_scores) {
      double cnt = 0.0;
      for (double p : s.positive_scores) cnt += (p <= nscore) ? 1.0 : 0.0;
      indicator_push = std::max(indicator_push, cnt / static_cast<double>(m));
    }
    worst_equiv = std::max(worst_equiv, std::abs(indicator_push - top_loss(s)));
  }
  detail = "max equivalence error " + fmt(worst_equiv);
  return worst_equiv <= 1e-12;
}

// --------------------------------------------------------------------------
// 8. Desk-scale behavior on synthetic data
// --------------------------------------------------------------------------
bool criterion_desk_scale_behavior(std::string& detail) {
  const double start = now_seconds();

  // separable case: margin 0.5, lambda 1, epsilon 1e-4
  const RankingDataset train_raw = make_separable(200, 200, 20, 0.5, 808);
  const RankingDataset test_raw = make_separable(200, 200, 20, 0.5, 809);
  auto [train, factor] = scale_to_unit_ball(train_raw);
  SolverConfig config;
  config.lambda = 1.0;
  config.epsilon = 1e-4;
  SolveOutcome outcome = solve(train, config);
  outcome.model.scale_factor = factor;

  const double train_pat = pos_at_top(score_dataset(outcome.model, train_raw));
  const double test_pat = pos_at_top(score_dataset(outcome.model, test_raw));

  // overlapping case: compare against the class-mean-difference direction
  const RankingDataset gauss = make_overlapping(300, 300, 10, 1.5, 810);
  auto [gauss_scaled, gauss_factor] = scale_to_unit_ball(gauss);
  SolveOutcome gauss_outcome = solve(gauss_scaled, config);
  gauss_outcome.model.scale_factor = gauss_factor;
  const double toppush_pat = pos_at_top(score_dataset(gauss_outcome.model, gauss));

  Model baseline;
  baseline.weights.assign(static_cast<std::size_t>(gauss.dim), 0.0);
  for (const FeatureVector& row : gauss.positives.rows)
    for (const Feature& f : row.entries)
      baseline.weights[f.index] += f.value / static_cast<double>(gauss.num_positives());
  for (const FeatureVector& row : gauss.negatives.rows)
    for (const Feature& f : row.entries)
      baseline.weights[f.index] -= f.value / static_cast<double>(gauss.num_negatives());
  const double baseline_pat = pos_at_top(score_dataset(baseline, gauss));

  const double elapsed = now_seconds() - start;
  detail = "train pos@top " + fmt(train_pat) + ", test pos@top " + fmt(test_pat) +
           ", toppush " + fmt(toppush_pat) + " vs mean-direction " + fmt(baseline_pat) + ", " +
           fmt(elapsed) + " s";
  return train_pat == 1.0 && test_pat >= 0.95 && toppush_pat >= baseline_pat && elapsed < 10.0;
}

// --------------------------------------------------------------------------
// 9. Metric implementations against brute-force oracles and worked examples
// --------------------------------------------------------------------------
bool criterion_metric_oracles(std::string& detail) {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 3000; ++trial) {
    const ScoredDataset s = oracles::random_scores(rng, 30, 30);
    if (ranking_loss(s) != oracles::brute_ranking_loss(s)) {
      detail = "ranking_loss mismatch at trial " + std::to_string(trial);
      return false;
    }
    if (auc(s) != oracles::brute_auc(s)) {
      detail = "auc mismatch at trial " + std::to_string(trial);
      return false;
    }
  }

  const ScoredDataset worked{{3.0, 1.0}, {2.0, 0.0}};
  const double ndcg_expected = (1.0 / std::log2(2.0) + 1.0 / std::log2(4.0)) /
                               (1.0 / std::log2(2.0) + 1.0 / std::log2(3.0));
  const bool ok = auc(worked) == 0.75 && pos_at_top(worked) == 0.5 &&
                  std::abs(average_precision(worked) - 5.0 / 6.0) <= 1e-4 &&
                  std::abs(ndcg(worked) - ndcg_expected) <= 1e-4;
  detail = "worked examples: auc " + fmt(auc(worked)) + ", pos@top " + fmt(pos_at_top(worked)) +
           ", ap " + fmt(average_precision(worked)) + ", ndcg " + fmt(ndcg(worked)) +
           " (formula value " + fmt(ndcg_expected) + ")";
  return ok;
}

// --------------------------------------------------------------------------
// 10. Determinism of training and projection
// --------------------------------------------------------------------------
bool criterion_determinism(std::string& detail) {
  const fs::path dir =
      fs::temp_directory_path() / ("toppush-acceptance-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  const std::string data_path = (dir / "train.libsvm").string();
  write_libsvm(make_separable(40, 40, 6, 0.5, 11), data_path);

  TrainOptions opt;
  opt.data_path = data_path;
  opt.seed = 3;
  opt.out_path = (dir / "a.model").string();
  std::ostringstream out1, out2, err;
  bool ok = cmd_train(opt, out1, err) == kExitOk;
  opt.out_path = (dir / "b.model").string();
  ok = ok && cmd_train(opt, out2, err) == kExitOk;

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const bool models_equal = slurp(dir / "a.model") == slurp(dir / "b.model");
  const bool summaries_equal = out1.str() == out2.str();

  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> entry(-5.0, 5.0);
  bool projection_invariant = true;
  for (int trial = 0; trial < 500; ++trial) {
    ProjectionInput in;
    in.alpha0.resize(1 + rng() % 40);
    in.beta0.resize(1 + rng() % 40);
    for (double& v : in.alpha0) v = entry(rng);
    for (double& v : in.beta0) v = entry(rng);
    const ProjectionResult r0 = project(in, 0);
    for (std::uint64_t seed : {1ull, 2ull}) {
      const ProjectionResult r = project(in, seed);
      for (std::size_t i = 0; i < r.alpha.size(); ++i)
        if (std::abs(r.alpha[i] - r0.alpha[i]) > 1e-12) projection_invariant = false;
      for (std::size_t j = 0; j < r.beta.size(); ++j)
        if (std::abs(r.beta[j] - r0.beta[j]) > 1e-12) projection_invariant = false;
    }
  }

  std::error_code ec;
  fs::remove_all(dir, ec);
  detail = std::string("model files byte-identical: ") + (models_equal ? "yes" : "NO") +
           ", summaries identical: " + (summaries_equal ? "yes" : "NO") +
           ", projection seed-invariant: " + (projection_invariant ? "yes" : "NO");
  return ok && models_equal && summaries_equal && projection_invariant;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "projection exactness vs sort oracle", criterion_projection_exactness},
      {2, "projection runtime scaling", criterion_projection_scaling},
      {3, "dual gradient vs finite differences", criterion_gradient_correctness},
      {4, "strong duality after solve, weak duality at iterates", criterion_strong_duality},
      {5, "iterations-to-epsilon growth", criterion_convergence_rate},
      {6, "per-iteration cost linearity", criterion_iteration_linearity},
      {7, "mean-vs-max inequality and loss equivalences", criterion_loss_inequalities},
      {8, "desk-scale training behavior", criterion_desk_scale_behavior},
      {9, "metric oracles and worked examples", criterion_metric_oracles},
      {10, "training and projection determinism", criterion_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": " << c.name;
    if (!detail.empty()) std::cout << " — " << detail;
    std::cout << std::endl;
  }
  if (failures == 0)
    std::cout << "all " << criteria.size() << " criteria passed" << std::endl;
  else
    std::cout << failures << " criteria failed" << std::endl;
  return failures;
}
