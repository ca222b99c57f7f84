#ifndef TOPPUSH_CLI_HPP
#define TOPPUSH_CLI_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "toppush/data_io.hpp"
#include "toppush/metrics.hpp"
#include "toppush/solver.hpp"
#include "toppush/synthetic.hpp"
#include "toppush/types.hpp"

// Subcommand implementations behind the `toppush` binary. Kept in the library
// so they can be exercised directly by tests. Exit codes: 0 success, 1 usage,
// 2 data error, 3 numeric failure.

namespace toppush {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

// TOPPUSH_LOG=quiet|info|debug
inline LogLevel log_level_from_env() {
  const char* env = std::getenv("TOPPUSH_LOG");
  if (!env) return LogLevel::Info;
  const std::string v(env);
  if (v == "quiet") return LogLevel::Quiet;
  if (v == "debug") return LogLevel::Debug;
  return LogLevel::Info;
}

struct TrainOptions {
  std::string data_path;
  std::string out_path;
  double lambda = 1.0;
  double epsilon = 1e-4;
  std::int64_t max_iterations = 100000;
  std::uint64_t seed = 0;
  bool scale = true;
  bool trace = false;
};

struct PredictOptions {
  std::string model_path;
  std::string data_path;
  std::string out_path;  // empty: stdout
};

struct EvaluateOptions {
  std::string model_path;
  std::string data_path;
  std::string out_path;  // optional copy of the report
};

struct CvOptions {
  std::string data_path;
  std::vector<double> lambda_grid;  // empty: {1e-3, ..., 1e3}
  int folds = 5;
  double epsilon = 1e-4;
  std::int64_t max_iterations = 100000;
  std::uint64_t seed = 0;
  bool scale = true;
  std::string metric = "pos_at_top";  // pos_at_top | average_precision | ndcg | auc
};

struct BenchOptions {
  std::vector<std::size_t> sizes;  // total instance counts (m + n each)
  int dim = 20;
  double lambda = 1.0;
  double epsilon = 1e-4;
  std::int64_t max_iterations = 1000;
  std::uint64_t seed = 0;
  int repeats = 3;
};

namespace detail {

template <typename Fn>
int run_guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainViolation& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NonFiniteValue& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

inline std::vector<double> default_lambda_grid() {
  return {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
}

inline double metric_by_name(const std::string& name, const ScoredDataset& s) {
  if (name == "pos_at_top") return pos_at_top(s);
  if (name == "average_precision") return average_precision(s);
  if (name == "ndcg") return ndcg(s);
  if (name == "auc") return auc(s);
  throw InvalidInput("unknown metric '" + name + "'");
}

}  // namespace detail

inline int cmd_train(const TrainOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&] {
    if (!(opt.lambda > 0.0)) throw InvalidInput("--lambda must be positive");
    if (!(opt.epsilon > 0.0)) throw InvalidInput("--epsilon must be positive");
    if (opt.out_path.empty()) throw InvalidInput("--out is required");
    const LogLevel log = log_level_from_env();

    RankingDataset data = read_libsvm(opt.data_path);
    double scale_factor = 1.0;
    if (opt.scale) {
      auto [scaled, factor] = scale_to_unit_ball(data);
      data = std::move(scaled);
      scale_factor = factor;
    }
    if (log >= LogLevel::Info)
      err << "loaded " << data.num_positives() << " positive / " << data.num_negatives()
          << " negative instances, d=" << data.dim << '\n';

    SolverConfig config;
    config.lambda = opt.lambda;
    config.epsilon = opt.epsilon;
    config.max_iterations = opt.max_iterations;
    config.rng_seed = opt.seed;
    config.record_trace = opt.trace;
    SolveOutcome outcome = solve(data, config);
    outcome.model.scale_factor = scale_factor;

    if (log == LogLevel::Debug && outcome.trace) {
      for (const IterationRecord& rec : outcome.trace->records)
        err << "iter " << rec.k << " g " << rec.g_value << " L " << rec.smoothness
            << " doublings " << rec.line_search_doublings << " residual "
            << rec.feasibility_residual << '\n';
    }

    save_model(outcome.model, opt.out_path);
    const double dual = dual_objective(outcome.dual.alpha, outcome.dual.beta, data,
                                       config.lambda, config.loss_kind);
    out << "iterations " << outcome.iterations << '\n';
    out << "converged " << (outcome.converged ? 1 : 0) << '\n';
    out << "objective "
        << detail::format_double(
               primal_objective(outcome.model.weights, data, config.lambda, config.loss_kind))
        << '\n';
    out << "dual_objective " << detail::format_double(dual) << '\n';
    out << "duality_gap " << detail::format_double(outcome.final_gap_estimate) << '\n';
    out << "model " << opt.out_path << '\n';
    if (!outcome.converged && log >= LogLevel::Info)
      err << "warning: stopped at the iteration cap before reaching epsilon\n";
    return kExitOk;
  });
}

inline int cmd_predict(const PredictOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&] {
    const Model model = load_model(opt.model_path);
    const std::vector<LabeledInstance> instances = read_libsvm_instances(opt.data_path);
    std::ofstream file;
    if (!opt.out_path.empty()) {
      file.open(opt.out_path);
      if (!file) throw Error("cannot open '" + opt.out_path + "' for writing");
    }
    std::ostream& sink = opt.out_path.empty() ? out : file;
    for (const LabeledInstance& inst : instances)
      sink << detail::format_double(predict_score(model, inst.x)) << '\n';
    return kExitOk;
  });
}

inline int cmd_evaluate(const EvaluateOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&] {
    const Model model = load_model(opt.model_path);
    const RankingDataset data = read_libsvm(opt.data_path);
    const ScoredDataset scores = score_dataset(model, data);
    const MetricsReport report = compute_metrics(scores, model.loss_kind);
    write_metrics_report(report, out);
    if (!opt.out_path.empty()) {
      std::ofstream file(opt.out_path);
      if (!file) throw Error("cannot open '" + opt.out_path + "' for writing");
      write_metrics_report(report, file);
    }
    return kExitOk;
  });
}

namespace detail {

// Balanced per-class fold assignment after a seeded shuffle.
inline std::vector<int> fold_assignment(std::size_t count, int folds, std::mt19937_64& rng) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold(count);
  for (std::size_t p = 0; p < count; ++p) fold[order[p]] = static_cast<int>(p % folds);
  return fold;
}

}  // namespace detail

inline int cmd_cv(const CvOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&] {
    if (opt.folds < 2) throw InvalidInput("--folds must be at least 2");
    std::vector<double> grid =
        opt.lambda_grid.empty() ? detail::default_lambda_grid() : opt.lambda_grid;
    std::sort(grid.begin(), grid.end());
    for (double l : grid)
      if (!(l > 0.0)) throw InvalidInput("lambda grid values must be positive");

    RankingDataset data = read_libsvm(opt.data_path);
    if (opt.scale) data = scale_to_unit_ball(data).first;

    std::mt19937_64 rng(opt.seed);
    const std::vector<int> pos_fold = detail::fold_assignment(data.num_positives(), opt.folds, rng);
    const std::vector<int> neg_fold = detail::fold_assignment(data.num_negatives(), opt.folds, rng);

    struct Fold {
      RankingDataset train;
      RankingDataset validation;
    };
    std::vector<Fold> folds(static_cast<std::size_t>(opt.folds));
    for (Fold& f : folds) {
      f.train.dim = f.validation.dim = data.dim;
      f.train.positives.dim = f.train.negatives.dim = data.dim;
      f.validation.positives.dim = f.validation.negatives.dim = data.dim;
    }
    for (std::size_t i = 0; i < data.num_positives(); ++i)
      for (int f = 0; f < opt.folds; ++f)
        (f == pos_fold[i] ? folds[f].validation : folds[f].train)
            .positives.rows.push_back(data.positives.rows[i]);
    for (std::size_t j = 0; j < data.num_negatives(); ++j)
      for (int f = 0; f < opt.folds; ++f)
        (f == neg_fold[j] ? folds[f].validation : folds[f].train)
            .negatives.rows.push_back(data.negatives.rows[j]);

    for (int f = 0; f < opt.folds; ++f) {
      const Fold& fold = folds[static_cast<std::size_t>(f)];
      if (fold.train.num_positives() == 0 || fold.validation.num_positives() == 0)
        throw EmptyClass("fold " + std::to_string(f) + " has no positive instances");
      if (fold.train.num_negatives() == 0 || fold.validation.num_negatives() == 0)
        throw EmptyClass("fold " + std::to_string(f) + " has no negative instances");
    }

    double best_lambda = grid.front();
    double best_mean = -1.0;
    for (double lambda : grid) {
      double sum = 0.0;
      for (int f = 0; f < opt.folds; ++f) {
        const Fold& fold = folds[static_cast<std::size_t>(f)];
        SolverConfig config;
        config.lambda = lambda;
        config.epsilon = opt.epsilon;
        config.max_iterations = opt.max_iterations;
        config.rng_seed = opt.seed;
        const SolveOutcome outcome = solve(fold.train, config);
        const double value =
            detail::metric_by_name(opt.metric, score_dataset(outcome.model, fold.validation));
        sum += value;
        out << "lambda " << detail::format_double(lambda) << " fold " << f << ' ' << opt.metric
            << ' ' << detail::format_double(value) << '\n';
      }
      const double mean = sum / static_cast<double>(opt.folds);
      out << "lambda " << detail::format_double(lambda) << " mean_" << opt.metric << ' '
          << detail::format_double(mean) << '\n';
      if (mean > best_mean) {  // ties keep the smaller lambda (grid is sorted)
        best_mean = mean;
        best_lambda = lambda;
      }
    }
    out << "best_lambda " << detail::format_double(best_lambda) << '\n';
    if (grid.size() > 1 && (best_lambda == grid.front() || best_lambda == grid.back()))
      err << "warning: best lambda " << detail::format_double(best_lambda)
          << " sits on the grid boundary; consider extending the grid\n";
    return kExitOk;
  });
}

inline int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::run_guarded(err, [&] {
    const std::vector<std::size_t> sizes =
        opt.sizes.empty() ? std::vector<std::size_t>{1000, 2000, 4000, 8000} : opt.sizes;
    if (opt.repeats < 1) throw InvalidInput("--repeats must be at least 1");

    std::vector<double> log_size, log_time;
    for (std::size_t total : sizes) {
      const std::size_t m = std::max<std::size_t>(1, total / 2);
      const std::size_t n = std::max<std::size_t>(1, total - m);
      const RankingDataset data = make_separable(m, n, opt.dim, 0.5, opt.seed);

      std::vector<double> totals, per_iter;
      std::int64_t iterations = 0;
      for (int r = 0; r < opt.repeats; ++r) {
        SolverConfig config;
        config.lambda = opt.lambda;
        config.epsilon = opt.epsilon;
        config.max_iterations = opt.max_iterations;
        config.rng_seed = opt.seed;
        const auto start = std::chrono::steady_clock::now();
        const SolveOutcome outcome = solve(data, config);
        const auto stop = std::chrono::steady_clock::now();
        const double seconds = std::chrono::duration<double>(stop - start).count();
        totals.push_back(seconds);
        per_iter.push_back(seconds / static_cast<double>(outcome.iterations));
        iterations = outcome.iterations;
      }
      std::sort(totals.begin(), totals.end());
      std::sort(per_iter.begin(), per_iter.end());
      const double median_total = totals[totals.size() / 2];
      const double median_iter = per_iter[per_iter.size() / 2];
      out << "size " << (m + n) << " d " << opt.dim << " iterations " << iterations
          << " median_iteration_seconds " << detail::format_double(median_iter)
          << " total_seconds " << detail::format_double(median_total) << '\n';
      log_size.push_back(std::log(static_cast<double>(m + n)));
      log_time.push_back(std::log(median_total));
    }

    if (sizes.size() >= 2) {
      // Least-squares slope of log(time) against log(size).
      const double k = static_cast<double>(log_size.size());
      const double mx = std::accumulate(log_size.begin(), log_size.end(), 0.0) / k;
      const double my = std::accumulate(log_time.begin(), log_time.end(), 0.0) / k;
      double sxy = 0.0, sxx = 0.0;
      for (std::size_t i = 0; i < log_size.size(); ++i) {
        sxy += (log_size[i] - mx) * (log_time[i] - my);
        sxx += (log_size[i] - mx) * (log_size[i] - mx);
      }
      out << "slope " << detail::format_double(sxy / sxx) << '\n';
    }
    return kExitOk;
  });
}

}  // namespace toppush

#endif  // TOPPUSH_CLI_HPP
