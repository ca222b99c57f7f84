#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "toppush/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"toppush: bipartite ranking optimized for accuracy at the top"};
  app.require_subcommand(1);

  toppush::TrainOptions train;
  CLI::App* train_cmd = app.add_subcommand("train", "train a ranking model");
  train_cmd->add_option("--data", train.data_path, "training data (libsvm format)")->required();
  train_cmd->add_option("--out", train.out_path, "output model file")->required();
  train_cmd->add_option("--lambda", train.lambda, "regularization strength")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--epsilon", train.epsilon, "stopping precision")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--max-iterations", train.max_iterations, "iteration cap")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", train.seed, "rng seed");
  train_cmd->add_flag("--scale,!--no-scale", train.scale, "rescale rows into the unit ball");
  train_cmd->add_flag("--trace", train.trace, "record per-iteration diagnostics");

  toppush::PredictOptions predict;
  CLI::App* predict_cmd = app.add_subcommand("predict", "score instances with a model");
  predict_cmd->add_option("--model", predict.model_path, "model file")->required();
  predict_cmd->add_option("--data", predict.data_path, "instances (libsvm format)")->required();
  predict_cmd->add_option("--out", predict.out_path, "score output file (default stdout)");

  toppush::EvaluateOptions evaluate;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "compute ranking metrics");
  evaluate_cmd->add_option("--model", evaluate.model_path, "model file")->required();
  evaluate_cmd->add_option("--data", evaluate.data_path, "test data (libsvm format)")->required();
  evaluate_cmd->add_option("--out", evaluate.out_path, "also write the report here");

  toppush::CvOptions cv;
  CLI::App* cv_cmd = app.add_subcommand("cv", "cross-validate the lambda grid");
  cv_cmd->add_option("--data", cv.data_path, "training data (libsvm format)")->required();
  cv_cmd->add_option("--grid", cv.lambda_grid, "lambda grid (default 1e-3 ... 1e3)");
  cv_cmd->add_option("--folds", cv.folds, "number of folds")->check(CLI::Range(2, 1000));
  cv_cmd->add_option("--epsilon", cv.epsilon, "stopping precision")->check(CLI::PositiveNumber);
  cv_cmd->add_option("--max-iterations", cv.max_iterations, "iteration cap")
      ->check(CLI::PositiveNumber);
  cv_cmd->add_option("--seed", cv.seed, "rng seed");
  cv_cmd->add_flag("--scale,!--no-scale", cv.scale, "rescale rows into the unit ball");
  cv_cmd->add_option("--metric", cv.metric, "selection metric")
      ->check(CLI::IsMember({"pos_at_top", "average_precision", "ndcg", "auc"}));

  toppush::BenchOptions bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "time training on synthetic data");
  bench_cmd->add_option("--sizes", bench.sizes, "total instance counts");
  bench_cmd->add_option("--d", bench.dim, "feature dimension")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--lambda", bench.lambda, "regularization strength")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--epsilon", bench.epsilon, "stopping precision")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--max-iterations", bench.max_iterations, "iteration cap")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", bench.seed, "rng seed");
  bench_cmd->add_option("--repeats", bench.repeats, "timing repeats per size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? toppush::kExitOk : toppush::kExitUsage;
  }

  if (train_cmd->parsed()) return toppush::cmd_train(train, std::cout, std::cerr);
  if (predict_cmd->parsed()) return toppush::cmd_predict(predict, std::cout, std::cerr);
  if (evaluate_cmd->parsed()) return toppush::cmd_evaluate(evaluate, std::cout, std::cerr);
  if (cv_cmd->parsed()) return toppush::cmd_cv(cv, std::cout, std::cerr);
  if (bench_cmd->parsed()) return toppush::cmd_bench(bench, std::cout, std::cerr);
  return toppush::kExitUsage;
}
