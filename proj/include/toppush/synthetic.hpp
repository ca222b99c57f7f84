#ifndef TOPPUSH_SYNTHETIC_HPP
#define TOPPUSH_SYNTHETIC_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "toppush/types.hpp"

// Seeded synthetic generators used by the benchmark subcommand and the test
// suite. Class signal lives on coordinate 0; remaining coordinates carry
// Gaussian noise.

namespace toppush {

namespace detail {

inline FeatureVector dense_row(const std::vector<double>& values) {
  FeatureVector row;
  row.dim = static_cast<int>(values.size());
  row.entries.reserve(values.size());
  for (int j = 0; j < row.dim; ++j) row.entries.push_back({j, values[j]});
  return row;
}

}  // namespace detail

// Linearly separable classes: positives have x0 >= margin/2, negatives
// x0 <= -margin/2, with noise_sigma Gaussian noise on the other coordinates.
inline RankingDataset make_separable(std::size_t m, std::size_t n, int d, double margin,
                                     std::uint64_t seed, double noise_sigma = 0.1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gap(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, noise_sigma);

  auto make_row = [&](bool positive) {
    std::vector<double> v(static_cast<std::size_t>(d));
    const double offset = 0.5 * margin + gap(rng);
    v[0] = positive ? offset : -offset;
    for (int j = 1; j < d; ++j) v[static_cast<std::size_t>(j)] = noise(rng);
    return detail::dense_row(v);
  };

  RankingDataset data;
  data.dim = d;
  data.positives.dim = data.negatives.dim = d;
  for (std::size_t i = 0; i < m; ++i) data.positives.rows.push_back(make_row(true));
  for (std::size_t j = 0; j < n; ++j) data.negatives.rows.push_back(make_row(false));
  return data;
}

// Overlapping classes: unit-variance Gaussians whose means sit `separation`
// apart along coordinate 0.
inline RankingDataset make_overlapping(std::size_t m, std::size_t n, int d, double separation,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  auto make_row = [&](bool positive) {
    std::vector<double> v(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) v[static_cast<std::size_t>(j)] = noise(rng);
    v[0] += positive ? 0.5 * separation : -0.5 * separation;
    return detail::dense_row(v);
  };

  RankingDataset data;
  data.dim = d;
  data.positives.dim = data.negatives.dim = d;
  for (std::size_t i = 0; i < m; ++i) data.positives.rows.push_back(make_row(true));
  for (std::size_t j = 0; j < n; ++j) data.negatives.rows.push_back(make_row(false));
  return data;
}

}  // namespace toppush

#endif  // TOPPUSH_SYNTHETIC_HPP
