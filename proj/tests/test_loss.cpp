#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "toppush/loss.hpp"

using namespace toppush;

namespace {
constexpr LossKind kQuad = LossKind::TruncatedQuadratic;
}

TEST_CASE("truncated quadratic loss values") {
  CHECK(loss_value(kQuad, -1.0) == 0.0);
  CHECK(loss_value(kQuad, 0.0) == 1.0);
  CHECK(loss_value(kQuad, 1.0) == 4.0);
  CHECK(loss_value(kQuad, -5.0) == 0.0);
}

TEST_CASE("conjugate values") {
  CHECK(conjugate_value(kQuad, 0.0) == 0.0);
  CHECK(conjugate_value(kQuad, 2.0) == -1.0);
  CHECK(conjugate_value(kQuad, 4.0) == 0.0);
}

TEST_CASE("conjugate derivative") {
  CHECK(conjugate_derivative(kQuad, 0.0) == -1.0);
  CHECK(conjugate_derivative(kQuad, 2.0) == 0.0);

  // finite-difference oracle at a = 6
  const double h = 1e-6;
  const double fd = (conjugate_value(kQuad, 6.0 + h) - conjugate_value(kQuad, 6.0 - h)) / (2 * h);
  CHECK(std::abs(fd - 2.0) < 1e-4);
  CHECK(conjugate_derivative(kQuad, 6.0) == Catch::Approx(fd).margin(1e-4));
}

TEST_CASE("domain and finiteness errors") {
  CHECK_THROWS_AS(conjugate_value(kQuad, -0.5), DomainViolation);
  CHECK_THROWS_AS(conjugate_derivative(kQuad, -1e-12), DomainViolation);
  CHECK_THROWS_AS(loss_value(kQuad, std::numeric_limits<double>::quiet_NaN()), NonFiniteValue);
  CHECK_THROWS_AS(loss_value(kQuad, std::numeric_limits<double>::infinity()), NonFiniteValue);
}

TEST_CASE("biconjugacy on a grid") {
  // sup_a (a z - conj(a)) over a in [0, 20] recovers the loss on z in [-3, 3].
  for (double z = -3.0; z <= 3.0 + 1e-12; z += 0.1) {
    double best = -std::numeric_limits<double>::infinity();
    for (double a = 0.0; a <= 20.0 + 1e-12; a += 1e-3)
      best = std::max(best, a * z - conjugate_value(kQuad, a));
    CHECK(std::abs(best - loss_value(kQuad, z)) < 1e-3);
  }
}

TEST_CASE("conjugate derivative matches central differences") {
  const double h = 1e-6;
  for (double a = 0.1; a <= 20.0; a += 0.37) {
    const double fd = (conjugate_value(kQuad, a + h) - conjugate_value(kQuad, a - h)) / (2 * h);
    CHECK(std::abs(fd - conjugate_derivative(kQuad, a)) < 1e-4);
  }
}

TEST_CASE("loss is non-decreasing") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> z(-10.0, 10.0);
  for (int trial = 0; trial < 1000; ++trial) {
    double z1 = z(rng), z2 = z(rng);
    if (z1 > z2) std::swap(z1, z2);
    CHECK(loss_value(kQuad, z1) <= loss_value(kQuad, z2));
  }
}
