#ifndef TOPPUSH_LOSS_HPP
#define TOPPUSH_LOSS_HPP

#include <cmath>

#include "toppush/errors.hpp"
#include "toppush/types.hpp"

namespace toppush {

namespace detail {

// Unchecked kernels. The solver evaluates these at Nesterov auxiliary points,
// which may leave the nonnegative orthant; the formulas extend smoothly.
inline double loss_value_raw(double z) {
  double t = 1.0 + z;
  return t > 0.0 ? t * t : 0.0;
}

inline double conjugate_value_raw(double a) { return -a + 0.25 * a * a; }

inline double conjugate_derivative_raw(double a) { return -1.0 + 0.5 * a; }

}  // namespace detail

// Surrogate loss max(0, 1+z)^2: convex, non-decreasing, differentiable.
inline double loss_value(LossKind kind, double z) {
  (void)kind;  // TruncatedQuadratic is the only kind in v1
  if (!std::isfinite(z)) throw NonFiniteValue("loss argument is not finite");
  return detail::loss_value_raw(z);
}

// Convex conjugate of the truncated quadratic: -a + a^2/4 on a >= 0.
// Negative arguments are a bug upstream (a broken projection), not a value
// to repair, so they throw instead of clamping.
inline double conjugate_value(LossKind kind, double a) {
  (void)kind;
  if (!std::isfinite(a)) throw NonFiniteValue("conjugate argument is not finite");
  if (a < 0.0) throw DomainViolation("conjugate argument must be nonnegative");
  return detail::conjugate_value_raw(a);
}

inline double conjugate_derivative(LossKind kind, double a) {
  (void)kind;
  if (!std::isfinite(a)) throw NonFiniteValue("conjugate argument is not finite");
  if (a < 0.0) throw DomainViolation("conjugate argument must be nonnegative");
  return detail::conjugate_derivative_raw(a);
}

}  // namespace toppush

#endif  // TOPPUSH_LOSS_HPP
