#ifndef TOPPUSH_TOPPUSH_HPP
#define TOPPUSH_TOPPUSH_HPP

#include "toppush/data_io.hpp"
#include "toppush/errors.hpp"
#include "toppush/loss.hpp"
#include "toppush/metrics.hpp"
#include "toppush/projection.hpp"
#include "toppush/solver.hpp"
#include "toppush/synthetic.hpp"
#include "toppush/types.hpp"

#endif  // TOPPUSH_TOPPUSH_HPP
