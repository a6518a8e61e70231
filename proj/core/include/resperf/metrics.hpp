#pragma once

#include <span>
#include <stdexcept>

namespace resperf {

struct Metrics {
  double mape = 0.0;  // percent
  double rmse = 0.0;  // ms
  double mae = 0.0;   // ms
  double r2 = 0.0;
};

/// 100 * mean(|p - a| / a). Throws std::invalid_argument on a non-positive actual.
double mape(std::span<const double> predicted, std::span<const double> actual);
double rmse(std::span<const double> predicted, std::span<const double> actual);
double mae(std::span<const double> predicted, std::span<const double> actual);
/// 1 - SS_res / SS_tot. Throws std::invalid_argument when the actuals are constant.
double r_squared(std::span<const double> predicted, std::span<const double> actual);

/// All four metrics. Lengths must match and be non-zero.
Metrics evaluate(std::span<const double> predicted, std::span<const double> actual);

}  // namespace resperf
