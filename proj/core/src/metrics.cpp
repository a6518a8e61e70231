#include "resperf/metrics.hpp"

#include <cmath>
#include <string>

namespace resperf {

namespace {

void check_lengths(std::span<const double> p, std::span<const double> a) {
  if (p.size() != a.size()) {
    throw std::invalid_argument("length mismatch: " + std::to_string(p.size()) + " predictions, " +
                                std::to_string(a.size()) + " actuals");
  }
  if (p.empty()) throw std::invalid_argument("metrics need at least one value");
}

}  // namespace

double mape(std::span<const double> predicted, std::span<const double> actual) {
  check_lengths(predicted, actual);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (!(actual[i] > 0.0)) {
      throw std::invalid_argument("MAPE needs positive actuals (row " + std::to_string(i) + ")");
    }
    sum += std::abs(predicted[i] - actual[i]) / actual[i];
  }
  return 100.0 * sum / static_cast<double>(actual.size());
}

double rmse(std::span<const double> predicted, std::span<const double> actual) {
  check_lengths(predicted, actual);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double d = predicted[i] - actual[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(actual.size()));
}

double mae(std::span<const double> predicted, std::span<const double> actual) {
  check_lengths(predicted, actual);
  double sum = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) sum += std::abs(predicted[i] - actual[i]);
  return sum / static_cast<double>(actual.size());
}

double r_squared(std::span<const double> predicted, std::span<const double> actual) {
  check_lengths(predicted, actual);
  double mean = 0.0;
  for (double a : actual) mean += a;
  mean /= static_cast<double>(actual.size());
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    ss_res += (predicted[i] - actual[i]) * (predicted[i] - actual[i]);
    ss_tot += (actual[i] - mean) * (actual[i] - mean);
  }
  if (ss_tot == 0.0) throw std::invalid_argument("R^2 is undefined for constant actuals");
  return 1.0 - ss_res / ss_tot;
}

Metrics evaluate(std::span<const double> predicted, std::span<const double> actual) {
  return {mape(predicted, actual), rmse(predicted, actual), mae(predicted, actual),
          r_squared(predicted, actual)};
}

}  // namespace resperf
