#include <cmath>

#include "doctest.h"
#include "resperf/metrics.hpp"
#include "resperf/random.hpp"

using namespace resperf;

TEST_CASE("metric worked examples") {
  const std::vector<double> a{1.0, 2.0, 4.0};
  const std::vector<double> p{1.1, 1.8, 4.0};
  CHECK(mape(p, a) == doctest::Approx(100.0 * (0.1 + 0.1 + 0.0) / 3.0));
  CHECK(mae(p, a) == doctest::Approx(0.3 / 3.0));
  CHECK(rmse(p, a) == doctest::Approx(std::sqrt((0.01 + 0.04) / 3.0)));
  // mean 7/3; SS_tot = 16/9 + 1/9 + 25/9.
  CHECK(r_squared(p, a) == doctest::Approx(1.0 - 0.05 / (42.0 / 9.0)));
  CHECK(mape(a, a) == 0.0);
  CHECK(r_squared(a, a) == 1.0);
}

TEST_CASE("metric invariants") {
  RandomStream rng(2);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> a(10), p(10);
    for (std::size_t j = 0; j < a.size(); ++j) {
      a[j] = 0.1 + rng.uniform();
      p[j] = a[j] * (0.5 + rng.uniform());
    }
    const auto m = evaluate(p, a);
    CHECK(m.mape >= 0.0);
    CHECK(m.rmse >= m.mae);
    CHECK(m.r2 <= 1.0);
  }
}

TEST_CASE("metric input errors") {
  CHECK_THROWS_AS(mape(std::vector<double>{1.0}, std::vector<double>{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(mape(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(rmse(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(r_squared(std::vector<double>{1.0, 2.0}, std::vector<double>{3.0, 3.0}),
                  std::invalid_argument);
}
