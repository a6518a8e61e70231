#include "resperf/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace resperf {

RandomStream::RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> counters) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (counters.size() + 1) + 1);
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  words.push_back(static_cast<std::uint32_t>(counters.size()));
  for (auto c : counters) push(c);
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

double RandomStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  // Rejection keeps the mapping unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

double RandomStream::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace resperf
