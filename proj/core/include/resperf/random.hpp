#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace resperf {

/// Deterministic random stream.
///
/// A stream is identified by a seed plus any number of counters (row index,
/// epoch, ...), so independent substreams can be created in any order and
/// still reproduce bit-exactly. The engine is std::mt19937_64 seeded through
/// std::seed_seq; the value mappings below are written out here because the
/// standard distributions are implementation-defined.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::initializer_list<std::uint64_t> counters = {});

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform in the closed range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace resperf
