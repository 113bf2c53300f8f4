#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mwsn {

/// Seeded random stream. Subsystems fork their own stream from the run seed by
/// a fixed label, so adding draws in one subsystem never perturbs another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Derives an independent stream from `seed` and `label`.
  static Rng fork(std::uint64_t seed, std::string_view label);

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform01();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi] (inclusive).
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mwsn
