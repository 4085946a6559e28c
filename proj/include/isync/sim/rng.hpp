// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace isync {

/// Deterministic random source. All sampling goes through explicit
/// algorithms (not std:: distributions, whose streams are
/// implementation-defined), so a (seed, call sequence) pair produces the
/// same values on any platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

  /// Independent named stream, stable across runs and across n_ues: the
  /// stream for ("clock", ue 7) does not depend on how many other UEs exist.
  static SeededRng substream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1).
  double uniform01();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t uniform_i64(std::int64_t lo, std::int64_t hi);
  /// Standard Box-Muller; consumes exactly two uniforms per call.
  double normal(double mean, double sigma);
  /// Normal resampled until >= 0. Requires mean >= 0.
  double truncated_normal(double mean, double sigma);
  bool bernoulli(double p);

 private:
  std::mt19937_64 eng_;
};

/// 64-bit mix used for substream derivation.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace isync
