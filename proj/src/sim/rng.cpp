// SPDX-License-Identifier: Apache-2.0
#include "isync/sim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace isync {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

namespace {
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}
}  // namespace

SeededRng SeededRng::substream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  std::uint64_t s = splitmix64(seed ^ fnv1a(name));
  s = splitmix64(s ^ (index * 0x9e3779b97f4a7c15ull));
  return SeededRng(s);
}

double SeededRng::uniform01() {
  // 53 high bits -> double in [0, 1)
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

std::int64_t SeededRng::uniform_i64(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::invalid_argument("uniform_i64: lo > hi");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(eng_());  // full 64-bit range
  // Rejection-free modulo is biased for huge spans; acceptable here since
  // spans are far below 2^63, but keep the debias loop anyway.
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
  std::uint64_t v;
  do {
    v = eng_();
  } while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

double SeededRng::normal(double mean, double sigma) {
  // Box-Muller without caching the second deviate: deterministic two
  // uniforms per call.
  double u1 = uniform01();
  double u2 = uniform01();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + sigma * r * std::cos(2.0 * M_PI * u2);
}

double SeededRng::truncated_normal(double mean, double sigma) {
  if (mean < 0.0) throw std::invalid_argument("truncated_normal: mean must be >= 0");
  if (sigma <= 0.0) return mean;
  for (int i = 0; i < 1024; ++i) {
    const double v = normal(mean, sigma);
    if (v >= 0.0) return v;
  }
  return mean;  // unreachable for mean >= 0 in practice
}

bool SeededRng::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01() < p;
}

}  // namespace isync
