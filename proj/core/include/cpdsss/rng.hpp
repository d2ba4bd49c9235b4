#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "cpdsss/types.hpp"

namespace cpdsss {

/// Purpose tags that keep independent random streams apart.
enum class Stream : std::uint64_t {
  Channel = 1,
  Symbols = 2,
  UplinkNoise = 3,
  DownlinkNoise = 4,
  PilotNoise = 5,
  Test = 99,
};

/// Seeded random stream. Two Rngs built from the same path produce the same
/// sequence on a given standard library, independent of thread scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, Stream purpose, std::initializer_list<std::uint64_t> path);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }

  /// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
  cplx complex_gaussian(double variance);

  /// Adds independent complex Gaussian noise of `variance` to every sample.
  void add_noise(MutCSpan out, double variance);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace cpdsss
