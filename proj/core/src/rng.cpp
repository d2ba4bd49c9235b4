#include "cpdsss/rng.hpp"

#include <cmath>
#include <vector>

namespace cpdsss {
namespace {

std::mt19937_64 seeded(std::uint64_t master, Stream purpose,
                       std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master);
  push(static_cast<std::uint64_t>(purpose));
  for (auto v : path) push(v);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t master, Stream purpose, std::initializer_list<std::uint64_t> path)
    : engine_(seeded(master, purpose, path)) {}

cplx Rng::complex_gaussian(double variance) {
  const double sd = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {sd * re, sd * im};
}

void Rng::add_noise(MutCSpan out, double variance) {
  for (auto& v : out) v += complex_gaussian(variance);
}

}  // namespace cpdsss
