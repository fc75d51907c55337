#include "xebsim/rng.hpp"

#include <cmath>

namespace xebsim {

namespace {

// splitmix64 avalanche; adjacent stream ids must not correlate the early
// outputs of freshly seeded engines.
std::uint64_t avalanche(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t id0,
                     std::uint64_t id1, std::uint64_t id2) {
  std::uint64_t x = avalanche(master_seed + 0x9E3779B97F4A7C15ull);
  for (std::uint64_t v : {id0, id1, id2}) {
    x = avalanche(x + 0x9E3779B97F4A7C15ull * (v + 1));
  }
  std::uint64_t w[4];
  for (std::uint64_t& word : w) {
    x += 0x9E3779B97F4A7C15ull;
    word = avalanche(x);
  }
  std::seed_seq seq{
      static_cast<std::uint32_t>(w[0]), static_cast<std::uint32_t>(w[0] >> 32),
      static_cast<std::uint32_t>(w[1]), static_cast<std::uint32_t>(w[1] >> 32),
      static_cast<std::uint32_t>(w[2]), static_cast<std::uint32_t>(w[2] >> 32),
      static_cast<std::uint32_t>(w[3]), static_cast<std::uint32_t>(w[3] >> 32)};
  engine_.seed(seq);
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t RngStream::uniform_index(std::size_t n) {
  if (n <= 1) return 0;
  std::uint64_t mask = ~std::uint64_t{0};
  std::uint64_t range = n - 1;
  mask >>= __builtin_clzll(range | 1);
  std::uint64_t x;
  do {
    x = next_u64() & mask;
  } while (x >= n);
  return static_cast<std::size_t>(x);
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 1.0 - uniform();  // (0, 1]
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace xebsim
