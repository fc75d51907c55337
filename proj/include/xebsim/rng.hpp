#ifndef XEBSIM_RNG_HPP_
#define XEBSIM_RNG_HPP_

#include <cstdint>
#include <random>
#include <vector>

namespace xebsim {

// Deterministic random stream derived from (master seed, stream ids).
//
// Every consumer of randomness derives its own stream from the experiment
// seed plus structural ids (depth index, circuit index, purpose salt), so
// results are bit-identical regardless of execution order or thread count.
// All samplers are hand-rolled on top of mt19937_64 output; the standard
// distributions are implementation-defined and would not reproduce across
// library versions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t id0 = 0,
                     std::uint64_t id1 = 0, std::uint64_t id2 = 0);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform();

  // Uniform integer in [0, n). Unbiased via bitmask rejection.
  std::size_t uniform_index(std::size_t n);

  // Standard normal via Box-Muller (second value cached).
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Purpose salts keeping derived streams disjoint.
namespace rng_salt {
inline constexpr std::uint64_t kCircuit = 0x11;
inline constexpr std::uint64_t kBootstrap = 0x22;
inline constexpr std::uint64_t kEnsemble = 0x33;
inline constexpr std::uint64_t kIsolated = 0x44;
}  // namespace rng_salt

}  // namespace xebsim

#endif  // XEBSIM_RNG_HPP_
