#pragma once

#include <cstdint>
#include <random>

namespace molevo {

// Seeded random source with portable derived draws.
//
// std::mt19937_64 produces the same stream on every platform, but the
// standard distributions do not, so the double/index helpers here are
// implemented by hand and are part of the reproducibility contract:
//   next_double : top 53 bits of one engine draw, scaled to [0,1)
//   next_index  : Lemire multiply-shift of one engine draw into [0,n)
// One helper call always consumes exactly one engine draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::size_t next_index(std::size_t n) {
    using u128 = unsigned __int128;
    return static_cast<std::size_t>((static_cast<u128>(engine_()) * n) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace molevo
