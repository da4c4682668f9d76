#pragma once

#include <cstdint>
#include <random>

namespace steinevt {

using Rng = std::mt19937_64;

// splitmix64 finaliser applied to (seed, stream); used for every replicate stream
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(stream_seed(seed, stream));
}

// uniform on the open interval (0,1)
inline double uniform_open(Rng& rng) {
  for (;;) {
    double u = std::generate_canonical<double, 53>(rng);
    if (u > 0.0) return u;
  }
}

}  // namespace steinevt
