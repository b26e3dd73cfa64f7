#pragma once

// Counter-based random streams: value k of a stream is a pure function of
// (seed, purpose, index, k), so parallel workers draw identical numbers
// regardless of scheduling.

#include <cstdint>
#include <string_view>

#include "hopf/poly_core.hpp"

namespace hopf {

class Rng {
  public:
    Rng(std::uint64_t seed, std::string_view purpose, std::uint64_t index = 0);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double normal();
    /// Real and imaginary parts independent N(0, 1).
    cplx complex_normal();
    Coeffs complex_normal_vector(std::size_t size);

    /// Independent stream derived from this one's key.
    Rng substream(std::string_view purpose, std::uint64_t index = 0) const;

  private:
    explicit Rng(std::uint64_t key) : key_(key) {}
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a(std::string_view text);

}  // namespace hopf
