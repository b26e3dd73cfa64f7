#include "hopf/rng.hpp"

#include <cmath>
#include <numbers>

namespace hopf {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

Rng::Rng(std::uint64_t seed, std::string_view purpose, std::uint64_t index)
    : key_(splitmix64(splitmix64(seed) ^ fnv1a(purpose)) ^ splitmix64(index + 0x632be59bd9b4e019ULL)) {}

std::uint64_t Rng::next_u64() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    // Box-Muller; the second variate is dropped to keep draws stateless.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cplx Rng::complex_normal() {
    const double re = normal();
    return {re, normal()};
}

Coeffs Rng::complex_normal_vector(std::size_t size) {
    Coeffs c(size);
    for (auto& v : c) v = complex_normal();
    return c;
}

Rng Rng::substream(std::string_view purpose, std::uint64_t index) const {
    return Rng(splitmix64(key_ ^ fnv1a(purpose)) ^ splitmix64(index ^ 0xd1b54a32d192ed03ULL));
}

}  // namespace hopf
