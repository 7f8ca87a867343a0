#pragma once

#include <cstdint>
#include <random>

namespace roughdense {

/// splitmix64 step; used to decorrelate derived seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Per-path seed derivation: extending an ensemble keeps the prefix of seeds.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ splitmix64(index + 1));
}

/// Standard-normal stream with a fixed engine so runs are reproducible
/// for a given seed on a given platform.
class GaussianSource {
  public:
    explicit GaussianSource(std::uint64_t seed) : eng_(seed) {}

    double next() { return dist_(eng_); }

  private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> dist_{0.0, 1.0};
};

}  // namespace roughdense
