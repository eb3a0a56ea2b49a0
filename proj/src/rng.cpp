#include "dynspec/rng.hpp"

#include <cmath>
#include <numbers>

namespace dynspec {

namespace {
constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::next_u64() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * golden);
}

double Rng::uniform() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
    // rejection keeps the draw unbiased
    const std::uint64_t limit = n == 0 ? 0 : (~std::uint64_t(0) / n) * n;
    for (;;) {
        std::uint64_t v = next_u64();
        if (v < limit) return v % n;
    }
}

std::uint64_t split_seed(std::uint64_t parent, std::uint64_t index) {
    return splitmix64_mix(splitmix64_mix(parent) + (index + 1) * golden);
}

}  // namespace dynspec
