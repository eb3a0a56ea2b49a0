#pragma once

#include <cstdint>

namespace dynspec {

std::uint64_t splitmix64_mix(std::uint64_t x);

// Counter-based SplitMix64 stream: the n-th draw is mix(key + n * golden),
// so any draw can be reproduced from (key, n) alone.
class Rng {
public:
    explicit Rng(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64();
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);
    double normal();                        // Box-Muller, one draw per pair of uniforms
    std::uint64_t below(std::uint64_t n);   // uniform integer in [0, n)

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Key for child stream `index` of `parent`.
std::uint64_t split_seed(std::uint64_t parent, std::uint64_t index);

enum class Stream : std::uint64_t { spectrum = 1, initial_state = 2, outliers = 3, noise = 4 };

inline Rng stream_rng(std::uint64_t trial_seed, Stream s) {
    return Rng(split_seed(trial_seed, static_cast<std::uint64_t>(s)));
}

}  // namespace dynspec
