#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace palmflow {

// Counter-based splittable generator (splitmix64 core). Streams are derived
// from (seed, experiment id, replica index), so replica r always sees the
// same draws no matter how many workers run or in which order they finish.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

    static Rng stream(std::uint64_t seed, std::string_view experiment, std::uint64_t replica) {
        std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a over the experiment id
        for (unsigned char c : experiment) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        std::uint64_t s = mix(seed);
        s = mix(s ^ h);
        s = mix(s ^ replica);
        return Rng(s);
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // uniform integer in [0, n), n >= 1
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<__uint128_t>(next()) * n) >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    bool fair_bit() { return (next() >> 63) != 0; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace palmflow
