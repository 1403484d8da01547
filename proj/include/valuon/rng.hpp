#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>

#include "valuon/rational.hpp"

namespace valuon {

/// Default seed for randomized property checks ("valuon" in ASCII).
inline constexpr std::uint64_t kDefaultSeed = 0x76616c756f6eULL;

/// Seed for sampled checks; VALUON_SEED in the environment overrides it.
inline std::uint64_t seed_from_env() {
    if (const char* s = std::getenv("VALUON_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end && *end == '\0') return v;
    }
    return kDefaultSeed;
}

/// Uniform rational with numerator in [-max_num, max_num] and denominator
/// in [1, max_den].  Not reduced-uniform; good enough for law sampling.
inline Rational random_rational(std::mt19937_64& g, std::int64_t max_num = 1000000,
                                std::int64_t max_den = 1000000) {
    std::uniform_int_distribution<std::int64_t> num(-max_num, max_num);
    std::uniform_int_distribution<std::int64_t> den(1, max_den);
    return Rational(num(g), den(g));
}

/// Uniform nonzero rational.
inline Rational random_nonzero_rational(std::mt19937_64& g, std::int64_t max_num = 1000000,
                                        std::int64_t max_den = 1000000) {
    for (;;) {
        Rational r = random_rational(g, max_num, max_den);
        if (!r.is_zero()) return r;
    }
}

}  // namespace valuon
