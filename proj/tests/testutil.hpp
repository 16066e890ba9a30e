#ifndef Z1_TESTS_TESTUTIL_HPP
#define Z1_TESTS_TESTUTIL_HPP

#include <random>

#include "z1/numerics.hpp"

namespace z1::testutil {

// Deterministic operand generator. Exponents default to a band that keeps
// every alignment distance and result exponent inside the 7-bit range, so
// no overflow diagnostics fire during oracle sweeps.
class WordGen {
public:
    explicit WordGen(std::uint64_t seed, int exp_lo = -30, int exp_hi = 30)
        : rng_(seed), exp_(exp_lo, exp_hi), frac_(0, 0xFFFF), sign_(0, 1) {}

    Word24 next(bool random_sign = true) {
        return pack(random_sign ? sign_(rng_) : 0u, exp_(rng_),
                    static_cast<std::uint16_t>(frac_(rng_)));
    }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
    std::uniform_int_distribution<int> exp_;
    std::uniform_int_distribution<unsigned> frac_;
    std::uniform_int_distribution<unsigned> sign_;
};

} // namespace z1::testutil

#endif
