#ifndef Z1_ALU_HPP
#define Z1_ALU_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "z1/errors.hpp"
#include "z1/numerics.hpp"

namespace z1 {

// ---------------------------------------------------------------------------
// BitVector: a fixed-width bit string indexed from bit 0 (lowest binary
// position of its context). Width is 23 on the mantissa datapath and 7 on
// the exponent datapath, but the adder itself is parametric.
// ---------------------------------------------------------------------------
struct BitVector {
    int width = 0;
    std::uint32_t bits = 0;

    BitVector() = default;
    BitVector(int w, std::uint32_t b) : width(w), bits(b & mask(w)) {}

    static std::uint32_t mask(int w) {
        return w >= 32 ? 0xFFFFFFFFu : ((1u << w) - 1u);
    }

    unsigned bit(int i) const { return (bits >> i) & 1u; }
    bool sign() const { return bit(width - 1) != 0; }
    std::int32_t signed_value() const;

    std::string to_string() const;  // MSB first

    bool operator==(const BitVector&) const = default;
};

// One adder evaluation, kept bit by bit so the carry anticipation can be
// inspected and cross-checked against the gate-level build.
//
// xor_bits and and_bits are the two parallel first-stage results. carry_bits
// holds the carry INTO each position: a carry is generated where the AND has
// a one and rides left through every consecutive one of the XOR result. The
// sum is the final XOR of xor_bits with carry_bits.
struct AdderTrace {
    BitVector xor_bits;
    BitVector and_bits;
    BitVector carry_bits;
    BitVector sum;
    bool carry_out = false;  // carry out of the top position
};

// One-cycle addition with anticipated carries. Throws UsageError on width
// mismatch. carry_in feeds position 0 (used to build subtraction as
// complement + 1).
AdderTrace add_anticipating(const BitVector& a, const BitVector& b,
                            bool carry_in = false);

// 7-bit two's-complement exponent addition. The flag reports a true sum
// outside [-64, 63]; the returned value is always the wrapped 7-bit reading.
struct ExpSum {
    int value;      // wrapped two's-complement result
    bool overflow;
};
ExpSum add_exponent(int a, int b);

// The fixed transform set attached to the ALU outputs: identity, negation,
// one or two places right (Be/2, Be/4), one or three places left (2Be, 8Be).
enum class Route {
    Identity,
    Negate,
    Half,
    Quarter,
    Double,
    Octuple,
};

const char* route_name(Route r);

// Applies one output transform. Right shifts are arithmetic and truncate at
// bit 0; left shifts report lost significance through *overflow (the
// diagnostic the machine raises) when overflow is non-null.
BitVector route_output(const BitVector& e, Route selector, bool* overflow = nullptr);

} // namespace z1

#endif
