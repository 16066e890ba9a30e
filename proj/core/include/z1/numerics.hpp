#ifndef Z1_NUMERICS_HPP
#define Z1_NUMERICS_HPP

#include <cstdint>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "z1/errors.hpp"

namespace z1 {

// Exact rational value, used by the reference valuation and the oracle
// tests. Never rounded.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Returns 2^e as an exact rational, e may be negative.
Rational pow2(int e);

// ---------------------------------------------------------------------------
// Word24: the 24-bit memory word.
//
// sign (1 bit), exponent (7-bit two's complement, -64..+63), fraction
// (16 bits after the binary point of a normalized mantissa). The leading 1
// of the mantissa is implicit and never stored, so the all-zero word means
// +1.0 * 2^0 and zero has no representation at all.
// ---------------------------------------------------------------------------
struct Word24 {
    std::uint8_t sign = 0;       // 0 = positive, 1 = negative
    std::int8_t exponent = 0;    // -64 .. +63
    std::uint16_t fraction = 0;  // bits -1 .. -16 of the mantissa

    bool operator==(const Word24&) const = default;
};

inline constexpr int kExponentMin = -64;
inline constexpr int kExponentMax = 63;

// Packs the three fields into a word. Throws RangeError if the exponent is
// outside [-64, 63].
Word24 pack(unsigned sign, int exponent, std::uint16_t fraction);

// Exact inverse of pack.
struct Unpacked {
    unsigned sign;
    int exponent;
    std::uint16_t fraction;
    bool operator==(const Unpacked&) const = default;
};
Unpacked unpack(const Word24& w);

// The 24 raw bits, sign in bit 23, exponent in bits 22..16, fraction below.
// Used by the memory banks and the tape-independent dump formats.
std::uint32_t to_bits(const Word24& w);
Word24 from_bits(std::uint32_t bits);

// (-1)^sign * (2^16 + fraction) / 2^16 * 2^exponent, exactly.
Rational value_of(const Word24& w);

// ---------------------------------------------------------------------------
// ProcMantissa: the processor-internal mantissa register.
//
// A 23-bit two's-complement register spanning binary positions +2 down
// through -20. A stored word's fraction occupies positions -1..-16 after a
// load, with the hidden 1 materialized at position 0. Bits shifted below
// -20 are dropped; the register is closed under negation and shifting.
// ---------------------------------------------------------------------------
class ProcMantissa {
public:
    static constexpr int kTopPosition = 2;     // highest binary position
    static constexpr int kBottomPosition = -20;
    static constexpr int kWidth = 23;
    static constexpr std::uint32_t kMask = (1u << kWidth) - 1;

    ProcMantissa() = default;
    explicit ProcMantissa(std::uint32_t raw) : raw_(raw & kMask) {}

    // Mantissa 1.fraction, hidden bit set at position 0.
    static ProcMantissa from_fraction(std::uint16_t fraction);

    // Fraction bits -1..-16; positions below -16 are dropped, bits at or
    // above 0 are the caller's responsibility (the word format has none).
    std::uint16_t to_fraction() const;

    std::uint32_t raw() const { return raw_; }

    // Bit at binary position pos (kBottomPosition..kTopPosition).
    unsigned bit(int pos) const;

    // Signed two's-complement reading, in units of 2^-20.
    std::int32_t signed_units() const;

    bool is_zero() const { return raw_ == 0; }
    bool is_negative() const { return bit(kTopPosition) != 0; }
    // Bit 0 set and both guard positions +1, +2 clear.
    bool is_normalized() const;

    // Exact value of the register contents.
    Rational value() const;

    ProcMantissa negated() const;
    ProcMantissa shifted_right(int count) const;  // arithmetic, truncates below -20
    ProcMantissa shifted_left(int count) const;   // bits pushed past +2 are lost

    // Binary rendering with the point between positions 0 and -1,
    // e.g. "010.01000000000000000000" for +1/2 plus guard context.
    std::string to_binary_string() const;

    bool operator==(const ProcMantissa&) const = default;

private:
    std::uint32_t raw_ = 0;
};

// Left/right shifts until the mantissa has bit 0 = 1 and clear guard bits,
// adjusting the exponent to preserve the value (up to truncation below
// position -20). Throws ZeroUnsupported on a zero mantissa and UsageError on
// a negative one (the microprograms complement before normalizing).
std::pair<ProcMantissa, int> normalize(ProcMantissa m, int exponent);

// ---------------------------------------------------------------------------
// Exp7: a 7-bit two's-complement exponent register.
// ---------------------------------------------------------------------------
class Exp7 {
public:
    static constexpr std::uint8_t kMask = 0x7F;

    Exp7() = default;
    explicit Exp7(std::uint8_t raw) : raw_(raw & kMask) {}
    static Exp7 from_int(int v) { return Exp7(static_cast<std::uint8_t>(v & kMask)); }

    std::uint8_t raw() const { return raw_; }
    int value() const;  // -64 .. 63

    bool operator==(const Exp7&) const = default;

private:
    std::uint8_t raw_ = 0;
};

} // namespace z1

#endif
