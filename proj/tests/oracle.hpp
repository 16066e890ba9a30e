#ifndef Z1_TESTS_ORACLE_HPP
#define Z1_TESTS_ORACLE_HPP

// Independent reference implementations used only by tests. Everything here
// recomputes results from first principles (exact rationals, plain long
// division, sequential ripple carry) without touching the emulator's
// datapath, ALU or microcode paths.

#include <cstdint>
#include <optional>

#include "z1/numerics.hpp"

namespace z1::oracle {

// Exact value of a packed word, written out from the format definition.
Rational word_value(unsigned sign, int exponent, std::uint16_t fraction);

// Sequential ripple-carry addition at the given width.
struct RippleResult {
    std::uint32_t carries;  // carry into each position
    std::uint32_t sum;
    bool carry_out;
};
RippleResult ripple_carry(std::uint32_t a, std::uint32_t b, int width,
                          bool carry_in = false);

// Expected machine result of an addition/subtraction, modeling exactly the
// truncation the hardware performs: the smaller operand's mantissa loses
// the bits shifted below position -20 during alignment, an overflowed sum
// loses one bit when halved, and the final repack keeps fraction bits
// -1..-16. Returns nullopt when the mantissa difference is exactly zero
// (the machine has no representation for it).
struct WordFields {
    unsigned sign;
    int exponent;
    std::uint16_t fraction;
};
std::optional<WordFields> add_sub_expected(const WordFields& f, const WordFields& g,
                                           bool subtract);

// Exact product / quotient values.
Rational mul_exact(const WordFields& f, const WordFields& g);
Rational div_exact(const WordFields& f, const WordFields& g);

// 17-bit quotient (positions 0..-16) of the two 17-bit mantissas by plain
// restoring long division; bit 16 is the quotient's position-0 bit.
std::uint32_t restoring_quotient(std::uint32_t dividend17, std::uint32_t divisor17);

// Decimal display reference: the four most significant decimal digits of
// |v| and the arrow with v ~ 0.d3d2d1d0 * 10^arrow (digits truncated).
struct DecimalDigits {
    int d3, d2, d1, d0;
    int arrow;
};
DecimalDigits decimal_digits(const Rational& v);

} // namespace z1::oracle

#endif
