#include "z1/alu.hpp"

namespace z1 {

std::int32_t BitVector::signed_value() const {
    std::uint32_t v = bits;
    if (width < 32 && (v & (1u << (width - 1)))) {
        v |= ~mask(width);
    }
    return static_cast<std::int32_t>(v);
}

std::string BitVector::to_string() const {
    std::string s;
    for (int i = width - 1; i >= 0; --i) {
        s.push_back(bit(i) ? '1' : '0');
    }
    return s;
}

AdderTrace add_anticipating(const BitVector& a, const BitVector& b, bool carry_in) {
    if (a.width != b.width) {
        throw UsageError("add_anticipating: operand widths differ (" +
                         std::to_string(a.width) + " vs " + std::to_string(b.width) + ")");
    }
    const int w = a.width;
    AdderTrace t;
    t.xor_bits = BitVector(w, a.bits ^ b.bits);
    t.and_bits = BitVector(w, a.bits & b.bits);

    // A carry is generated by each AND one and transported leftwards as long
    // as the previous XOR keeps producing ones.
    std::uint32_t carries = 0;
    unsigned carry = carry_in ? 1u : 0u;
    for (int i = 0; i < w; ++i) {
        carries |= carry << i;
        carry = t.and_bits.bit(i) | (t.xor_bits.bit(i) & carry);
    }
    t.carry_bits = BitVector(w, carries);
    t.carry_out = carry != 0;
    t.sum = BitVector(w, t.xor_bits.bits ^ t.carry_bits.bits);
    return t;
}

ExpSum add_exponent(int a, int b) {
    int true_sum = a + b;
    Exp7 wrapped = Exp7::from_int(true_sum);
    return ExpSum{wrapped.value(), true_sum < kExponentMin || true_sum > kExponentMax};
}

const char* route_name(Route r) {
    switch (r) {
    case Route::Identity: return "id";
    case Route::Negate: return "neg";
    case Route::Half: return "1/2";
    case Route::Quarter: return "1/4";
    case Route::Double: return "x2";
    case Route::Octuple: return "x8";
    }
    return "?";
}

namespace {

BitVector shift_left_checked(const BitVector& e, int count, bool* overflow) {
    // Lost significance iff undoing the shift does not restore the value.
    BitVector out(e.width, e.bits << count);
    if (overflow) {
        std::int32_t back = out.signed_value() >> count;
        if (back != e.signed_value()) {
            *overflow = true;
        }
    }
    return out;
}

} // namespace

BitVector route_output(const BitVector& e, Route selector, bool* overflow) {
    switch (selector) {
    case Route::Identity:
        return e;
    case Route::Negate:
        return BitVector(e.width, ~e.bits + 1u);
    case Route::Half:
        return BitVector(e.width, static_cast<std::uint32_t>(e.signed_value() >> 1));
    case Route::Quarter:
        return BitVector(e.width, static_cast<std::uint32_t>(e.signed_value() >> 2));
    case Route::Double:
        return shift_left_checked(e, 1, overflow);
    case Route::Octuple:
        return shift_left_checked(e, 3, overflow);
    }
    throw UsageError("route_output: unknown selector");
}

} // namespace z1
