#include "z1/numerics.hpp"

#include <sstream>

namespace z1 {

const char* diagnostic_kind_name(Diagnostic::Kind kind) {
    switch (kind) {
    case Diagnostic::Kind::ExponentOverflow: return "exponent-overflow";
    case Diagnostic::Kind::ZeroMantissa: return "zero-mantissa";
    case Diagnostic::Kind::DisplayRange: return "display-range";
    case Diagnostic::Kind::ShiftOverflow: return "shift-overflow";
    }
    return "unknown";
}

Rational pow2(int e) {
    if (e >= 0) {
        return Rational(BigInt(1) << e);
    }
    return Rational(1, BigInt(1) << -e);
}

Word24 pack(unsigned sign, int exponent, std::uint16_t fraction) {
    if (exponent < kExponentMin || exponent > kExponentMax) {
        throw RangeError("pack: exponent " + std::to_string(exponent) +
                         " outside [-64, 63]");
    }
    Word24 w;
    w.sign = sign ? 1 : 0;
    w.exponent = static_cast<std::int8_t>(exponent);
    w.fraction = fraction;
    return w;
}

Unpacked unpack(const Word24& w) {
    return Unpacked{w.sign, w.exponent, w.fraction};
}

std::uint32_t to_bits(const Word24& w) {
    return (static_cast<std::uint32_t>(w.sign) << 23) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(w.exponent) & Exp7::kMask) << 16) |
           w.fraction;
}

Word24 from_bits(std::uint32_t bits) {
    Word24 w;
    w.sign = (bits >> 23) & 1;
    std::uint8_t e7 = (bits >> 16) & Exp7::kMask;
    w.exponent = static_cast<std::int8_t>(Exp7(e7).value());
    w.fraction = static_cast<std::uint16_t>(bits & 0xFFFF);
    return w;
}

Rational value_of(const Word24& w) {
    Rational mantissa(65536 + static_cast<int>(w.fraction), 65536);
    Rational v = mantissa * pow2(w.exponent);
    return w.sign ? -v : v;
}

ProcMantissa ProcMantissa::from_fraction(std::uint16_t fraction) {
    // hidden 1 at position 0 (bit 20), fraction at -1..-16 (bits 19..4)
    return ProcMantissa((1u << 20) | (static_cast<std::uint32_t>(fraction) << 4));
}

std::uint16_t ProcMantissa::to_fraction() const {
    return static_cast<std::uint16_t>((raw_ >> 4) & 0xFFFF);
}

unsigned ProcMantissa::bit(int pos) const {
    return (raw_ >> (pos - kBottomPosition)) & 1u;
}

std::int32_t ProcMantissa::signed_units() const {
    std::uint32_t v = raw_;
    if (v & (1u << (kWidth - 1))) {
        v |= ~kMask;  // sign extend
    }
    return static_cast<std::int32_t>(v);
}

bool ProcMantissa::is_normalized() const {
    return bit(0) == 1 && bit(1) == 0 && bit(2) == 0;
}

Rational ProcMantissa::value() const {
    return Rational(signed_units()) * pow2(kBottomPosition);
}

ProcMantissa ProcMantissa::negated() const {
    return ProcMantissa((~raw_ + 1u) & kMask);
}

ProcMantissa ProcMantissa::shifted_right(int count) const {
    std::int32_t v = signed_units();
    v >>= count;
    return ProcMantissa(static_cast<std::uint32_t>(v) & kMask);
}

ProcMantissa ProcMantissa::shifted_left(int count) const {
    return ProcMantissa((raw_ << count) & kMask);
}

std::string ProcMantissa::to_binary_string() const {
    std::string s;
    for (int pos = kTopPosition; pos >= kBottomPosition; --pos) {
        s.push_back(bit(pos) ? '1' : '0');
        if (pos == 0) {
            s.push_back('.');
        }
    }
    return s;
}

std::pair<ProcMantissa, int> normalize(ProcMantissa m, int exponent) {
    if (m.is_zero()) {
        throw ZeroUnsupported("normalize: zero mantissa has no representation");
    }
    if (m.is_negative()) {
        throw UsageError("normalize: negative mantissa (complement first)");
    }
    while (m.bit(ProcMantissa::kTopPosition) || m.bit(1)) {
        m = m.shifted_right(1);
        ++exponent;
    }
    while (m.bit(0) == 0) {
        m = m.shifted_left(1);
        --exponent;
    }
    return {m, exponent};
}

int Exp7::value() const {
    int v = raw_;
    if (v & 0x40) {
        v -= 128;
    }
    return v;
}

} // namespace z1
