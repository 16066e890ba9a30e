#include "z1/datapath.hpp"

#include <bitset>
#include <sstream>

namespace z1 {

const char* target_name(RTarget t) {
    switch (t) {
    case RTarget::Aa: return "Aa";
    case RTarget::Ab: return "Ab";
    case RTarget::Ba: return "Ba";
    case RTarget::Bb: return "Bb";
    }
    return "?";
}

const char* source_name(RSource s) {
    switch (s) {
    case RSource::Af: return "Af";
    case RSource::Ag: return "Ag";
    case RSource::Ae: return "Ae";
    case RSource::Bf: return "Bf";
    case RSource::Bg: return "Bg";
    case RSource::Be: return "Be";
    case RSource::ConstOne: return "1";
    case RSource::ConstThree: return "3";
    case RSource::ConstThirteen: return "13";
    case RSource::Digit: return "Za";
    }
    return "?";
}

std::string RouteAction::to_string() const {
    std::ostringstream os;
    os << target_name(target) << "<-";
    if (transform == Route::Negate) {
        os << "-";
    }
    os << source_name(source);
    if (source == RSource::Digit) {
        os << digit_index;
    }
    switch (transform) {
    case Route::Half: os << "/2"; break;
    case Route::Quarter: os << "/4"; break;
    case Route::Double: os << "*2"; break;
    case Route::Octuple: os << "*8"; break;
    default: break;
    }
    return os.str();
}

std::string ProcessorState::dump() const {
    std::ostringstream os;
    auto exp_line = [&os](const char* name, const Exp7& r) {
        os << name << " = " << std::bitset<7>(r.raw()).to_string()
           << " (" << r.value() << ")\n";
    };
    auto mant_line = [&os](const char* name, const ProcMantissa& m) {
        os << name << " = " << m.to_binary_string() << '\n';
    };
    exp_line("Af", Af);
    exp_line("Ag", Ag);
    exp_line("Aa", Aa);
    exp_line("Ab", Ab);
    exp_line("Ae", Ae);
    mant_line("Bf", Bf);
    mant_line("Bg", Bg);
    mant_line("Ba", Ba);
    mant_line("Bb", Bb);
    mant_line("Be", Be);
    os << "S0=" << S0 << " S1=" << S1 << " S3=" << S3 << " mm=" << mm
       << " Ph=" << Ph << " Op=" << Op
       << " signF=" << sign_F << " signG=" << sign_G << '\n';
    return os.str();
}

namespace {

bool is_exp_target(RTarget t) {
    return t == RTarget::Aa || t == RTarget::Ab;
}

std::uint32_t source_bits(const ProcessorState& s, const RouteAction& a,
                          const int* digits, int width) {
    switch (a.source) {
    case RSource::Af: return s.Af.raw();
    case RSource::Ag: return s.Ag.raw();
    case RSource::Ae: return s.Ae.raw();
    case RSource::Bf: return s.Bf.raw();
    case RSource::Bg: return s.Bg.raw();
    case RSource::Be: return s.Be.raw();
    case RSource::ConstOne: return 1;
    case RSource::ConstThree: return 3;
    case RSource::ConstThirteen: return 13;
    case RSource::Digit: {
        if (!digits || a.digit_index < 0 || a.digit_index > 3) {
            throw UsageError("route: digit source without panel digits");
        }
        int d = digits[a.digit_index];
        // nibble enters the mantissa at bit -13
        return static_cast<std::uint32_t>(d)
               << (kDigitEntryPosition - ProcMantissa::kBottomPosition);
    }
    }
    (void)width;
    throw UsageError("route: unknown source");
}

} // namespace

void apply_route(ProcessorState& s, const std::vector<RouteAction>& actions,
                 const int* digits, std::vector<Diagnostic>* diags) {
    const ProcessorState pre = s;
    for (const RouteAction& a : actions) {
        const bool exp_side = is_exp_target(a.target);
        const int width = exp_side ? 7 : ProcMantissa::kWidth;
        if (exp_side && (a.source == RSource::Bf || a.source == RSource::Bg ||
                         a.source == RSource::Be || a.source == RSource::Digit)) {
            throw UsageError("route: mantissa source on exponent target");
        }
        if (!exp_side && (a.source == RSource::Af || a.source == RSource::Ag ||
                          a.source == RSource::Ae)) {
            throw UsageError("route: exponent source on mantissa target");
        }
        BitVector v(width, source_bits(pre, a, digits, width));
        bool overflow = false;
        v = route_output(v, a.transform, &overflow);
        if (overflow && diags) {
            diags->push_back(Diagnostic{Diagnostic::Kind::ShiftOverflow,
                                        std::string("left shift overflow on ") +
                                            a.to_string()});
        }
        switch (a.target) {
        case RTarget::Aa: s.Aa = Exp7(static_cast<std::uint8_t>(s.Aa.raw() | v.bits)); break;
        case RTarget::Ab: s.Ab = Exp7(static_cast<std::uint8_t>(s.Ab.raw() | v.bits)); break;
        case RTarget::Ba: s.Ba = ProcMantissa(s.Ba.raw() | v.bits); break;
        case RTarget::Bb: s.Bb = ProcMantissa(s.Bb.raw() | v.bits); break;
        }
    }
}

AluCycle alu_cycle(ProcessorState& s, std::vector<Diagnostic>* diags) {
    AluCycle c;
    c.exp_trace = add_anticipating(BitVector(7, s.Aa.raw()), BitVector(7, s.Ab.raw()));
    c.mant_trace = add_anticipating(BitVector(ProcMantissa::kWidth, s.Ba.raw()),
                                    BitVector(ProcMantissa::kWidth, s.Bb.raw()));
    // two's complement overflow: carry into the top position differs from
    // the carry out of it
    c.exp_overflow = (c.exp_trace.carry_bits.bit(6) != 0) != c.exp_trace.carry_out;
    s.Ae = Exp7(static_cast<std::uint8_t>(c.exp_trace.sum.bits));
    s.Be = ProcMantissa(c.mant_trace.sum.bits);
    s.Aa = Exp7(0);
    s.Ab = Exp7(0);
    s.Ba = ProcMantissa(0);
    s.Bb = ProcMantissa(0);
    if (c.exp_overflow && diags) {
        diags->push_back(Diagnostic{Diagnostic::Kind::ExponentOverflow,
                                    "exponent addition left [-64,63]"});
    }
    return c;
}

void SerialUnit::begin(SerialDirection dir) {
    active_ = true;
    dir_ = dir;
    count_ = 0;
}

void SerialUnit::bump(SerialDirection expect) {
    if (!active_ || dir_ != expect) {
        throw SequencerError("serial Bf access without matching begin()");
    }
    if (++count_ > 17) {
        throw SequencerError("more than 17 serial Bf accesses in one operation");
    }
}

// Bf's physical shift register covers positions 0..-16 (raw bits 20..4).
static constexpr int kWindowShift = 4;
static constexpr std::uint32_t kWindowMask = 0x1FFFF;

unsigned SerialUnit::read_bit(ProcessorState& s) {
    bump(SerialDirection::LowToHigh);
    std::uint32_t window = (s.Bf.raw() >> kWindowShift) & kWindowMask;
    unsigned bit = window & 1u;
    window >>= 1;
    s.Bf = ProcMantissa((s.Bf.raw() & ~(kWindowMask << kWindowShift)) |
                        (window << kWindowShift));
    s.mm = bit;
    return bit;
}

void SerialUnit::write_bit(ProcessorState& s, unsigned bit) {
    bump(SerialDirection::HighToLow);
    std::uint32_t window = (s.Bf.raw() >> kWindowShift) & kWindowMask;
    window = ((window << 1) | (bit & 1u)) & kWindowMask;
    s.Bf = ProcMantissa((s.Bf.raw() & ~(kWindowMask << kWindowShift)) |
                        (window << kWindowShift));
}

LoadTarget load_target(const LoadUnit& lu) {
    return lu.g_loaded ? LoadTarget::F : LoadTarget::G;
}

void load_operand(ProcessorState& s, LoadUnit& lu, const Word24& w) {
    if (load_target(lu) == LoadTarget::G) {
        s.Ag = Exp7::from_int(w.exponent);
        s.Bg = ProcMantissa::from_fraction(w.fraction);
        s.sign_G = w.sign;
        lu.g_loaded = true;
    } else {
        s.Af = Exp7::from_int(w.exponent);
        s.Bf = ProcMantissa::from_fraction(w.fraction);
        s.sign_F = w.sign;
        lu.f_loaded = true;
    }
}

void writeback_result(ProcessorState& s, LoadUnit& lu, const Word24& w) {
    s.Af = Exp7::from_int(w.exponent);
    s.Bf = ProcMantissa::from_fraction(w.fraction);
    s.sign_F = w.sign;
    lu.f_loaded = true;
    lu.g_loaded = false;
}

} // namespace z1
