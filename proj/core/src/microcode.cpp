#include "z1/microcode.hpp"

#include <sstream>

namespace z1 {

const char* micro_op_name(MicroOp op) {
    switch (op) {
    case MicroOp::Add: return "ADD";
    case MicroOp::Sub: return "SUB";
    case MicroOp::Mul: return "MUL";
    case MicroOp::Div: return "DIV";
    case MicroOp::Read: return "READ";
    case MicroOp::Disp: return "DISP";
    }
    return "?";
}

const char* guard_name(Guard g) {
    switch (g) {
    case Guard::Always: return "-";
    case Guard::AeNonNegative: return "Ae>=0";
    case Guard::AeZero: return "Ae=0";
    case Guard::AeNonZero: return "Ae!=0";
    case Guard::AeOne: return "Ae=1";
    case Guard::BeNegative: return "Be<0";
    case Guard::BeNonNegative: return "Be>=0";
    case Guard::BeZero: return "Be=0";
    case Guard::BeBit0One: return "Be0=L";
    case Guard::BeBit0Zero: return "Be0=0";
    case Guard::BeTwoOrMore: return "Be+1=L";
    case Guard::MmOne: return "mm=L";
    case Guard::MmZero: return "mm=0";
    case Guard::PhBelow18: return "Ph<18";
    case Guard::LeverPositive: return "lever>0";
    case Guard::LeverNegative: return "lever<0";
    case Guard::LeverZero: return "lever=0";
    case Guard::AccGE16: return "Ae>3";
    case Guard::AccBelowTenth: return "v<1/10";
    case Guard::AccGEOne: return "v>=1";
    }
    return "?";
}

static const char* effect_name(Effect::Kind k) {
    switch (k) {
    case Effect::Kind::AdvancePhase: return "Ph+";
    case Effect::Kind::SetPhase: return "Ph=";
    case Effect::Kind::SetS1True: return "S1=1";
    case Effect::Kind::SetS1False: return "S1=0";
    case Effect::Kind::SetS3: return "S3";
    case Effect::Kind::Finish: return "finish";
    case Effect::Kind::BeginSerialRead: return "ser.rd";
    case Effect::Kind::BeginSerialWrite: return "ser.wr";
    case Effect::Kind::SerialLatchMm: return "mm<<Bf";
    case Effect::Kind::RecordQuotientBit: return "q->Bf";
    case Effect::Kind::ZeroCheck: return "zero?";
    case Effect::Kind::NormalizeLeftFold: return "norm<-";
    case Effect::Kind::LeverDec: return "lever-";
    case Effect::Kind::LeverInc: return "lever+";
    case Effect::Kind::SuspendDivTen: return "susp:1/10";
    case Effect::Kind::AccSetup: return "cv.load";
    case Effect::Kind::AccScaleDown16: return "susp:1e-16";
    case Effect::Kind::AccMul10ArrowDec: return "cv*10";
    case Effect::Kind::AccDiv10ArrowInc: return "cv/10";
    case Effect::Kind::AccExtractDigit: return "cv.digit";
    case Effect::Kind::DisplayFinish: return "display";
    }
    return "?";
}

bool Criterion::matches(MicroOp op, bool s0v, bool s1v, unsigned ph) const {
    if ((static_cast<std::uint8_t>(op) & op_mask) != (op_value & op_mask)) {
        return false;
    }
    if (s0 >= 0 && s0 != (s0v ? 1 : 0)) {
        return false;
    }
    if (s1 >= 0 && s1 != (s1v ? 1 : 0)) {
        return false;
    }
    return ph >= ph_lo && ph <= ph_hi;
}

// ---------------------------------------------------------------------------
// Table construction helpers.
// ---------------------------------------------------------------------------
namespace {

RouteAction ra(RTarget t, RSource s, Route tr = Route::Identity, int digit = -1) {
    return RouteAction{t, s, tr, digit};
}

Effect fx(Effect::Kind k, int arg = 0) {
    return Effect{k, arg};
}

GuardVariant gv(std::vector<Guard> guards,
                std::vector<RouteAction> exp_routes,
                std::vector<RouteAction> mant_routes,
                std::vector<Effect> effects) {
    return GuardVariant{std::move(guards), std::move(exp_routes),
                        std::move(mant_routes), std::move(effects)};
}

struct Row {
    Criterion c;
    Row(int id, const char* label, std::uint8_t opv, std::uint8_t opm) {
        c.id = id;
        c.label = label;
        c.op_value = opv;
        c.op_mask = opm;
    }
    Row& s0(int v) { c.s0 = v; return *this; }
    Row& s1(int v) { c.s1 = v; return *this; }
    Row& ph(unsigned lo, int hi = -1) {
        c.ph_lo = static_cast<std::uint8_t>(lo);
        c.ph_hi = static_cast<std::uint8_t>(hi < 0 ? lo : hi);
        return *this;
    }
    Row& sides(bool exp, bool mant) {
        c.exp_active = exp;
        c.mant_active = mant;
        return *this;
    }
    Row& pre(std::vector<Effect> e) { c.pre_effects = std::move(e); return *this; }
    Row& var(GuardVariant v) { c.variants.push_back(std::move(v)); return *this; }
};

constexpr std::uint8_t kOpAddSub = 0b000;   // mask 0b110 covers ADD and SUB
constexpr std::uint8_t kMaskPair = 0b110;
constexpr std::uint8_t kMaskAll = 0b111;
constexpr std::uint8_t kOpMul = 0b010;
constexpr std::uint8_t kOpDiv = 0b011;
constexpr std::uint8_t kOpRead = 0b100;
constexpr std::uint8_t kOpDisp = 0b101;

using K = Effect::Kind;

std::vector<Criterion> build_rows() {
    std::vector<Criterion> rows;
    auto add = [&rows](Row& r) { rows.push_back(std::move(r.c)); };

    // ----- addition / subtraction ------------------------------------------
    // Ph0: exponent difference Af - Ag.
    add(Row(1, "exp difference", kOpAddSub, kMaskPair).ph(0).sides(true, false)
        .var(gv({}, {ra(RTarget::Aa, RSource::Af), ra(RTarget::Ab, RSource::Ag, Route::Negate)},
                {}, {fx(K::AdvancePhase)})));
    // Ph1: latch S1 from the sign of the difference, keep the difference.
    add(Row(2, "S1 ?", kOpAddSub, kMaskPair).ph(1).sides(true, false)
        .var(gv({Guard::AeNonNegative},
                {ra(RTarget::Aa, RSource::Ae)}, {}, {fx(K::SetS1True), fx(K::AdvancePhase)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)}, {}, {fx(K::SetS1False), fx(K::AdvancePhase)})));
    // Ph2: alignment counter |Ae| and the smaller mantissa into the Be path.
    // Equal exponents skip the alignment loop.
    add(Row(3, "select (G larger)", kOpAddSub, kMaskPair).s1(0).ph(2).sides(true, true)
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae, Route::Negate)},
                {ra(RTarget::Bb, RSource::Bf)}, {fx(K::SetPhase, 3)})));
    add(Row(4, "select (F larger)", kOpAddSub, kMaskPair).s1(1).ph(2).sides(true, true)
        .var(gv({Guard::AeZero}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Bb, RSource::Bg)}, {fx(K::SetPhase, 4)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Bb, RSource::Bg)}, {fx(K::SetPhase, 3)})));
    // Ph3: align loop, one right shift per cycle while the counter runs down.
    add(Row(5, "align ->", kOpAddSub, kMaskPair).ph(3).sides(true, true)
        .var(gv({Guard::AeOne},
                {ra(RTarget::Aa, RSource::Ae), ra(RTarget::Ab, RSource::ConstOne, Route::Negate)},
                {ra(RTarget::Ba, RSource::Be, Route::Half)}, {fx(K::SetPhase, 4)}))
        .var(gv({Guard::AeNonZero},
                {ra(RTarget::Aa, RSource::Ae), ra(RTarget::Ab, RSource::ConstOne, Route::Negate)},
                {ra(RTarget::Ba, RSource::Be, Route::Half)}, {})));
    // Ph4: the actual mantissa addition or subtraction; the exponent side
    // recovers the larger exponent.
    add(Row(6, "mant sub (G larger)", kOpAddSub, kMaskPair).s0(0).s1(0).ph(4).sides(true, true)
        .var(gv({}, {ra(RTarget::Ab, RSource::Ag)},
                {ra(RTarget::Ba, RSource::Bg), ra(RTarget::Bb, RSource::Be, Route::Negate)},
                {fx(K::AdvancePhase)})));
    add(Row(7, "mant add (G larger)", kOpAddSub, kMaskPair).s0(1).s1(0).ph(4).sides(true, true)
        .var(gv({}, {ra(RTarget::Ab, RSource::Ag)},
                {ra(RTarget::Ba, RSource::Bg), ra(RTarget::Bb, RSource::Be)},
                {fx(K::AdvancePhase)})));
    add(Row(8, "mant add (F larger)", kOpAddSub, kMaskPair).s0(1).s1(1).ph(4).sides(true, true)
        .var(gv({}, {ra(RTarget::Aa, RSource::Af)},
                {ra(RTarget::Ba, RSource::Bf), ra(RTarget::Bb, RSource::Be)},
                {fx(K::AdvancePhase)})));
    add(Row(9, "mant sub (F larger)", kOpAddSub, kMaskPair).s0(0).s1(1).ph(4).sides(true, true)
        .var(gv({}, {ra(RTarget::Aa, RSource::Af)},
                {ra(RTarget::Ba, RSource::Bf), ra(RTarget::Bb, RSource::Be, Route::Negate)},
                {fx(K::AdvancePhase)})));
    // Ph5 additions: right-normalize if the sum reached 2, then finish.
    add(Row(10, "finish addition", kOpAddSub, kMaskPair).s0(1).ph(5).sides(true, true)
        .var(gv({Guard::BeTwoOrMore},
                {ra(RTarget::Aa, RSource::Ae), ra(RTarget::Ab, RSource::ConstOne)},
                {ra(RTarget::Ba, RSource::Be, Route::Half)}, {fx(K::Finish)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::Finish)})));
    // Ph5 subtractions: complement a negative result, note it in S3.
    add(Row(11, "complement", kOpAddSub, kMaskPair).s0(0).ph(5).sides(true, true)
        .var(gv({Guard::BeNegative},
                {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be, Route::Negate)},
                {fx(K::SetS3), fx(K::AdvancePhase)}))
        .var(gv({Guard::BeZero},
                {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)},
                {fx(K::ZeroCheck), fx(K::AdvancePhase)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::AdvancePhase)})));
    // Ph6 subtractions: left-normalize and finish.
    add(Row(12, "align after sub", kOpAddSub, kMaskPair).s0(0).ph(6).sides(true, true)
        .var(gv({Guard::BeBit0One},
                {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::Finish)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)},
                {fx(K::NormalizeLeftFold), fx(K::Finish)})));

    // ----- multiplication ---------------------------------------------------
    add(Row(21, "exp sum", kOpMul, kMaskAll).ph(0).sides(true, true)
        .pre({fx(K::BeginSerialRead)})
        .var(gv({}, {ra(RTarget::Aa, RSource::Af), ra(RTarget::Ab, RSource::Ag)},
                {}, {fx(K::AdvancePhase)})));
    add(Row(24, "multiply step", kOpMul, kMaskAll).ph(1, 17).sides(true, true)
        .pre({fx(K::SerialLatchMm)})
        .var(gv({Guard::MmOne},
                {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be, Route::Half), ra(RTarget::Bb, RSource::Bg)},
                {fx(K::AdvancePhase)}))
        .var(gv({},
                {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be, Route::Half)},
                {fx(K::AdvancePhase)})));
    add(Row(26, "align product", kOpMul, kMaskAll).ph(18).sides(true, true)
        .var(gv({Guard::BeTwoOrMore},
                {ra(RTarget::Aa, RSource::Ae), ra(RTarget::Ab, RSource::ConstOne)},
                {ra(RTarget::Ba, RSource::Be, Route::Half)}, {fx(K::AdvancePhase)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::AdvancePhase)})));
    add(Row(27, "finish", kOpMul, kMaskAll).ph(19).sides(true, true)
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::Finish)})));

    // ----- division ----------------------------------------------------------
    add(Row(40, "exp difference", kOpDiv, kMaskAll).ph(0).sides(true, true)
        .pre({fx(K::BeginSerialWrite)})
        .var(gv({}, {ra(RTarget::Aa, RSource::Af), ra(RTarget::Ab, RSource::Ag, Route::Negate)},
                {ra(RTarget::Bb, RSource::Bf)}, {fx(K::AdvancePhase)})));
    add(Row(41, "first subtract", kOpDiv, kMaskAll).ph(1).sides(false, true)
        .var(gv({}, {},
                {ra(RTarget::Ba, RSource::Be), ra(RTarget::Bb, RSource::Bg, Route::Negate)},
                {})));
    add(Row(42, "quotient step", kOpDiv, kMaskAll).ph(2, 18).sides(false, true)
        .pre({fx(K::RecordQuotientBit)})
        .var(gv({Guard::BeNonNegative, Guard::PhBelow18}, {},
                {ra(RTarget::Ba, RSource::Be, Route::Double),
                 ra(RTarget::Bb, RSource::Bg, Route::Negate)}, {}))
        .var(gv({Guard::BeNegative, Guard::PhBelow18}, {},
                {ra(RTarget::Ba, RSource::Be, Route::Double),
                 ra(RTarget::Bb, RSource::Bg)}, {}))
        .var(gv({}, {}, {}, {})));
    add(Row(43, "exp hold", kOpDiv, kMaskAll).ph(1, 18).sides(true, false)
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)}, {}, {fx(K::AdvancePhase)})));
    add(Row(44, "Bf -> Bb", kOpDiv, kMaskAll).ph(19).sides(true, true)
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Bb, RSource::Bf)}, {fx(K::AdvancePhase)})));
    add(Row(45, "align <-", kOpDiv, kMaskAll).ph(20).sides(true, true)
        .var(gv({Guard::BeBit0Zero},
                {ra(RTarget::Aa, RSource::Ae), ra(RTarget::Ab, RSource::ConstOne, Route::Negate)},
                {ra(RTarget::Ba, RSource::Be, Route::Double)}, {fx(K::Finish)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::Finish)})));

    // ----- decimal -> binary (READ) ------------------------------------------
    add(Row(50, "ready ?", kOpRead, kMaskAll).ph(0).sides(false, true)
        .var(gv({}, {}, {}, {fx(K::AdvancePhase)})));
    add(Row(51, "1. digit", kOpRead, kMaskAll).ph(1).sides(false, true)
        .var(gv({}, {}, {ra(RTarget::Ba, RSource::Digit, Route::Identity, 3)},
                {fx(K::AdvancePhase)})));
    add(Row(52, "x 10", kOpRead, kMaskAll).ph(2).sides(false, true)
        .var(gv({}, {},
                {ra(RTarget::Ba, RSource::Be, Route::Double),
                 ra(RTarget::Bb, RSource::Be, Route::Octuple)}, {fx(K::AdvancePhase)})));
    add(Row(53, "2. digit", kOpRead, kMaskAll).ph(3).sides(false, true)
        .var(gv({}, {},
                {ra(RTarget::Ba, RSource::Digit, Route::Identity, 2),
                 ra(RTarget::Bb, RSource::Be)}, {fx(K::AdvancePhase)})));
    add(Row(54, "x 10", kOpRead, kMaskAll).ph(4).sides(false, true)
        .var(gv({}, {},
                {ra(RTarget::Ba, RSource::Be, Route::Double),
                 ra(RTarget::Bb, RSource::Be, Route::Octuple)}, {fx(K::AdvancePhase)})));
    add(Row(55, "3. digit", kOpRead, kMaskAll).ph(5).sides(false, true)
        .var(gv({}, {},
                {ra(RTarget::Ba, RSource::Digit, Route::Identity, 1),
                 ra(RTarget::Bb, RSource::Be)}, {fx(K::AdvancePhase)})));
    add(Row(56, "x 10", kOpRead, kMaskAll).ph(6).sides(false, true)
        .var(gv({}, {},
                {ra(RTarget::Ba, RSource::Be, Route::Double),
                 ra(RTarget::Bb, RSource::Be, Route::Octuple)}, {fx(K::AdvancePhase)})));
    add(Row(57, "4. digit, exp 13", kOpRead, kMaskAll).ph(7).sides(true, true)
        .var(gv({}, {ra(RTarget::Ab, RSource::ConstThirteen)},
                {ra(RTarget::Ba, RSource::Digit, Route::Identity, 0),
                 ra(RTarget::Bb, RSource::Be)}, {fx(K::AdvancePhase)})));
    add(Row(58, "align <-", kOpRead, kMaskAll).ph(8).sides(true, true)
        .var(gv({Guard::BeZero}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)},
                {fx(K::ZeroCheck), fx(K::SetPhase, 9)}))
        .var(gv({Guard::BeBit0One}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::SetPhase, 9)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae), ra(RTarget::Ab, RSource::ConstOne, Route::Negate)},
                {ra(RTarget::Ba, RSource::Be, Route::Double)}, {})));
    add(Row(59, "mult. with L,OL", kOpRead, kMaskAll).ph(9).sides(true, true)
        .var(gv({Guard::LeverPositive, Guard::BeTwoOrMore},
                {ra(RTarget::Aa, RSource::Ae), ra(RTarget::Ab, RSource::ConstOne)},
                {ra(RTarget::Ba, RSource::Be, Route::Half)}, {}))
        .var(gv({Guard::LeverPositive},
                {ra(RTarget::Aa, RSource::Ae), ra(RTarget::Ab, RSource::ConstThree)},
                {ra(RTarget::Ba, RSource::Be), ra(RTarget::Bb, RSource::Be, Route::Quarter)},
                {fx(K::LeverDec)}))
        .var(gv({Guard::LeverNegative}, {}, {},
                {fx(K::SuspendDivTen), fx(K::LeverInc)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::SetPhase, 10)})));
    add(Row(60, "align ->", kOpRead, kMaskAll).ph(10).sides(true, true)
        .var(gv({Guard::BeTwoOrMore},
                {ra(RTarget::Aa, RSource::Ae), ra(RTarget::Ab, RSource::ConstOne)},
                {ra(RTarget::Ba, RSource::Be, Route::Half)}, {fx(K::Finish)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::Finish)})));

    // ----- binary -> decimal (DISP) -------------------------------------------
    add(Row(70, "setup operands", kOpDisp, kMaskAll).ph(0).sides(true, true)
        .var(gv({}, {ra(RTarget::Aa, RSource::Af)},
                {ra(RTarget::Bb, RSource::Bf)},
                {fx(K::AccSetup), fx(K::AdvancePhase)})));
    add(Row(71, "range scaling", kOpDisp, kMaskAll).ph(1).sides(true, true)
        .var(gv({Guard::AccGE16}, {}, {}, {fx(K::AccScaleDown16)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::AdvancePhase)})));
    add(Row(72, "point setting", kOpDisp, kMaskAll).ph(2).sides(true, true)
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Bb, RSource::Be, Route::Quarter)}, {fx(K::AdvancePhase)})));
    add(Row(73, "mult. with 10", kOpDisp, kMaskAll).ph(3).sides(true, true)
        .var(gv({Guard::AccBelowTenth}, {}, {}, {fx(K::AccMul10ArrowDec)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::AdvancePhase)})));
    add(Row(74, "align ->", kOpDisp, kMaskAll).ph(4).sides(true, true)
        .var(gv({Guard::AccGEOne}, {}, {}, {fx(K::AccDiv10ArrowInc)}))
        .var(gv({}, {ra(RTarget::Aa, RSource::Ae)},
                {ra(RTarget::Ba, RSource::Be)}, {fx(K::AdvancePhase)})));
    add(Row(75, "digit d3", kOpDisp, kMaskAll).ph(5).sides(false, true)
        .var(gv({}, {}, {}, {fx(K::AccExtractDigit, 3), fx(K::AdvancePhase)})));
    add(Row(76, "digit d2", kOpDisp, kMaskAll).ph(6).sides(false, true)
        .var(gv({}, {}, {}, {fx(K::AccExtractDigit, 2), fx(K::AdvancePhase)})));
    add(Row(77, "digit d1", kOpDisp, kMaskAll).ph(7).sides(false, true)
        .var(gv({}, {}, {}, {fx(K::AccExtractDigit, 1), fx(K::AdvancePhase)})));
    add(Row(78, "digit d0, show", kOpDisp, kMaskAll).ph(8).sides(true, true)
        .var(gv({}, {}, {}, {fx(K::AccExtractDigit, 0), fx(K::DisplayFinish)})));

    return rows;
}

} // namespace

MicroTable::MicroTable() : rows_(build_rows()) {
    static_check();
}

const MicroTable& MicroTable::instance() {
    static MicroTable table;
    return table;
}

const Criterion* MicroTable::match_side(bool mantissa_side, MicroOp op, bool s0,
                                        bool s1, unsigned ph) const {
    const Criterion* found = nullptr;
    for (const Criterion& c : rows_) {
        bool active = mantissa_side ? c.mant_active : c.exp_active;
        if (!active || !c.matches(op, s0, s1, ph)) {
            continue;
        }
        if (found) {
            throw ConstructionError("criteria " + std::to_string(found->id) + " and " +
                                    std::to_string(c.id) + " both match on one side");
        }
        found = &c;
    }
    return found;
}

void MicroTable::static_check() const {
    for (unsigned opv = 0; opv < 6; ++opv) {
        MicroOp op = static_cast<MicroOp>(opv);
        for (int s0 = 0; s0 < 2; ++s0) {
            for (int s1 = 0; s1 < 2; ++s1) {
                for (unsigned ph = 0; ph < 32; ++ph) {
                    match_side(false, op, s0 != 0, s1 != 0, ph);
                    match_side(true, op, s0 != 0, s1 != 0, ph);
                }
            }
        }
    }
}

std::string MicroTable::listing() const {
    std::ostringstream os;
    for (const Criterion& c : rows_) {
        os << c.id << '\t' << c.label << '\t';
        os << ((c.exp_active && c.mant_active) ? "exp+mant"
               : c.exp_active ? "exp" : "mant");
        os << "\top=";
        for (int b = 2; b >= 0; --b) {
            os << (((c.op_mask >> b) & 1) ? char('0' + ((c.op_value >> b) & 1)) : 'x');
        }
        os << " S0=" << (c.s0 < 0 ? "x" : std::to_string(c.s0))
           << " S1=" << (c.s1 < 0 ? "x" : std::to_string(c.s1))
           << " Ph=" << static_cast<int>(c.ph_lo);
        if (c.ph_hi != c.ph_lo) {
            os << ".." << static_cast<int>(c.ph_hi);
        }
        for (const Effect& e : c.pre_effects) {
            os << " pre:" << effect_name(e.kind);
        }
        for (const GuardVariant& v : c.variants) {
            os << "\t[";
            if (v.guards.empty()) {
                os << guard_name(Guard::Always);
            }
            for (std::size_t i = 0; i < v.guards.size(); ++i) {
                os << (i ? "&" : "") << guard_name(v.guards[i]);
            }
            os << "]";
            for (const RouteAction& a : v.exp_routes) {
                os << ' ' << a.to_string();
            }
            for (const RouteAction& a : v.mant_routes) {
                os << ' ' << a.to_string();
            }
            for (const Effect& e : v.effects) {
                os << ' ' << effect_name(e.kind);
                if (e.kind == K::SetPhase || e.kind == K::AccExtractDigit) {
                    os << e.arg;
                }
            }
        }
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Constants stored in the machine for the conversion paths.
// ---------------------------------------------------------------------------

Word24 stored_tenth_constant() {
    // 1/10 = 1.1001100110011001100...b * 2^-4, fraction truncated to 16 bits
    return pack(0, -4, 0x9999);
}

Word24 stored_ten_pow_minus16() {
    // 10^-16 = 1.1100110101101001...b * 2^-54 (fraction truncated)
    return pack(0, -54, 0xCD2B);
}

std::string DisplayRecord::to_string() const {
    std::ostringstream os;
    os << digits[3] << ' ' << digits[2] << ' ' << digits[1] << ' ' << digits[0]
       << " x10^" << arrow << ' ' << (sign ? '-' : '+');
    return os.str();
}

// ---------------------------------------------------------------------------
// The runner: a generic interpreter of the criterion table.
// ---------------------------------------------------------------------------
namespace {

constexpr int kMaxCyclesPerInstruction = 4096;

class Runner {
public:
    explicit Runner(const ExecOptions& opts)
        : opts_(opts), table_(MicroTable::instance()) {}

    ExecResult run_arith(MicroOp op, const Word24& f, const Word24& g);
    ExecResult run_read(const PanelInput& panel);
    ExecResult run_disp(const Word24& f);

private:
    ExecOptions opts_;
    const MicroTable& table_;
    ProcessorState st_;
    SerialUnit serial_;
    ExecResult res_;
    bool finished_ = false;
    bool advance_ = false;
    int set_phase_ = -1;

    Word24 operand_f_{};
    PanelInput panel_{};
    int lever_remaining_ = 0;
    Rational acc_ = 0;
    int arrow_ = 0;
    std::array<int, 4> out_digits_{};
    unsigned eff_sign_f_ = 0, eff_sign_g_ = 0;

    void loop();
    void cycle();
    bool guard_holds(Guard g) const;
    const GuardVariant* select_variant(const Criterion& c) const;
    void pre_effect(const Effect& e);
    void post_effect(const Effect& e);
    void finish();
    void suspend_multiplication(const Word24& multiplicand);
    void record(int exp_id, int mant_id, unsigned ph_at_start);
    Word24 register_image() const;
};

ExecResult Runner::run_arith(MicroOp op, const Word24& f, const Word24& g) {
    st_ = ProcessorState{};
    st_.Op = static_cast<unsigned>(op);
    st_.Af = Exp7::from_int(f.exponent);
    st_.Bf = ProcMantissa::from_fraction(f.fraction);
    st_.sign_F = f.sign;
    st_.Ag = Exp7::from_int(g.exponent);
    st_.Bg = ProcMantissa::from_fraction(g.fraction);
    st_.sign_G = g.sign;
    operand_f_ = f;
    if (op == MicroOp::Add || op == MicroOp::Sub) {
        // the sign unit distributes the signs over the mantissa operation
        eff_sign_f_ = f.sign;
        eff_sign_g_ = (op == MicroOp::Sub) ? (g.sign ^ 1u) : g.sign;
        st_.S0 = eff_sign_f_ == eff_sign_g_;
    } else {
        // product/quotient sign is computed in advance
        st_.sign_result = f.sign ^ g.sign;
    }
    loop();
    return std::move(res_);
}

ExecResult Runner::run_read(const PanelInput& panel) {
    for (int d : panel.digits) {
        if (d < 0 || d > 9) {
            throw PanelError("digit selector outside 0..9");
        }
    }
    if (panel.lever < -8 || panel.lever > 8) {
        throw PanelError("decimal exponent lever outside -8..8");
    }
    st_ = ProcessorState{};
    st_.Op = static_cast<unsigned>(MicroOp::Read);
    panel_ = panel;
    lever_remaining_ = panel.lever;
    loop();
    return std::move(res_);
}

ExecResult Runner::run_disp(const Word24& f) {
    st_ = ProcessorState{};
    st_.Op = static_cast<unsigned>(MicroOp::Disp);
    st_.Af = Exp7::from_int(f.exponent);
    st_.Bf = ProcMantissa::from_fraction(f.fraction);
    st_.sign_F = f.sign;
    operand_f_ = f;
    res_.result = f;  // the display does not consume the register
    loop();
    return std::move(res_);
}

void Runner::loop() {
    finished_ = false;
    while (!finished_) {
        if (res_.cycles > kMaxCyclesPerInstruction) {
            throw SequencerError("instruction exceeded " +
                                 std::to_string(kMaxCyclesPerInstruction) + " cycles");
        }
        cycle();
    }
}

bool Runner::guard_holds(Guard g) const {
    switch (g) {
    case Guard::Always: return true;
    case Guard::AeNonNegative: return st_.Ae.value() >= 0;
    case Guard::AeZero: return st_.Ae.raw() == 0;
    case Guard::AeNonZero: return st_.Ae.raw() != 0;
    case Guard::AeOne: return st_.Ae.value() == 1;
    case Guard::BeNegative: return st_.Be.is_negative();
    case Guard::BeNonNegative: return !st_.Be.is_negative();
    case Guard::BeZero: return st_.Be.is_zero();
    case Guard::BeBit0One: return st_.Be.bit(0) == 1;
    case Guard::BeBit0Zero: return st_.Be.bit(0) == 0;
    case Guard::BeTwoOrMore: return st_.Be.bit(1) == 1;
    case Guard::MmOne: return st_.mm == 1;
    case Guard::MmZero: return st_.mm == 0;
    case Guard::PhBelow18: return st_.Ph < 18;
    case Guard::LeverPositive: return lever_remaining_ > 0;
    case Guard::LeverNegative: return lever_remaining_ < 0;
    case Guard::LeverZero: return lever_remaining_ == 0;
    case Guard::AccGE16: return acc_ >= 16;
    case Guard::AccBelowTenth: return acc_ < Rational(1, 10);
    case Guard::AccGEOne: return acc_ >= 1;
    }
    return false;
}

const GuardVariant* Runner::select_variant(const Criterion& c) const {
    for (const GuardVariant& v : c.variants) {
        bool ok = true;
        for (Guard g : v.guards) {
            if (!guard_holds(g)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return &v;
        }
    }
    return nullptr;
}

void Runner::pre_effect(const Effect& e) {
    switch (e.kind) {
    case K::BeginSerialRead:
        serial_.begin(SerialDirection::LowToHigh);
        break;
    case K::BeginSerialWrite:
        serial_.begin(SerialDirection::HighToLow);
        break;
    case K::SerialLatchMm:
        serial_.read_bit(st_);
        break;
    case K::RecordQuotientBit:
        serial_.write_bit(st_, st_.Be.is_negative() ? 0u : 1u);
        break;
    default:
        throw SequencerError("effect not allowed before routing");
    }
}

Word24 Runner::register_image() const {
    return pack(0, st_.Ae.value(), st_.Be.to_fraction());
}

void Runner::suspend_multiplication(const Word24& multiplicand) {
    Runner nested(opts_);
    ExecResult sub = nested.run_arith(MicroOp::Mul, register_image(), multiplicand);
    res_.cycles += sub.cycles;
    for (CycleRecord& r : sub.fired) {
        r.suspended = true;
        r.cycle = res_.fired.empty() ? r.cycle : res_.fired.back().cycle + 1;
        if (opts_.record_cycles) {
            res_.fired.push_back(r);
        }
    }
    for (Diagnostic& d : sub.diagnostics) {
        res_.diagnostics.push_back(std::move(d));
    }
    st_.Ae = Exp7::from_int(sub.result.exponent);
    st_.Be = ProcMantissa::from_fraction(sub.result.fraction);
}

void Runner::post_effect(const Effect& e) {
    switch (e.kind) {
    case K::AdvancePhase:
        advance_ = true;
        break;
    case K::SetPhase:
        set_phase_ = e.arg;
        break;
    case K::SetS1True:
        st_.S1 = true;
        break;
    case K::SetS1False:
        st_.S1 = false;
        break;
    case K::SetS3:
        st_.S3 = true;
        break;
    case K::Finish:
        finish();
        break;
    case K::ZeroCheck:
        if (opts_.strict_zero) {
            throw ZeroUnsupported("mantissa became zero; the machine has no "
                                  "representation for zero");
        }
        res_.zero_flagged = true;
        res_.diagnostics.push_back(Diagnostic{Diagnostic::Kind::ZeroMantissa,
                                              "zero mantissa, continuing with "
                                              "unnormalizable value"});
        st_.Ae = Exp7::from_int(-64);
        break;
    case K::NormalizeLeftFold: {
        if (st_.Be.is_zero()) {
            break;  // flagged garbage path, exponent already pinned
        }
        int count = 0;
        ProcMantissa m = st_.Be;
        while (m.bit(0) == 0) {
            m = m.shifted_left(1);
            ++count;
        }
        st_.Be = m;
        int ev = st_.Ae.value() - count;
        if (ev < kExponentMin) {
            res_.diagnostics.push_back(Diagnostic{Diagnostic::Kind::ExponentOverflow,
                                                  "exponent underflow while normalizing"});
        }
        st_.Ae = Exp7::from_int(ev);
        break;
    }
    case K::LeverDec:
        --lever_remaining_;
        break;
    case K::LeverInc:
        ++lever_remaining_;
        break;
    case K::SuspendDivTen:
        suspend_multiplication(stored_tenth_constant());
        break;
    case K::AccSetup:
        acc_ = boost::multiprecision::abs(value_of(operand_f_));
        arrow_ = 0;
        break;
    case K::AccScaleDown16:
        suspend_multiplication(stored_ten_pow_minus16());
        acc_ /= Rational(BigInt(10000000000000000LL));
        arrow_ += 16;
        break;
    case K::AccMul10ArrowDec:
        acc_ *= 10;
        --arrow_;
        st_.Be = ProcMantissa(
            static_cast<std::uint32_t>(BigInt(boost::multiprecision::numerator(acc_) * (BigInt(1) << 20) /
                                              boost::multiprecision::denominator(acc_)) &
                                       0x7FFFFF));
        break;
    case K::AccDiv10ArrowInc:
        acc_ /= 10;
        ++arrow_;
        st_.Be = ProcMantissa(
            static_cast<std::uint32_t>(BigInt(boost::multiprecision::numerator(acc_) * (BigInt(1) << 20) /
                                              boost::multiprecision::denominator(acc_)) &
                                       0x7FFFFF));
        break;
    case K::AccExtractDigit: {
        acc_ *= 10;
        BigInt whole = boost::multiprecision::numerator(acc_) /
                       boost::multiprecision::denominator(acc_);
        int d = static_cast<int>(whole);
        out_digits_[e.arg] = d;
        acc_ -= d;
        st_.Be = ProcMantissa(
            static_cast<std::uint32_t>(BigInt(boost::multiprecision::numerator(acc_) * (BigInt(1) << 20) /
                                              boost::multiprecision::denominator(acc_)) &
                                       0x7FFFFF));
        break;
    }
    case K::DisplayFinish: {
        DisplayRecord rec;
        rec.digits = out_digits_;
        rec.arrow = arrow_;
        rec.sign = st_.sign_F;
        rec.range_ok = arrow_ >= kArrowMin && arrow_ <= kArrowMax;
        if (!rec.range_ok) {
            res_.diagnostics.push_back(Diagnostic{Diagnostic::Kind::DisplayRange,
                                                  "decimal exponent arrow " +
                                                      std::to_string(arrow_) +
                                                      " beyond the display"});
        }
        res_.display = rec;
        finished_ = true;
        break;
    }
    default:
        throw SequencerError("pre-route effect in post position");
    }
}

void Runner::finish() {
    MicroOp op = static_cast<MicroOp>(st_.Op);
    unsigned sign = 0;
    switch (op) {
    case MicroOp::Add:
    case MicroOp::Sub:
        if (st_.S0) {
            sign = eff_sign_f_;  // both effective signs equal
        } else {
            // sign of the larger operand, flipped if the result was complemented
            unsigned prelim = st_.S1 ? eff_sign_f_ : eff_sign_g_;
            sign = prelim ^ (st_.S3 ? 1u : 0u);
        }
        break;
    case MicroOp::Mul:
    case MicroOp::Div:
        sign = st_.sign_result;
        break;
    case MicroOp::Read:
        sign = panel_.sign;
        break;
    case MicroOp::Disp:
        break;
    }
    if (st_.Be.is_zero()) {
        if (!res_.zero_flagged) {
            throw SequencerError("finish with unflagged zero mantissa");
        }
        res_.result = pack(sign, st_.Ae.value(), 0);
    } else {
        if (!st_.Be.is_normalized()) {
            throw SequencerError("finish with unnormalized mantissa");
        }
        res_.result = pack(sign, st_.Ae.value(), st_.Be.to_fraction());
    }
    st_.sign_result = sign;
    finished_ = true;
}

void Runner::record(int exp_id, int mant_id, unsigned ph_at_start) {
    if (!opts_.record_cycles) {
        return;
    }
    CycleRecord r;
    r.cycle = res_.fired.empty() ? 0 : res_.fired.back().cycle + 1;
    r.ph = ph_at_start;
    r.exp_id = exp_id;
    r.mant_id = mant_id;
    r.suspended = false;
    r.ae_raw = st_.Ae.raw();
    r.be_raw = st_.Be.raw();
    r.s0 = st_.S0;
    r.s1 = st_.S1;
    r.s3 = st_.S3;
    r.mm = st_.mm;
    res_.fired.push_back(r);
}

void Runner::cycle() {
    MicroOp op = static_cast<MicroOp>(st_.Op);
    unsigned ph = st_.Ph;
    const Criterion* exp_c = table_.match_side(false, op, st_.S0, st_.S1, ph);
    const Criterion* mant_c = table_.match_side(true, op, st_.S0, st_.S1, ph);
    if (!exp_c && !mant_c) {
        throw SequencerError("no criterion matches " + std::string(micro_op_name(op)) +
                             " at phase " + std::to_string(ph));
    }

    std::vector<const Criterion*> fired;
    if (exp_c) {
        fired.push_back(exp_c);
    }
    if (mant_c && mant_c != exp_c) {
        fired.push_back(mant_c);
    }

    advance_ = false;
    set_phase_ = -1;

    for (const Criterion* c : fired) {
        for (const Effect& e : c->pre_effects) {
            pre_effect(e);
        }
    }

    std::vector<const GuardVariant*> selected;
    bool suspends = false;
    for (const Criterion* c : fired) {
        const GuardVariant* v = select_variant(*c);
        if (!v) {
            throw SequencerError("criterion " + std::to_string(c->id) +
                                 ": no guarded alternative applies");
        }
        selected.push_back(v);
        for (const Effect& e : v->effects) {
            if (e.kind == K::SuspendDivTen || e.kind == K::AccScaleDown16) {
                suspends = true;
            }
        }
    }

    if (!suspends) {
        std::vector<RouteAction> routes;
        for (std::size_t i = 0; i < fired.size(); ++i) {
            const Criterion* c = fired[i];
            const GuardVariant* v = selected[i];
            if (c->exp_active) {
                routes.insert(routes.end(), v->exp_routes.begin(), v->exp_routes.end());
            }
            if (c->mant_active) {
                routes.insert(routes.end(), v->mant_routes.begin(), v->mant_routes.end());
            }
        }
        apply_route(st_, routes, panel_.digits.data(), &res_.diagnostics);
        alu_cycle(st_, &res_.diagnostics);
        ++res_.cycles;
        for (const GuardVariant* v : selected) {
            for (const Effect& e : v->effects) {
                post_effect(e);
                if (finished_) {
                    break;
                }
            }
        }
        record(exp_c ? exp_c->id : -1, mant_c ? mant_c->id : -1, ph);
    } else {
        // The conversion stays suspended for exactly the cycles the nested
        // multiplication needs; its cycles are recorded in our stead.
        for (const GuardVariant* v : selected) {
            for (const Effect& e : v->effects) {
                post_effect(e);
            }
        }
    }

    if (!finished_) {
        if (set_phase_ >= 0) {
            st_.Ph = static_cast<unsigned>(set_phase_) & 31u;
        } else if (advance_) {
            st_.Ph = (st_.Ph + 1) & 31u;
        }
    }
}

} // namespace

ExecResult run_add_sub(const Word24& f, const Word24& g, bool subtract,
                       const ExecOptions& opts) {
    Runner r(opts);
    return r.run_arith(subtract ? MicroOp::Sub : MicroOp::Add, f, g);
}

ExecResult run_mul(const Word24& f, const Word24& g, const ExecOptions& opts) {
    Runner r(opts);
    return r.run_arith(MicroOp::Mul, f, g);
}

ExecResult run_div(const Word24& f, const Word24& g, const ExecOptions& opts) {
    Runner r(opts);
    return r.run_arith(MicroOp::Div, f, g);
}

ExecResult run_dec2bin(const PanelInput& panel, const ExecOptions& opts) {
    Runner r(opts);
    return r.run_read(panel);
}

ExecResult run_bin2dec(const Word24& f, const ExecOptions& opts) {
    Runner r(opts);
    return r.run_disp(f);
}

} // namespace z1
