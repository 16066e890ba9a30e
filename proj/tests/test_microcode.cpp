#include "doctest.h"

#include <random>

#include "oracle.hpp"
#include "testutil.hpp"
#include "z1/microcode.hpp"

using namespace z1;

namespace {

oracle::WordFields fields(const Word24& w) {
    return oracle::WordFields{w.sign, w.exponent, w.fraction};
}

std::vector<int> side_ids(const ExecResult& r, bool mantissa) {
    std::vector<int> ids;
    for (const CycleRecord& c : r.fired) {
        if (!c.suspended) {
            ids.push_back(mantissa ? c.mant_id : c.exp_id);
        }
    }
    return ids;
}

} // namespace

TEST_CASE("the table passes its exhaustive pattern check") {
    CHECK_NOTHROW(MicroTable::instance().static_check());
}

TEST_CASE("the table listing names every row once") {
    std::string text = MicroTable::instance().listing();
    for (int id : {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 21, 24, 26, 27,
                   40, 41, 42, 43, 44, 45, 50, 51, 52, 53, 54, 55, 56, 57, 58,
                   59, 60, 70, 71, 72, 73, 74, 75, 76, 77, 78}) {
        CAPTURE(id);
        CHECK(text.find(std::to_string(id) + "\t") != std::string::npos);
    }
}

TEST_CASE("criterion selection per state") {
    const MicroTable& t = MicroTable::instance();
    // ADD at phase 0 selects row 1 on the exponent side, mantissa idle
    CHECK(t.match_side(false, MicroOp::Add, false, false, 0)->id == 1);
    CHECK(t.match_side(true, MicroOp::Add, false, false, 0) == nullptr);
    // multiplication: step row through phase 17, alignment at 18
    CHECK(t.match_side(true, MicroOp::Mul, false, false, 17)->id == 24);
    CHECK(t.match_side(true, MicroOp::Mul, false, false, 18)->id == 26);
    // unreachable pattern: ADD at phase 31 matches nothing
    CHECK(t.match_side(false, MicroOp::Add, false, false, 31) == nullptr);
    CHECK(t.match_side(true, MicroOp::Add, false, false, 31) == nullptr);
}

// ---------------------------------------------------------------------------
// addition / subtraction
// ---------------------------------------------------------------------------

TEST_CASE("1.0 + 1.0 = 2.0 in exactly five cycles") {
    ExecResult r = run_add_sub(pack(0, 0, 0), pack(0, 0, 0), false);
    CHECK(r.result == pack(0, 1, 0));
    CHECK(r.cycles == 5);
    CHECK(side_ids(r, false) == std::vector<int>{1, 2, 4, 8, 10});
    CHECK(side_ids(r, true) == std::vector<int>{-1, -1, 4, 8, 10});
}

TEST_CASE("12 - 8 = 4: subtraction with one renormalize shift, six cycles") {
    ExecResult r = run_add_sub(pack(0, 3, 0x8000), pack(0, 3, 0x0000), true);
    CHECK(r.result == pack(0, 2, 0));
    CHECK(r.cycles == 6);
    CHECK(side_ids(r, false) == std::vector<int>{1, 2, 4, 9, 11, 12});
}

TEST_CASE("3 - 5 = -2: the sign arrives via the sign negotiation") {
    ExecResult r = run_add_sub(pack(0, 1, 0x8000), pack(0, 2, 0x4000), true);
    CHECK(r.result == pack(1, 1, 0));
    CHECK(r.cycles == 7);  // one alignment shift
}

TEST_CASE("aligned addition costs 5 cycles plus the exponent distance") {
    // 8 + 1: distance 3
    ExecResult r = run_add_sub(pack(0, 3, 0), pack(0, 0, 0), false);
    CHECK(r.result == pack(0, 3, 0x2000));  // 9 = 1.001b * 2^3
    CHECK(r.cycles == 8);
}

TEST_CASE("x - x has no representable result") {
    testutil::WordGen gen(71);
    for (int i = 0; i < 50; ++i) {
        Word24 x = gen.next();
        CHECK_THROWS_AS(run_add_sub(x, x, true), ZeroUnsupported);
    }
    SUBCASE("permissive mode flags and continues") {
        Word24 x = pack(0, 5, 0x1234);
        ExecOptions opts;
        opts.strict_zero = false;
        ExecResult r = run_add_sub(x, x, true, opts);
        CHECK(r.zero_flagged);
        CHECK(r.result.fraction == 0);
        CHECK(r.result.exponent == -64);
        bool has_flag = false;
        for (const Diagnostic& d : r.diagnostics) {
            has_flag |= d.kind == Diagnostic::Kind::ZeroMantissa;
        }
        CHECK(has_flag);
    }
}

TEST_CASE("addition commutes at the result level") {
    testutil::WordGen gen(72);
    for (int i = 0; i < 2000; ++i) {
        Word24 x = gen.next();
        Word24 y = gen.next();
        ExecResult a = run_add_sub(x, y, false);
        ExecResult b = run_add_sub(y, x, false);
        REQUIRE(a.result == b.result);
    }
}

TEST_CASE("add/sub equals the truncation-model oracle") {
    testutil::WordGen gen(73);
    int done = 0;
    while (done < 5000) {
        Word24 f = gen.next();
        Word24 g = gen.next();
        bool subtract = (done & 1) != 0;
        auto expect = oracle::add_sub_expected(fields(f), fields(g), subtract);
        if (!expect) {
            CHECK_THROWS_AS(run_add_sub(f, g, subtract), ZeroUnsupported);
            continue;
        }
        ExecResult r = run_add_sub(f, g, subtract);
        REQUIRE(r.result == pack(expect->sign, expect->exponent, expect->fraction));
        ++done;
    }
}

// ---------------------------------------------------------------------------
// multiplication
// ---------------------------------------------------------------------------

TEST_CASE("powers of two multiply exactly") {
    ExecResult r = run_mul(pack(0, 9, 0), pack(0, -3, 0));
    CHECK(r.result == pack(0, 6, 0));
    CHECK(r.cycles == 20);
}

TEST_CASE("1.5 * 1.5 = 2.25") {
    ExecResult r = run_mul(pack(0, 0, 0x8000), pack(0, 0, 0x8000));
    CHECK(r.result == pack(0, 1, 0x2000));  // 1.001b * 2^1
    CHECK(r.cycles == 20);
    CHECK(side_ids(r, false) ==
          std::vector<int>{21, 24, 24, 24, 24, 24, 24, 24, 24, 24, 24, 24, 24,
                           24, 24, 24, 24, 24, 26, 27});
}

TEST_CASE("multiplication takes twenty cycles for every operand pair") {
    testutil::WordGen gen(74);
    for (int i = 0; i < 1000; ++i) {
        ExecResult r = run_mul(gen.next(), gen.next());
        REQUIRE(r.cycles == 20);
    }
}

TEST_CASE("product sign is the XOR of the argument signs") {
    ExecResult r = run_mul(pack(0, 0, 0x8000), pack(1, 0, 0x4000));
    CHECK(r.result.sign == 1);
    r = run_mul(pack(1, 0, 0x8000), pack(1, 0, 0x4000));
    CHECK(r.result.sign == 0);

    SUBCASE("for every random pair, mul and div") {
        testutil::WordGen gen(82);
        for (int i = 0; i < 2000; ++i) {
            Word24 f = gen.next();
            Word24 g = gen.next();
            REQUIRE(run_mul(f, g).result.sign == (f.sign ^ g.sign));
            REQUIRE(run_div(f, g).result.sign == (f.sign ^ g.sign));
        }
    }
}

TEST_CASE("multiplication stays within the truncation bound") {
    testutil::WordGen gen(75);
    for (int i = 0; i < 5000; ++i) {
        Word24 f = gen.next();
        Word24 g = gen.next();
        ExecResult r = run_mul(f, g);
        Rational exact = oracle::mul_exact(fields(f), fields(g));
        Rational err = boost::multiprecision::abs(value_of(r.result) - exact);
        REQUIRE(err <= pow2(r.result.exponent - 15));
    }
}

// ---------------------------------------------------------------------------
// division
// ---------------------------------------------------------------------------

TEST_CASE("x / x = 1.0") {
    testutil::WordGen gen(76);
    for (int i = 0; i < 200; ++i) {
        Word24 x = gen.next();
        ExecResult r = run_div(x, x);
        REQUIRE(r.result == pack(x.sign ^ x.sign, 0, 0));
        REQUIRE(r.cycles == 21);
    }
}

TEST_CASE("3 / 1 = 3") {
    ExecResult r = run_div(pack(0, 1, 0x8000), pack(0, 0, 0));
    CHECK(r.result == pack(0, 1, 0x8000));
    CHECK(r.cycles == 21);
}

TEST_CASE("2/3: the seventeen-bit quotient, then one normalize shift") {
    // 1.0 / 1.1b: quotient bits floor(2/3 * 2^16) = 0xAAAA, shifted left once
    ExecResult r = run_div(pack(0, 0, 0), pack(0, 0, 0x8000));
    CHECK(r.result == pack(0, -1, 0x5554));
    CHECK(r.cycles == 21);
    CHECK(side_ids(r, true) ==
          std::vector<int>{40, 41, 42, 42, 42, 42, 42, 42, 42, 42, 42, 42, 42,
                           42, 42, 42, 42, 42, 42, 44, 45});
}

TEST_CASE("the quotient equals the restoring-division oracle bit for bit") {
    testutil::WordGen gen(77);
    for (int i = 0; i < 10000; ++i) {
        Word24 f = gen.next();
        Word24 g = gen.next();
        ExecResult r = run_div(f, g);
        std::uint32_t q = oracle::restoring_quotient(0x10000u | f.fraction,
                                                     0x10000u | g.fraction);
        // reconstruct the machine's quotient register before normalization
        int e = f.exponent - g.exponent;
        std::uint32_t mach;
        if (q & 0x10000u) {
            mach = q;  // already normalized
        } else {
            mach = (q << 1) & 0x1FFFF;
            e -= 1;
        }
        REQUIRE(r.result.fraction == (mach & 0xFFFF));
        REQUIRE(int(r.result.exponent) == e);
        REQUIRE(r.cycles == 21);
    }
}

TEST_CASE("division stays within the truncation bound") {
    testutil::WordGen gen(78);
    for (int i = 0; i < 5000; ++i) {
        Word24 f = gen.next();
        Word24 g = gen.next();
        ExecResult r = run_div(f, g);
        Rational exact = oracle::div_exact(fields(f), fields(g));
        Rational err = boost::multiprecision::abs(value_of(r.result) - exact);
        REQUIRE(err <= pow2(r.result.exponent - 15));
    }
}

// ---------------------------------------------------------------------------
// decimal -> binary
// ---------------------------------------------------------------------------

TEST_CASE("the worked conversion: digits 8,7,4,3 give the integer 8743") {
    PanelInput p;
    p.digits = {3, 4, 7, 8};  // Za0..Za3
    ExecResult r = run_dec2bin(p);
    CHECK(r.result == pack(0, 13, 0x1138));
    CHECK(value_of(r.result) == 8743);
}

TEST_CASE("digits 0,0,0,1 give +1.0") {
    PanelInput p;
    p.digits = {1, 0, 0, 0};
    ExecResult r = run_dec2bin(p);
    CHECK(r.result == pack(0, 0, 0));
}

TEST_CASE("all-zero digits have no representation") {
    PanelInput p;
    CHECK_THROWS_AS(run_dec2bin(p), ZeroUnsupported);
    ExecOptions opts;
    opts.strict_zero = false;
    ExecResult r = run_dec2bin(p, opts);
    CHECK(r.zero_flagged);
}

TEST_CASE("digit selectors beyond 9 and lever overreach are panel errors") {
    PanelInput p;
    p.digits = {0, 0, 0, 10};
    CHECK_THROWS_AS(run_dec2bin(p), PanelError);
    p.digits = {1, 0, 0, 0};
    p.lever = 9;
    CHECK_THROWS_AS(run_dec2bin(p), PanelError);
}

TEST_CASE("positive lever positions multiply by ten exactly") {
    PanelInput p;
    p.digits = {1, 0, 0, 0};
    p.lever = 1;
    CHECK(value_of(run_dec2bin(p).result) == 10);
    p.lever = 2;
    CHECK(value_of(run_dec2bin(p).result) == 100);
    p.digits = {3, 4, 7, 8};
    p.lever = 1;
    CHECK(value_of(run_dec2bin(p).result) == 87430);
}

TEST_CASE("negative lever positions divide by the stored tenth") {
    PanelInput p;
    p.digits = {1, 0, 0, 0};
    p.lever = -1;
    ExecResult r = run_dec2bin(p);
    Rational v = value_of(r.result);
    CHECK(boost::multiprecision::abs(v - Rational(1, 10)) < Rational(1, 1 << 16));
    CHECK(v == value_of(stored_tenth_constant()));  // 1.0 * C exactly
}

TEST_CASE("a thousand random four-digit panels convert exactly") {
    std::mt19937_64 rng(79);
    std::uniform_int_distribution<int> digit(0, 9);
    int done = 0;
    while (done < 1000) {
        PanelInput p;
        int n = 0;
        for (int i = 3; i >= 0; --i) {
            p.digits[i] = digit(rng);
            n = n * 10 + p.digits[i];
        }
        if (n == 0) {
            continue;
        }
        ExecResult r = run_dec2bin(p);
        REQUIRE(value_of(r.result) == n);
        ++done;
    }
}

// ---------------------------------------------------------------------------
// binary -> decimal
// ---------------------------------------------------------------------------

TEST_CASE("8743 displays as 8 7 4 3 with the arrow at 4") {
    ExecResult r = run_bin2dec(pack(0, 13, 0x1138));
    REQUIRE(r.display.has_value());
    CHECK(r.display->digits == std::array<int, 4>{3, 4, 7, 8});
    CHECK(r.display->arrow == 4);
    CHECK(r.display->sign == 0);
    CHECK(r.display->to_string() == "8 7 4 3 x10^4 +");
}

TEST_CASE("+1.0 displays as 1 0 0 0 with the arrow at 1") {
    ExecResult r = run_bin2dec(pack(0, 0, 0));
    REQUIRE(r.display.has_value());
    CHECK(r.display->digits == std::array<int, 4>{0, 0, 0, 1});
    CHECK(r.display->arrow == 1);
}

TEST_CASE("negative values carry the sign to the display") {
    ExecResult r = run_bin2dec(pack(1, 1, 0));
    REQUIRE(r.display.has_value());
    CHECK(r.display->digits == std::array<int, 4>{0, 0, 0, 2});
    CHECK(r.display->sign == 1);
    CHECK(r.display->to_string() == "2 0 0 0 x10^1 -");
}

TEST_CASE("display digits match the exact-decimal oracle") {
    testutil::WordGen gen(80, -40, 40);
    for (int i = 0; i < 2000; ++i) {
        Word24 w = gen.next();
        ExecResult r = run_bin2dec(w);
        REQUIRE(r.display.has_value());
        oracle::DecimalDigits d = oracle::decimal_digits(value_of(w));
        REQUIRE(r.display->digits[3] == d.d3);
        REQUIRE(r.display->digits[2] == d.d2);
        REQUIRE(r.display->digits[1] == d.d1);
        REQUIRE(r.display->digits[0] == d.d0);
        REQUIRE(r.display->arrow == d.arrow);
    }
}

TEST_CASE("values below the operating range trip the display diagnostic") {
    ExecResult r = run_bin2dec(pack(0, -60, 0));
    REQUIRE(r.display.has_value());
    CHECK_FALSE(r.display->range_ok);
    bool has_diag = false;
    for (const Diagnostic& d : r.diagnostics) {
        has_diag |= d.kind == Diagnostic::Kind::DisplayRange;
    }
    CHECK(has_diag);
}

TEST_CASE("conversion round trip over random four-digit panels") {
    std::mt19937_64 rng(81);
    std::uniform_int_distribution<int> digit(0, 9);
    int done = 0;
    while (done < 500) {
        PanelInput p;
        int n = 0;
        for (int i = 3; i >= 0; --i) {
            p.digits[i] = digit(rng);
            n = n * 10 + p.digits[i];
        }
        if (n == 0) {
            continue;
        }
        ExecResult in = run_dec2bin(p);
        ExecResult out = run_bin2dec(in.result);
        REQUIRE(out.display.has_value());
        const auto& d = out.display->digits;
        long shown = d[3] * 1000L + d[2] * 100L + d[1] * 10L + d[0];
        // shown * 10^(arrow-4) must reproduce the integer exactly
        int shift = out.display->arrow - 4;
        Rational lhs = Rational(shown);
        if (shift >= 0) {
            for (int k = 0; k < shift; ++k) lhs *= 10;
        } else {
            for (int k = 0; k < -shift; ++k) lhs /= 10;
        }
        REQUIRE(lhs == n);
        ++done;
    }
}
