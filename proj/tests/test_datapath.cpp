#include "doctest.h"

#include <algorithm>
#include <random>

#include "z1/datapath.hpp"

using namespace z1;

TEST_CASE("load discipline: G first, then F, result frees G") {
    ProcessorState s;
    LoadUnit lu;
    CHECK(load_target(lu) == LoadTarget::G);

    load_operand(s, lu, pack(0, 3, 0x8000));
    CHECK(lu.g_loaded);
    CHECK_FALSE(lu.f_loaded);
    CHECK(s.Ag.value() == 3);
    CHECK(s.Bg == ProcMantissa::from_fraction(0x8000));
    CHECK(s.Bg.bit(0) == 1);  // hidden one materialized

    load_operand(s, lu, pack(1, -2, 0x0001));
    CHECK(lu.f_loaded);
    CHECK(s.Af.value() == -2);
    CHECK(s.sign_F == 1);

    // third consecutive load overwrites F
    load_operand(s, lu, pack(0, 7, 0x4444));
    CHECK(s.Af.value() == 7);
    CHECK(s.Bf == ProcMantissa::from_fraction(0x4444));

    // a result in F frees G for the next implicit load
    writeback_result(s, lu, pack(0, 1, 0x0000));
    CHECK(lu.f_loaded);
    CHECK_FALSE(lu.g_loaded);
    CHECK(load_target(lu) == LoadTarget::G);
}

TEST_CASE("apply_route: identity feedback keeps Be across a cycle") {
    ProcessorState s;
    s.Be = ProcMantissa::from_fraction(0x2345);
    apply_route(s, {RouteAction{RTarget::Ba, RSource::Be}});
    alu_cycle(s);
    CHECK(s.Be == ProcMantissa::from_fraction(0x2345));
    CHECK(s.Ba.is_zero());  // inputs erased after the ALU ran
    CHECK(s.Bb.is_zero());
}

TEST_CASE("apply_route: one multiplication step") {
    ProcessorState s;
    s.Be = ProcMantissa::from_fraction(0x0000);  // 1.0
    s.Bg = ProcMantissa::from_fraction(0x8000);  // 1.5
    apply_route(s, {RouteAction{RTarget::Ba, RSource::Be, Route::Half},
                    RouteAction{RTarget::Bb, RSource::Bg}});
    alu_cycle(s);
    CHECK(s.Be.value() == Rational(2));  // 0.5 + 1.5
}

TEST_CASE("two drivers of one line OR together") {
    ProcessorState s;
    s.Bf = ProcMantissa(0b0101);
    s.Bg = ProcMantissa(0b0011);
    apply_route(s, {RouteAction{RTarget::Ba, RSource::Bf},
                    RouteAction{RTarget::Ba, RSource::Bg}});
    CHECK(s.Ba.raw() == 0b0111);
}

TEST_CASE("apply_route is order-independent within one engagement") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<std::uint32_t> bits(0, (1u << 23) - 1);
    for (int i = 0; i < 500; ++i) {
        ProcessorState s;
        s.Bf = ProcMantissa(bits(rng));
        s.Bg = ProcMantissa(bits(rng));
        s.Be = ProcMantissa(bits(rng));
        std::vector<RouteAction> actions{
            RouteAction{RTarget::Ba, RSource::Bf},
            RouteAction{RTarget::Ba, RSource::Be, Route::Half},
            RouteAction{RTarget::Bb, RSource::Bg},
            RouteAction{RTarget::Bb, RSource::Be, Route::Negate},
        };
        ProcessorState s1 = s, s2 = s;
        apply_route(s1, actions);
        std::reverse(actions.begin(), actions.end());
        apply_route(s2, actions);
        CHECK(s1.Ba == s2.Ba);
        CHECK(s1.Bb == s2.Bb);
    }
}

TEST_CASE("route actions respect the sides of the datapath") {
    ProcessorState s;
    CHECK_THROWS_AS(apply_route(s, {RouteAction{RTarget::Aa, RSource::Bf}}), UsageError);
    CHECK_THROWS_AS(apply_route(s, {RouteAction{RTarget::Ba, RSource::Af}}), UsageError);
}

TEST_CASE("the constants reach the exponent inputs") {
    ProcessorState s;
    apply_route(s, {RouteAction{RTarget::Aa, RSource::ConstThirteen}});
    alu_cycle(s);
    CHECK(s.Ae.value() == 13);

    apply_route(s, {RouteAction{RTarget::Aa, RSource::Ae},
                    RouteAction{RTarget::Ab, RSource::ConstOne, Route::Negate}});
    alu_cycle(s);
    CHECK(s.Ae.value() == 12);

    apply_route(s, {RouteAction{RTarget::Aa, RSource::Ae},
                    RouteAction{RTarget::Ab, RSource::ConstThree}});
    alu_cycle(s);
    CHECK(s.Ae.value() == 15);
}

TEST_CASE("digit nibbles enter the mantissa at position -13") {
    ProcessorState s;
    int digits[4] = {0, 0, 0, 9};  // Za3 = 9
    apply_route(s, {RouteAction{RTarget::Ba, RSource::Digit, Route::Identity, 3}},
                digits);
    alu_cycle(s);
    CHECK(s.Be.value() == Rational(9, 1 << 13));
}

TEST_CASE("serial Bf access, low to high") {
    ProcessorState s;
    SerialUnit serial;
    // 1.0000000000000001b: reads give 1, then 15 zeros, then 1
    s.Bf = ProcMantissa::from_fraction(0x0001);
    serial.begin(SerialDirection::LowToHigh);
    CHECK(serial.read_bit(s) == 1);
    CHECK(s.mm == 1);
    for (int i = 0; i < 15; ++i) {
        CHECK(serial.read_bit(s) == 0);
    }
    CHECK(serial.read_bit(s) == 1);

    SUBCASE("an 18th access is a sequencer bug") {
        CHECK_THROWS_AS(serial.read_bit(s), SequencerError);
    }
}

TEST_CASE("17 serial reads reconstruct Bf exactly") {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<unsigned> frac(0, 0xFFFF);
    for (int i = 0; i < 2000; ++i) {
        ProcessorState s;
        SerialUnit serial;
        std::uint16_t f = static_cast<std::uint16_t>(frac(rng));
        s.Bf = ProcMantissa::from_fraction(f);
        std::uint32_t window = s.Bf.raw() >> 4;
        serial.begin(SerialDirection::LowToHigh);
        std::uint32_t rebuilt = 0;
        for (int k = 0; k < 17; ++k) {
            rebuilt |= serial.read_bit(s) << k;
        }
        CHECK(rebuilt == window);
    }
}

TEST_CASE("serial writes push quotient bits from position 0 downward") {
    ProcessorState s;
    SerialUnit serial;
    serial.begin(SerialDirection::HighToLow);
    // write the bit pattern 1 0 1 ... : first-written ends at position 0
    std::uint32_t bits = 0b10110111010010111;  // 17 bits, MSB written first
    for (int k = 16; k >= 0; --k) {
        serial.write_bit(s, (bits >> k) & 1u);
    }
    CHECK(((s.Bf.raw() >> 4) & 0x1FFFF) == bits);
    CHECK_THROWS_AS(serial.write_bit(s, 0), SequencerError);
}

TEST_CASE("alu_cycle reports exponent overflow") {
    ProcessorState s;
    std::vector<Diagnostic> diags;
    s.Af = Exp7::from_int(63);
    apply_route(s, {RouteAction{RTarget::Aa, RSource::Af},
                    RouteAction{RTarget::Ab, RSource::ConstOne}});
    alu_cycle(s, &diags);
    CHECK(s.Ae.value() == -64);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].kind == Diagnostic::Kind::ExponentOverflow);
}

TEST_CASE("state dump shows every register") {
    ProcessorState s;
    s.Bf = ProcMantissa::from_fraction(0x8000);
    std::string d = s.dump();
    CHECK(d.find("Af = ") != std::string::npos);
    CHECK(d.find("Bf = 001.10000000000000000000") != std::string::npos);
    CHECK(d.find("S0=") != std::string::npos);
}
