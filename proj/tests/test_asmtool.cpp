#include "doctest.h"

#include <random>
#include <sstream>

#include "z1/asmtool.hpp"

using namespace z1;

TEST_CASE("the demo program assembles to four bytes") {
    Tape t = assemble("LOAD 1\nLOAD 2\nADD\nDISP\n");
    CHECK(t.bytes == std::vector<std::uint8_t>{0b11000001, 0b11000010,
                                               0b01000000, 0b01000101});
}

TEST_CASE("comments, blank lines and case are tolerated") {
    Tape t = assemble("; a comment line\n"
                      "  load 7   ; trailing comment\n"
                      "\n"
                      "Mul\n");
    CHECK(t.bytes == std::vector<std::uint8_t>{0b11000111, 0b01000010});
}

TEST_CASE("assembler diagnostics carry line numbers") {
    CHECK_THROWS_WITH_AS(assemble("LOAD 1\nJUMP 3\n"),
                         doctest::Contains("line 2"), IllegalInstruction);
    CHECK_THROWS_WITH_AS(assemble("LOAD 64\n"),
                         doctest::Contains("line 1"), RangeError);
    CHECK_THROWS_WITH_AS(assemble("ADD 3\n"),
                         doctest::Contains("line 1"), RangeError);
    CHECK_THROWS_WITH_AS(assemble("STORE\n"),
                         doctest::Contains("line 1"), RangeError);
    CHECK_THROWS_WITH_AS(assemble("LOAD -1\n"),
                         doctest::Contains("line 1"), RangeError);
}

TEST_CASE("disassembly is canonical uppercase") {
    Tape t;
    t.bytes = {0b11000001, 0b01000011};
    CHECK(disassemble(t) == "LOAD 1\nDIV\n");
    CHECK(disassemble(Tape{}) == "");
}

TEST_CASE("illegal bytes report the tape offset") {
    Tape t;
    t.bytes = {0b01000000, 0b00000000};
    CHECK_THROWS_WITH_AS(disassemble(t), doctest::Contains("tape offset 1"),
                         IllegalInstruction);
}

TEST_CASE("assemble and disassemble are inverse on random programs") {
    std::mt19937_64 rng(51);
    std::uniform_int_distribution<int> pick(0, 7);
    std::uniform_int_distribution<unsigned> addr(0, 63);
    const char* names[] = {"LOAD", "STORE", "ADD", "SUB", "MUL", "DIV", "READ", "DISP"};
    for (int round = 0; round < 200; ++round) {
        std::ostringstream src;
        int len = 1 + static_cast<int>(rng() % 40);
        for (int i = 0; i < len; ++i) {
            int k = pick(rng);
            src << names[k];
            if (k < 2) {
                src << ' ' << addr(rng);
            }
            src << '\n';
        }
        std::string canonical = src.str();
        Tape t = assemble(canonical);
        REQUIRE(disassemble(t) == canonical);
        REQUIRE(assemble(disassemble(t)).bytes == t.bytes);
    }
}

TEST_CASE("assembly is byte deterministic") {
    std::string src = "LOAD 3\nSTORE 4\nREAD\nDISP\n";
    CHECK(assemble(src).bytes == assemble(src).bytes);
}
