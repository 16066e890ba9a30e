#ifndef Z1_ASMTOOL_HPP
#define Z1_ASMTOOL_HPP

#include <string>

#include "z1/machine.hpp"

namespace z1 {

// ---------------------------------------------------------------------------
// The tape language (".z1s"): one instruction per line, mnemonics LOAD n,
// STORE n, ADD, SUB, MUL, DIV, READ, DISP with 0 <= n < 64; comments after
// ';'. No labels, no constants, no expressions: the tape cannot express
// them either. Mnemonics are case-insensitive; canonical output is
// uppercase.
// ---------------------------------------------------------------------------

// Throws Z1Error subclasses with the source line number in the message.
Tape assemble(const std::string& source);

// Canonical source text; throws IllegalInstruction with the tape offset.
std::string disassemble(const Tape& tape);

} // namespace z1

#endif
