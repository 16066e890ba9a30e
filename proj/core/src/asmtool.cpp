#include "z1/asmtool.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace z1 {

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return s;
}

struct OpSpec {
    const char* name;
    Opcode op;
    bool operand;
};

constexpr OpSpec kOps[] = {
    {"LOAD", Opcode::Load, true},   {"STORE", Opcode::Store, true},
    {"ADD", Opcode::Add, false},    {"SUB", Opcode::Sub, false},
    {"MUL", Opcode::Mul, false},    {"DIV", Opcode::Div, false},
    {"READ", Opcode::Read, false},  {"DISP", Opcode::Disp, false},
};

} // namespace

Tape assemble(const std::string& source) {
    Tape tape;
    std::istringstream in(source);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto sc = line.find(';'); sc != std::string::npos) {
            line.erase(sc);
        }
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) {
            continue;  // blank or comment-only line
        }
        std::string mn = upper(word);
        const OpSpec* spec = nullptr;
        for (const OpSpec& s : kOps) {
            if (mn == s.name) {
                spec = &s;
                break;
            }
        }
        auto at = [lineno](const std::string& what) {
            return "line " + std::to_string(lineno) + ": " + what;
        };
        if (!spec) {
            throw IllegalInstruction(at("unknown mnemonic '" + word + "'"));
        }
        Instruction ins{spec->op, 0};
        std::string rest;
        if (spec->operand) {
            long n = -1;
            if (!(ls >> n)) {
                throw RangeError(at(mn + " needs a memory address"));
            }
            if (n < 0 || n > 63) {
                throw RangeError(at("address " + std::to_string(n) +
                                    " outside 0..63"));
            }
            ins.addr = static_cast<unsigned>(n);
        }
        if (ls >> rest) {
            throw RangeError(at("unexpected operand '" + rest + "'"));
        }
        tape.bytes.push_back(encode(ins));
    }
    return tape;
}

std::string disassemble(const Tape& tape) {
    std::ostringstream os;
    for (std::size_t i = 0; i < tape.bytes.size(); ++i) {
        try {
            os << mnemonic(decode(tape.bytes[i])) << '\n';
        } catch (const IllegalInstruction& e) {
            throw IllegalInstruction("tape offset " + std::to_string(i) + ": " +
                                     e.what());
        }
    }
    return os.str();
}

} // namespace z1
