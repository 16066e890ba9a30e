#include "z1/memory.hpp"

#include <bitset>
#include <istream>
#include <sstream>

namespace z1 {

MemoryUnit::MemoryUnit(int capacity_words) : capacity_(capacity_words) {
    if (capacity_words != 16 && capacity_words != 64) {
        throw UsageError("MemoryUnit: capacity must be 16 or 64 words");
    }
}

void MemoryUnit::check_addr(unsigned addr) const {
    if (addr >= static_cast<unsigned>(capacity_)) {
        throw RangeError("memory address " + std::to_string(addr) +
                         " outside 0.." + std::to_string(capacity_ - 1));
    }
}

MemoryUnit::CellAddress MemoryUnit::decode_address(unsigned addr) const {
    check_addr(addr);
    return CellAddress{(addr >> 3) & 7u, addr & 7u};
}

Word24 MemoryUnit::read(unsigned addr) {
    CellAddress cell = decode_address(addr);
    std::uint8_t a = banks_[0][cell.layer][cell.word];
    std::uint8_t b = banks_[1][cell.layer][cell.word];
    std::uint8_t c = banks_[2][cell.layer][cell.word];

    // destructive sense: the pins pass through the cleared position...
    banks_[0][cell.layer][cell.word] = 0;
    banks_[1][cell.layer][cell.word] = 0;
    banks_[2][cell.layer][cell.word] = 0;
    if (hook_) {
        hook_(*this, addr);
    }
    // ...and are moved back within the same cycle.
    banks_[0][cell.layer][cell.word] = a;
    banks_[1][cell.layer][cell.word] = b;
    banks_[2][cell.layer][cell.word] = c;

    std::uint32_t bits = (static_cast<std::uint32_t>(a) << 16) |
                         (static_cast<std::uint32_t>(b) << 8) | c;
    return from_bits(bits);
}

void MemoryUnit::write(unsigned addr, const Word24& w) {
    CellAddress cell = decode_address(addr);
    std::uint32_t bits = to_bits(w);
    banks_[0][cell.layer][cell.word] = static_cast<std::uint8_t>((bits >> 16) & 0xFF);
    banks_[1][cell.layer][cell.word] = static_cast<std::uint8_t>((bits >> 8) & 0xFF);
    banks_[2][cell.layer][cell.word] = static_cast<std::uint8_t>(bits & 0xFF);
}

std::uint8_t MemoryUnit::bank_byte(int bank, unsigned addr) const {
    check_addr(addr);
    return banks_[bank][(addr >> 3) & 7u][addr & 7u];
}

std::string MemoryUnit::dump() const {
    std::ostringstream os;
    for (int addr = 0; addr < capacity_; ++addr) {
        std::uint8_t a = banks_[0][(addr >> 3) & 7][addr & 7];
        std::uint8_t b = banks_[1][(addr >> 3) & 7][addr & 7];
        std::uint8_t c = banks_[2][(addr >> 3) & 7][addr & 7];
        os << (addr < 10 ? "0" : "") << addr << ": "
           << ((a >> 7) & 1) << ' '
           << std::bitset<7>(a & 0x7F).to_string() << ' '
           << std::bitset<8>(b).to_string() << std::bitset<8>(c).to_string()
           << '\n';
    }
    return os.str();
}

MemoryUnit MemoryUnit::load_dump(std::istream& in, int capacity_words) {
    MemoryUnit mem(capacity_words);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::istringstream ls(line);
        std::string addr_tok, sign_tok, exp_tok, frac_tok;
        if (!(ls >> addr_tok >> sign_tok >> exp_tok >> frac_tok)) {
            throw RangeError("memory dump line " + std::to_string(lineno) +
                             ": expected 'addr: s eeeeeee ffff...'");
        }
        if (!addr_tok.empty() && addr_tok.back() == ':') {
            addr_tok.pop_back();
        }
        unsigned addr = static_cast<unsigned>(std::stoul(addr_tok));
        if (sign_tok.size() != 1 || exp_tok.size() != 7 || frac_tok.size() != 16) {
            throw RangeError("memory dump line " + std::to_string(lineno) +
                             ": bad field widths");
        }
        unsigned sign = sign_tok[0] == '1';
        std::uint8_t e7 = static_cast<std::uint8_t>(std::stoul(exp_tok, nullptr, 2));
        std::uint16_t frac = static_cast<std::uint16_t>(std::stoul(frac_tok, nullptr, 2));
        mem.write(addr, pack(sign, Exp7(e7).value(), frac));
    }
    return mem;
}

} // namespace z1
