#ifndef Z1_MEMORY_HPP
#define Z1_MEMORY_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

#include "z1/errors.hpp"
#include "z1/numerics.hpp"

namespace z1 {

// ---------------------------------------------------------------------------
// The word memory: three identical 8-bit banks of 8 layers x 8 words.
// Bank 10a holds sign and 7-bit exponent, banks 10b/10c the two fraction
// bytes. Reading senses the pin positions destructively and rewrites them
// in the same cycle; the mid-cycle cleared state is observable only through
// the internal step hook, never by programs.
//
// Capacity is 16 words in original-mode and 64 in reconstruction-mode.
// ---------------------------------------------------------------------------
class MemoryUnit {
public:
    static constexpr int kBanks = 3;
    static constexpr int kLayers = 8;
    static constexpr int kWordsPerLayer = 8;

    // Invoked between the destructive sense and the restore; receives the
    // unit itself (cells cleared) plus the address being read.
    using StepHook = std::function<void(const MemoryUnit&, unsigned addr)>;

    explicit MemoryUnit(int capacity_words = 64);

    int capacity() const { return capacity_; }

    struct CellAddress {
        unsigned layer;  // 0..7, high three address bits
        unsigned word;   // 0..7, low three address bits
        bool operator==(const CellAddress&) const = default;
    };

    // Splits a six-bit address; throws RangeError at or beyond capacity.
    CellAddress decode_address(unsigned addr) const;

    // One cycle each. read() clears and restores the cell internally.
    Word24 read(unsigned addr);
    void write(unsigned addr, const Word24& w);

    // Raw bank byte, for inspection (bank 0 = 10a, 1 = 10b, 2 = 10c).
    std::uint8_t bank_byte(int bank, unsigned addr) const;

    void set_step_hook(StepHook hook) { hook_ = std::move(hook); }

    // Text dump: one line per word, "addr: sign exponent fraction" in
    // binary groups. load_dump() accepts the same format.
    std::string dump() const;
    static MemoryUnit load_dump(std::istream& in, int capacity_words = 64);

private:
    int capacity_;
    std::array<std::array<std::array<std::uint8_t, kWordsPerLayer>, kLayers>, kBanks> banks_{};
    StepHook hook_;

    void check_addr(unsigned addr) const;
};

} // namespace z1

#endif
