#ifndef Z1_DATAPATH_HPP
#define Z1_DATAPATH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "z1/alu.hpp"
#include "z1/errors.hpp"
#include "z1/numerics.hpp"

namespace z1 {

// ---------------------------------------------------------------------------
// The processor register file and routing fabric.
//
// Programmer-visible register pairs F = (Af,Bf) and G = (Ag,Bg); ALU input
// registers (Aa,Ab) and (Ba,Bb); ALU outputs (Ae,Be). The ALU adds its two
// input registers every cycle and the inputs are erased afterwards, so
// everything that must survive a cycle is recycled through a route. Data
// lines behave like a mechanical wired-OR: every driver pushes, a pushed
// line is a one.
// ---------------------------------------------------------------------------

struct ProcessorState {
    Exp7 Af, Ag, Aa, Ab, Ae;
    ProcMantissa Bf, Bg, Ba, Bb, Be;

    bool S0 = false;  // 1: mantissa addition, 0: mantissa subtraction
    bool S1 = false;  // 1: exponent difference Ae >= 0 (F side not smaller)
    bool S3 = false;  // a complement happened; the sign unit flips the result
    unsigned mm = 0;  // last bit shifted out of the Bf serial register

    unsigned sign_F = 0, sign_G = 0, sign_result = 0;

    unsigned Ph = 0;  // phase counter, 5 bits
    unsigned Op = 0;  // current opcode, 3 bits

    // One line per register, binary with position labels.
    std::string dump() const;
};

// Routing targets are the ALU input registers.
enum class RTarget : std::uint8_t { Aa, Ab, Ba, Bb };

// Route sources: registers, ALU outputs, the hardware constants
// (+1, 3 = LL, 13 = LLOL) and the decimal-digit nibble Za_i which enters
// the mantissa datapath at position -13.
enum class RSource : std::uint8_t {
    Af, Ag, Ae,
    Bf, Bg, Be,
    ConstOne, ConstThree, ConstThirteen,
    Digit,
};

struct RouteAction {
    RTarget target;
    RSource source;
    Route transform = Route::Identity;
    int digit_index = -1;  // Za index 3..0 when source == Digit

    std::string to_string() const;
};

const char* target_name(RTarget t);
const char* source_name(RSource s);

// Position of the digit nibble's low bit within the mantissa register.
inline constexpr int kDigitEntryPosition = -13;

// Applies one engagement's routing: every action reads the pre-state and
// ORs its (possibly transformed) value into the target register. Multiple
// drivers of one target combine by OR. `digits` supplies Za3..Za0 when a
// Digit source appears. Shift overflow on a left-shift route is reported
// through `diags` when non-null.
void apply_route(ProcessorState& s, const std::vector<RouteAction>& actions,
                 const int* digits = nullptr,
                 std::vector<Diagnostic>* diags = nullptr);

// One ALU pass: Ae := Aa + Ab (7 bits), Be := Ba + Bb (23 bits), inputs
// erased. Overflow of the exponent addition is appended to `diags`.
struct AluCycle {
    AdderTrace exp_trace;
    AdderTrace mant_trace;
    bool exp_overflow = false;
};
AluCycle alu_cycle(ProcessorState& s, std::vector<Diagnostic>* diags = nullptr);

// ---------------------------------------------------------------------------
// Serial access to Bf.
//
// Multiplication reads Bf bit by bit from the lowest mantissa position -16
// up to 0 (shift right); division sets the quotient bits one after the
// other from position 0 down to -16 (shift left). Either way Bf provides
// 17 bits; an 18th access in one operation is a sequencer bug.
// ---------------------------------------------------------------------------
enum class SerialDirection : std::uint8_t { LowToHigh, HighToLow };

class SerialUnit {
public:
    void begin(SerialDirection dir);
    bool active() const { return active_; }

    // Shifts Bf right one place inside its 17-bit window and returns the
    // bit that left position -16.
    unsigned read_bit(ProcessorState& s);

    // Shifts Bf left one place and sets position -16 to `bit`.
    void write_bit(ProcessorState& s, unsigned bit);

    int count() const { return count_; }

private:
    bool active_ = false;
    SerialDirection dir_ = SerialDirection::LowToHigh;
    int count_ = 0;

    void bump(SerialDirection expect);
};

// ---------------------------------------------------------------------------
// Load discipline: the first word read from memory fills (Ag,Bg), the
// second (Af,Bf). After an arithmetical operation the result occupies F and
// the next load implicitly fills G again. A third consecutive load
// overwrites F. Emptiness is tracked explicitly; every bit pattern is a
// valid number.
// ---------------------------------------------------------------------------
struct LoadUnit {
    bool g_loaded = false;
    bool f_loaded = false;
};

enum class LoadTarget { G, F };

// Which pair the next load fills under the discipline above.
LoadTarget load_target(const LoadUnit& lu);

void load_operand(ProcessorState& s, LoadUnit& lu, const Word24& w);

// Result writeback at the end of an arithmetical operation: F holds the
// result, G is free for the next implicit load.
void writeback_result(ProcessorState& s, LoadUnit& lu, const Word24& w);

} // namespace z1

#endif
