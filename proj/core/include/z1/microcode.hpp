#ifndef Z1_MICROCODE_HPP
#define Z1_MICROCODE_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "z1/datapath.hpp"
#include "z1/errors.hpp"
#include "z1/numerics.hpp"

namespace z1 {

// ---------------------------------------------------------------------------
// The criterion-plate sequencer.
//
// Control is a table of criteria. A criterion snaps when the ten control
// bits (Op2..Op0, S0, S1, Ph4..Ph0) match its pattern; one plate may act on
// the exponent side, one on the mantissa side, and a row covers either or
// both. A snapped plate selects one of at most four exclusive guarded
// action sets (the A/B/C/D alternatives); the actions route registers into
// the ALU inputs and drive the phase counter, condition bits, the serial
// Bf register and the conversion unit.
//
// The table is data; the runner below is a generic cycle interpreter.
// ---------------------------------------------------------------------------

// Sequencer view of the 3-bit opcode.
enum class MicroOp : std::uint8_t {
    Add = 0, Sub = 1, Mul = 2, Div = 3, Read = 4, Disp = 5,
};
const char* micro_op_name(MicroOp op);

enum class Guard : std::uint8_t {
    Always,
    AeNonNegative,   // Ae >= 0 as two's complement
    AeZero,
    AeNonZero,
    AeOne,
    BeNegative,      // sign of the mantissa register
    BeNonNegative,
    BeZero,
    BeBit0One,       // Be_0 = L
    BeBit0Zero,
    BeTwoOrMore,     // Be_{+1} set: result needs one right shift
    MmOne,
    MmZero,
    PhBelow18,       // quotient loop body (the last loop cycle only records)
    LeverPositive,
    LeverNegative,
    LeverZero,
    AccGE16,         // operand >= 2^4: display scaling needed (Ae > 3)
    AccBelowTenth,
    AccGEOne,
};
const char* guard_name(Guard g);

struct Effect {
    enum class Kind : std::uint8_t {
        AdvancePhase,
        SetPhase,          // arg = next phase
        SetS1True,
        SetS1False,
        SetS3,
        Finish,
        BeginSerialRead,
        BeginSerialWrite,
        SerialLatchMm,     // pre-route: shift Bf right, latch mm
        RecordQuotientBit, // pre-route: write !negative(Be) into Bf
        ZeroCheck,         // Be == 0: strict error / permissive flag; arg = resume phase
        NormalizeLeftFold, // post-ALU: shift Be left to bit 0, Ae -= count
        LeverDec,
        LeverInc,
        SuspendDivTen,     // one suspended multiplication by the stored 1/10
        AccSetup,
        AccScaleDown16,    // suspended multiplication by the stored 10^-16
        AccMul10ArrowDec,
        AccDiv10ArrowInc,
        AccExtractDigit,   // arg = digit slot (3 = highest)
        DisplayFinish,
    };
    Kind kind;
    int arg = 0;
};

// One exclusive alternative of a criterion.
struct GuardVariant {
    std::vector<Guard> guards;  // conjunction; empty = always
    std::vector<RouteAction> exp_routes;
    std::vector<RouteAction> mant_routes;
    std::vector<Effect> effects;
};

struct Criterion {
    int id;                 // table row number
    const char* label;
    std::uint8_t op_value;  // 3-bit opcode pattern
    std::uint8_t op_mask;   // pattern bits that must match
    int s0 = -1;            // -1 = don't care
    int s1 = -1;
    std::uint8_t ph_lo = 0;
    std::uint8_t ph_hi = 0;
    bool exp_active = false;
    bool mant_active = false;
    std::vector<Effect> pre_effects;  // run before guard selection and routing
    std::vector<GuardVariant> variants;

    bool matches(MicroOp op, bool s0v, bool s1v, unsigned ph) const;
};

class MicroTable {
public:
    static const MicroTable& instance();

    const std::vector<Criterion>& rows() const { return rows_; }

    // Unique matching criterion for one side, or nullptr (side idle).
    // Throws ConstructionError if two criteria match.
    const Criterion* match_side(bool mantissa_side, MicroOp op, bool s0,
                                bool s1, unsigned ph) const;

    // Exhaustive pattern check: no (op, S0, S1, Ph) combination may select
    // two criteria on one side. Run at table construction.
    void static_check() const;

    // Plain-text listing, one criterion per line: id, sides, pattern,
    // guards, actions.
    std::string listing() const;

private:
    MicroTable();
    std::vector<Criterion> rows_;
};

// ---------------------------------------------------------------------------
// Microprogram execution.
// ---------------------------------------------------------------------------

struct ExecOptions {
    bool strict_zero = true;
    bool record_cycles = true;
};

struct PanelInput {
    std::array<int, 4> digits{};  // digits[3] = Za3 (entered first) ... digits[0] = Za0
    int lever = 0;                // decimal exponent, -8..+8
    unsigned sign = 0;
};

struct DisplayRecord {
    std::array<int, 4> digits{};  // digits[3] = highest order
    int arrow = 0;                // value ~ 0.d3d2d1d0 * 10^arrow
    unsigned sign = 0;
    bool range_ok = true;

    std::string to_string() const;  // "d3 d2 d1 d0 x10^arrow sign"
};

struct CycleRecord {
    int cycle;        // 0-based within the instruction
    unsigned ph;
    int exp_id;       // fired criterion per side, -1 = idle
    int mant_id;
    bool suspended;   // cycle belongs to a suspended multiplication
    std::uint8_t ae_raw;
    std::uint32_t be_raw;
    bool s0, s1, s3;
    unsigned mm;
};

struct ExecResult {
    Word24 result{};             // meaningful for arithmetic and READ
    int cycles = 0;
    bool zero_flagged = false;   // permissive mode hit a zero mantissa
    std::vector<Diagnostic> diagnostics;
    std::vector<CycleRecord> fired;
    std::optional<DisplayRecord> display;  // DISP only
};

// result = f + g or f - g. Cycle count: 5 (mantissa addition) or
// 6 (mantissa subtraction) plus one cycle per alignment shift.
ExecResult run_add_sub(const Word24& f, const Word24& g, bool subtract,
                       const ExecOptions& opts = {});

// result = f * g, 20 cycles always.
ExecResult run_mul(const Word24& f, const Word24& g,
                   const ExecOptions& opts = {});

// result = f / g, 21 cycles always.
ExecResult run_div(const Word24& f, const Word24& g,
                   const ExecOptions& opts = {});

// Decimal panel input to a register value.
ExecResult run_dec2bin(const PanelInput& panel, const ExecOptions& opts = {});

// Register value to decimal display.
ExecResult run_bin2dec(const Word24& f, const ExecOptions& opts = {});

// Stored constants of the conversion paths.
Word24 stored_tenth_constant();        // ~1/10, fraction truncated
Word24 stored_ten_pow_minus16();       // ~10^-16, fraction truncated

// Display arrow positions the output panel can show.
inline constexpr int kArrowMin = -15;
inline constexpr int kArrowMax = 20;

} // namespace z1

#endif
