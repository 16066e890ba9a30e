#ifndef Z1_MACHINE_HPP
#define Z1_MACHINE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "z1/datapath.hpp"
#include "z1/errors.hpp"
#include "z1/memory.hpp"
#include "z1/microcode.hpp"
#include "z1/numerics.hpp"

namespace z1 {

// ---------------------------------------------------------------------------
// Instructions and tape.
//
// Eight instructions on an 8-bit punched-tape word: two class bits select
// load/store with a six-bit address, or an operation group where the low
// three bits pick one of the four arithmetical and two I/O operations.
//
//   11aaaaaa  LOAD a          10aaaaaa  STORE a
//   01000000  ADD             01000001  SUB
//   01000010  MUL             01000011  DIV
//   01000100  READ            01000101  DISP
//
// Everything else is an illegal instruction.
// ---------------------------------------------------------------------------

enum class Opcode : std::uint8_t { Load, Store, Add, Sub, Mul, Div, Read, Disp };

struct Instruction {
    Opcode op;
    unsigned addr = 0;  // LOAD/STORE only

    bool operator==(const Instruction&) const = default;
};

Instruction decode(std::uint8_t byte);        // throws IllegalInstruction
std::uint8_t encode(const Instruction& ins);  // exact inverse
std::string mnemonic(const Instruction& ins);
bool has_operand(Opcode op);

struct Tape {
    std::vector<std::uint8_t> bytes;
};

// ".z1p" container: the magic bytes "Z1P1" followed by one instruction
// byte per tape row.
void save_z1p(std::ostream& out, const Tape& tape);
Tape load_z1p(std::istream& in);

// ---------------------------------------------------------------------------
// Operator I/O.
// ---------------------------------------------------------------------------

class InputProvider {
public:
    virtual ~InputProvider() = default;
    // The next panel setting, or nullopt if the operator walked away.
    virtual std::optional<PanelInput> next() = 0;
};

// Parses lines of the input-script grammar: "digits=DDDD exp=E sign=+|-".
PanelInput parse_panel_line(const std::string& line);

class ScriptInputProvider : public InputProvider {
public:
    explicit ScriptInputProvider(std::istream& in);
    std::optional<PanelInput> next() override;

private:
    std::vector<PanelInput> entries_;
    std::size_t pos_ = 0;
};

class OutputSink {
public:
    virtual ~OutputSink() = default;
    virtual void display(const DisplayRecord& rec) = 0;
};

class CollectingSink : public OutputSink {
public:
    void display(const DisplayRecord& rec) override { records_.push_back(rec); }
    const std::vector<DisplayRecord>& records() const { return records_; }

private:
    std::vector<DisplayRecord> records_;
};

// ---------------------------------------------------------------------------
// The machine.
// ---------------------------------------------------------------------------

enum class Mode { Full, CpuOnly, MemoryOnly };
enum class ZeroPolicy { Strict, Permissive };

// Result sign negotiation (the sign unit near the tape reader). Products
// and quotients get their sign in advance; additions and subtractions
// derive it from the four sign cases, where S1 names the operand with the
// larger exponent and S3 records a mid-operation complement.
unsigned sign_unit(Opcode op, unsigned sign_f, unsigned sign_g, bool s1, bool s3);

// Per-instruction trace entry. The cycle details carry the per-cycle
// criterion firings when cycle recording is on.
struct InstrRecord {
    int index = 0;                // tape position
    Instruction instr{};
    int cycles = 0;
    std::uint64_t cycle_total = 0;  // running counter after this instruction
    Word24 f{}, g{};
    bool f_loaded = false, g_loaded = false;
    std::vector<std::string> events;  // diagnostics, memory writes, I/O
    std::vector<CycleRecord> detail;
};

struct MachineConfig {
    int mem_words = 64;
    Mode mode = Mode::Full;
    ZeroPolicy zero = ZeroPolicy::Strict;
    bool record_cycles = false;
};

class Machine {
public:
    explicit Machine(const MachineConfig& config = {});

    MemoryUnit& memory() { return memory_; }
    const MemoryUnit& memory() const { return memory_; }

    void set_input_provider(InputProvider* p) { input_ = p; }
    void set_output_sink(OutputSink* s) { output_ = s; }

    void load_tape(Tape tape);
    bool tape_exhausted() const { return pos_ >= tape_.bytes.size(); }
    std::size_t tape_position() const { return pos_; }

    // Executes one instruction; false when the tape is exhausted. Errors
    // carry the tape position and cycle count.
    bool step();

    // Runs to the end of the tape (or throws on the first unrecoverable
    // error; the trace collected so far stays available).
    void run();

    std::uint64_t cycle_counter() const { return cycles_; }
    const std::vector<InstrRecord>& trace() const { return trace_; }
    const MachineConfig& config() const { return config_; }

    const Word24& reg_f() const { return f_; }
    const Word24& reg_g() const { return g_; }
    bool f_loaded() const { return load_.f_loaded; }
    bool g_loaded() const { return load_.g_loaded; }

private:
    MachineConfig config_;
    MemoryUnit memory_;
    Tape tape_;
    std::size_t pos_ = 0;
    std::uint64_t cycles_ = 0;
    Word24 f_{}, g_{};
    LoadUnit load_;
    InputProvider* input_ = nullptr;
    OutputSink* output_ = nullptr;
    std::vector<InstrRecord> trace_;

    ExecOptions exec_options() const;
    Word24 arith_operand_f() const;
    Word24 arith_operand_g() const;
    void append_diags(InstrRecord& rec, const std::vector<Diagnostic>& diags);
};

// Trace renderers; formats are line oriented and stable for golden tests.
std::string render_instr_trace(const std::vector<InstrRecord>& records);
std::string render_cycle_trace(const std::vector<InstrRecord>& records);
std::string render_word(const Word24& w);  // "s:exponent:fraction-hex"

} // namespace z1

#endif
