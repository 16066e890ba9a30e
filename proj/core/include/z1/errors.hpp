#ifndef Z1_ERRORS_HPP
#define Z1_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace z1 {

// Base class for all machine-model errors.
class Z1Error : public std::runtime_error {
public:
    explicit Z1Error(const std::string& what) : std::runtime_error(what) {}
};

// Out-of-range field or address (exponent outside [-64,63], address beyond
// the configured word count, assembler operand too large, ...).
class RangeError : public Z1Error {
public:
    explicit RangeError(const std::string& what) : Z1Error(what) {}
};

// API misuse that the hardware cannot even express (mismatched adder widths,
// normalizing a negative mantissa, ...).
class UsageError : public Z1Error {
public:
    explicit UsageError(const std::string& what) : Z1Error(what) {}
};

// A zero mantissa arose where the machine has no representation for it.
// The Z1 lacks the exception circuits for this case entirely; strict mode
// surfaces it as this error, permissive mode flags the trace instead.
class ZeroUnsupported : public Z1Error {
public:
    explicit ZeroUnsupported(const std::string& what) : Z1Error(what) {}
};

// Undecodable tape byte.
class IllegalInstruction : public Z1Error {
public:
    explicit IllegalInstruction(const std::string& what) : Z1Error(what) {}
};

// Operator panel misuse (digit selector outside 0..9, lever out of range).
class PanelError : public Z1Error {
public:
    explicit PanelError(const std::string& what) : Z1Error(what) {}
};

// Internal sequencing bug: a microprogram requested more serial-register
// accesses than the hardware has bits, or no criterion matched mid-instruction.
class SequencerError : public Z1Error {
public:
    explicit SequencerError(const std::string& what) : Z1Error(what) {}
};

// Ill-formed mechanical circuit or microcode table (detected at build time).
class ConstructionError : public Z1Error {
public:
    explicit ConstructionError(const std::string& what) : Z1Error(what) {}
};

// Non-fatal condition reported alongside results (exponent overflow,
// zero-mantissa flag in permissive mode, display range exceeded).
struct Diagnostic {
    enum class Kind {
        ExponentOverflow,
        ZeroMantissa,
        DisplayRange,
        ShiftOverflow,
    };
    Kind kind;
    std::string detail;
};

const char* diagnostic_kind_name(Diagnostic::Kind kind);

} // namespace z1

#endif
