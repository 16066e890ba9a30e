#include "z1/machine.hpp"

#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace z1 {

Instruction decode(std::uint8_t byte) {
    unsigned cls = (byte >> 6) & 3u;
    if (cls == 0b11) {
        return Instruction{Opcode::Load, byte & 0x3Fu};
    }
    if (cls == 0b10) {
        return Instruction{Opcode::Store, byte & 0x3Fu};
    }
    if (cls == 0b01 && (byte & 0b00111000u) == 0) {
        switch (byte & 7u) {
        case 0: return Instruction{Opcode::Add};
        case 1: return Instruction{Opcode::Sub};
        case 2: return Instruction{Opcode::Mul};
        case 3: return Instruction{Opcode::Div};
        case 4: return Instruction{Opcode::Read};
        case 5: return Instruction{Opcode::Disp};
        default: break;
        }
    }
    std::ostringstream os;
    os << "undecodable tape byte 0x" << std::hex << std::uppercase << int(byte);
    throw IllegalInstruction(os.str());
}

std::uint8_t encode(const Instruction& ins) {
    switch (ins.op) {
    case Opcode::Load: return static_cast<std::uint8_t>(0b11000000u | (ins.addr & 0x3Fu));
    case Opcode::Store: return static_cast<std::uint8_t>(0b10000000u | (ins.addr & 0x3Fu));
    case Opcode::Add: return 0b01000000;
    case Opcode::Sub: return 0b01000001;
    case Opcode::Mul: return 0b01000010;
    case Opcode::Div: return 0b01000011;
    case Opcode::Read: return 0b01000100;
    case Opcode::Disp: return 0b01000101;
    }
    throw UsageError("encode: bad opcode");
}

bool has_operand(Opcode op) {
    return op == Opcode::Load || op == Opcode::Store;
}

std::string mnemonic(const Instruction& ins) {
    switch (ins.op) {
    case Opcode::Load: return "LOAD " + std::to_string(ins.addr);
    case Opcode::Store: return "STORE " + std::to_string(ins.addr);
    case Opcode::Add: return "ADD";
    case Opcode::Sub: return "SUB";
    case Opcode::Mul: return "MUL";
    case Opcode::Div: return "DIV";
    case Opcode::Read: return "READ";
    case Opcode::Disp: return "DISP";
    }
    return "?";
}

static const char kMagic[4] = {'Z', '1', 'P', '1'};

void save_z1p(std::ostream& out, const Tape& tape) {
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(tape.bytes.data()),
              static_cast<std::streamsize>(tape.bytes.size()));
}

Tape load_z1p(std::istream& in) {
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4 || magic[0] != 'Z' || magic[1] != '1' || magic[2] != 'P' ||
        magic[3] != '1') {
        throw Z1Error("not a Z1P1 tape file");
    }
    Tape t;
    char b;
    while (in.get(b)) {
        t.bytes.push_back(static_cast<std::uint8_t>(b));
    }
    return t;
}

PanelInput parse_panel_line(const std::string& line) {
    PanelInput p;
    std::istringstream is(line);
    std::string tok;
    bool have_digits = false;
    while (is >> tok) {
        if (tok.rfind("digits=", 0) == 0) {
            std::string d = tok.substr(7);
            if (d.size() != 4) {
                throw PanelError("input line needs exactly four digits: " + line);
            }
            for (int i = 0; i < 4; ++i) {
                if (d[i] < '0' || d[i] > '9') {
                    throw PanelError("bad digit in input line: " + line);
                }
                // leftmost character is Za3
                p.digits[3 - i] = d[i] - '0';
            }
            have_digits = true;
        } else if (tok.rfind("exp=", 0) == 0) {
            p.lever = std::stoi(tok.substr(4));
        } else if (tok.rfind("sign=", 0) == 0) {
            std::string s = tok.substr(5);
            if (s == "+") {
                p.sign = 0;
            } else if (s == "-") {
                p.sign = 1;
            } else {
                throw PanelError("sign must be + or -: " + line);
            }
        } else {
            throw PanelError("unrecognized input token '" + tok + "'");
        }
    }
    if (!have_digits) {
        throw PanelError("input line without digits= field: " + line);
    }
    return p;
}

ScriptInputProvider::ScriptInputProvider(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        entries_.push_back(parse_panel_line(line));
    }
}

std::optional<PanelInput> ScriptInputProvider::next() {
    if (pos_ >= entries_.size()) {
        return std::nullopt;
    }
    return entries_[pos_++];
}

unsigned sign_unit(Opcode op, unsigned sign_f, unsigned sign_g, bool s1, bool s3) {
    switch (op) {
    case Opcode::Mul:
    case Opcode::Div:
        return sign_f ^ sign_g;
    case Opcode::Add:
    case Opcode::Sub: {
        unsigned eff_g = (op == Opcode::Sub) ? (sign_g ^ 1u) : sign_g;
        if (sign_f == eff_g) {
            return sign_f;  // cases (1) and (4): plain mantissa addition
        }
        unsigned prelim = s1 ? sign_f : eff_g;
        return prelim ^ (s3 ? 1u : 0u);
    }
    default:
        throw UsageError("sign_unit: not an arithmetical instruction");
    }
}

Machine::Machine(const MachineConfig& config)
    : config_(config), memory_(config.mem_words) {}

void Machine::load_tape(Tape tape) {
    tape_ = std::move(tape);
    pos_ = 0;
}

ExecOptions Machine::exec_options() const {
    ExecOptions o;
    o.strict_zero = config_.zero == ZeroPolicy::Strict;
    o.record_cycles = config_.record_cycles;
    return o;
}

Word24 Machine::arith_operand_f() const {
    // an empty register reads as the all-zero word, like the dead interface
    return load_.f_loaded ? f_ : Word24{};
}

Word24 Machine::arith_operand_g() const {
    return load_.g_loaded ? g_ : Word24{};
}

void Machine::append_diags(InstrRecord& rec, const std::vector<Diagnostic>& diags) {
    for (const Diagnostic& d : diags) {
        rec.events.push_back(std::string(diagnostic_kind_name(d.kind)) + ": " + d.detail);
    }
}

bool Machine::step() {
    if (tape_exhausted()) {
        return false;
    }
    const std::size_t at = pos_;
    InstrRecord rec;
    rec.index = static_cast<int>(at);

    auto fail = [&](const std::string& what) {
        return "tape position " + std::to_string(at) + ", cycle " +
               std::to_string(cycles_) + ": " + what;
    };

    try {
        Instruction ins = decode(tape_.bytes[at]);
        rec.instr = ins;

        switch (ins.op) {
        case Opcode::Load: {
            rec.cycles = 1;
            if (config_.mode == Mode::MemoryOnly) {
                // the processor is shut down; the read still cycles the memory
                memory_.read(ins.addr);
                break;
            }
            Word24 w;
            if (config_.mode == Mode::CpuOnly) {
                w = Word24{};  // the interface delivers zeros
            } else {
                w = memory_.read(ins.addr);
            }
            if (load_target(load_) == LoadTarget::G) {
                g_ = w;
                load_.g_loaded = true;
            } else {
                f_ = w;
                load_.f_loaded = true;
            }
            break;
        }
        case Opcode::Store: {
            rec.cycles = 1;
            if (config_.mode == Mode::CpuOnly) {
                break;  // memory is shut down, the push goes nowhere
            }
            Word24 w;
            if (config_.mode == Mode::MemoryOnly) {
                w = Word24{};  // processor side of the interface reads zero
            } else {
                w = load_.f_loaded ? f_ : (load_.g_loaded ? g_ : Word24{});
            }
            memory_.write(ins.addr, w);
            rec.events.push_back("mem[" + std::to_string(ins.addr) + "] <- " +
                                 render_word(w));
            break;
        }
        case Opcode::Add:
        case Opcode::Sub:
        case Opcode::Mul:
        case Opcode::Div: {
            if (config_.mode == Mode::MemoryOnly) {
                rec.cycles = 0;  // processor shut down
                break;
            }
            ExecResult r;
            Word24 a = arith_operand_f();
            Word24 b = arith_operand_g();
            if (ins.op == Opcode::Add || ins.op == Opcode::Sub) {
                r = run_add_sub(a, b, ins.op == Opcode::Sub, exec_options());
            } else if (ins.op == Opcode::Mul) {
                r = run_mul(a, b, exec_options());
            } else {
                r = run_div(a, b, exec_options());
            }
            rec.cycles = r.cycles;
            rec.detail = std::move(r.fired);
            append_diags(rec, r.diagnostics);
            if (r.zero_flagged) {
                rec.events.push_back("zero-mantissa result (permissive)");
            }
            f_ = r.result;
            load_.f_loaded = true;
            load_.g_loaded = false;
            break;
        }
        case Opcode::Read: {
            if (config_.mode == Mode::MemoryOnly) {
                rec.cycles = 0;
                break;
            }
            if (!input_) {
                throw Z1Error("READ without an input provider");
            }
            std::optional<PanelInput> p = input_->next();
            if (!p) {
                throw Z1Error("READ: input script exhausted");
            }
            ExecResult r = run_dec2bin(*p, exec_options());
            rec.cycles = r.cycles;
            rec.detail = std::move(r.fired);
            append_diags(rec, r.diagnostics);
            if (r.zero_flagged) {
                rec.events.push_back("zero-mantissa input (permissive)");
            }
            if (load_target(load_) == LoadTarget::G) {
                g_ = r.result;
                load_.g_loaded = true;
            } else {
                f_ = r.result;
                load_.f_loaded = true;
            }
            rec.events.push_back("read " + render_word(r.result));
            break;
        }
        case Opcode::Disp: {
            if (config_.mode == Mode::MemoryOnly) {
                rec.cycles = 0;
                break;
            }
            Word24 shown = arith_operand_f();
            ExecResult r = run_bin2dec(shown, exec_options());
            rec.cycles = r.cycles;
            rec.detail = std::move(r.fired);
            append_diags(rec, r.diagnostics);
            if (r.display) {
                rec.events.push_back("display " + r.display->to_string());
                if (output_) {
                    output_->display(*r.display);
                }
            }
            break;
        }
        }

        cycles_ += static_cast<std::uint64_t>(rec.cycles);
        rec.cycle_total = cycles_;
        rec.f = f_;
        rec.g = g_;
        rec.f_loaded = load_.f_loaded;
        rec.g_loaded = load_.g_loaded;
        trace_.push_back(std::move(rec));
        ++pos_;
        return true;
    } catch (const ZeroUnsupported& e) {
        throw ZeroUnsupported(fail(e.what()));
    } catch (const RangeError& e) {
        throw RangeError(fail(e.what()));
    } catch (const IllegalInstruction& e) {
        throw IllegalInstruction(fail(e.what()));
    } catch (const PanelError& e) {
        throw PanelError(fail(e.what()));
    } catch (const Z1Error& e) {
        throw Z1Error(fail(e.what()));
    }
}

void Machine::run() {
    while (step()) {
    }
}

std::string render_word(const Word24& w) {
    std::ostringstream os;
    os << unsigned(w.sign) << ':' << (w.exponent >= 0 ? "+" : "")
       << int(w.exponent) << ':' << std::hex << std::uppercase << std::setw(4)
       << std::setfill('0') << w.fraction;
    return os.str();
}

std::string render_instr_trace(const std::vector<InstrRecord>& records) {
    std::ostringstream os;
    for (const InstrRecord& r : records) {
        os << r.index << '\t' << mnemonic(r.instr) << '\t' << r.cycles << '\t'
           << r.cycle_total << '\t'
           << "F=" << (r.f_loaded ? render_word(r.f) : "-") << '\t'
           << "G=" << (r.g_loaded ? render_word(r.g) : "-");
        for (const std::string& e : r.events) {
            os << '\t' << e;
        }
        os << '\n';
    }
    return os.str();
}

std::string render_cycle_trace(const std::vector<InstrRecord>& records) {
    std::ostringstream os;
    std::uint64_t n = 0;
    for (const InstrRecord& r : records) {
        if (r.detail.empty()) {
            // single-cycle memory traffic has no microprogram detail
            for (int k = 0; k < r.cycles; ++k) {
                os << n++ << '\t' << r.index << '\t' << mnemonic(r.instr)
                   << "\t-\t-\t-\t-\n";
            }
            continue;
        }
        for (const CycleRecord& c : r.detail) {
            os << n++ << '\t' << r.index << '\t' << mnemonic(r.instr) << '\t'
               << c.ph << '\t'
               << (c.exp_id < 0 ? std::string("-") : std::to_string(c.exp_id))
               << '\t'
               << (c.mant_id < 0 ? std::string("-") : std::to_string(c.mant_id))
               << '\t'
               << "Ae=" << int(Exp7(c.ae_raw).value())
               << " Be=" << ProcMantissa(c.be_raw).to_binary_string()
               << " S0=" << c.s0 << " S1=" << c.s1 << " S3=" << c.s3
               << " mm=" << c.mm << (c.suspended ? " (susp)" : "") << '\n';
        }
    }
    return os.str();
}

} // namespace z1
