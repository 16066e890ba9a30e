// Command line front end for the Z1 emulator: assembler, disassembler,
// tape runner and table/memory inspection.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "z1/asmtool.hpp"
#include "z1/machine.hpp"
#include "z1/microcode.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw z1::Z1Error("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw z1::Z1Error("cannot write " + path);
    }
    out << data;
}

// READ prompts on stderr and accepts the script grammar on stdin, so an
// interactive session can be captured and replayed as a script.
class InteractiveInput : public z1::InputProvider {
public:
    std::optional<z1::PanelInput> next() override {
        std::cerr << "READ? (digits=DDDD exp=E sign=+|-) " << std::flush;
        std::string line;
        if (!std::getline(std::cin, line)) {
            return std::nullopt;
        }
        return z1::parse_panel_line(line);
    }
};

class StdoutSink : public z1::OutputSink {
public:
    void display(const z1::DisplayRecord& rec) override {
        std::cout << rec.to_string() << '\n';
    }
};

struct RunFlags {
    std::string tape_path;
    int mem_words = 64;
    bool cpu_only = false;
    bool memory_only = false;
    bool permissive = false;
    std::string trace = "off";
    std::string dump_mem_path;
    std::string load_mem_path;
    std::string input_script;
};

int cmd_run(const RunFlags& flags) {
    z1::MachineConfig cfg;
    cfg.mem_words = flags.mem_words;
    if (flags.cpu_only) {
        cfg.mode = z1::Mode::CpuOnly;
    } else if (flags.memory_only) {
        cfg.mode = z1::Mode::MemoryOnly;
    }
    cfg.zero = flags.permissive ? z1::ZeroPolicy::Permissive : z1::ZeroPolicy::Strict;
    cfg.record_cycles = flags.trace == "cycle";

    z1::Machine machine(cfg);

    if (!flags.load_mem_path.empty()) {
        std::ifstream memfile(flags.load_mem_path);
        if (!memfile) {
            throw z1::Z1Error("cannot open " + flags.load_mem_path);
        }
        machine.memory() = z1::MemoryUnit::load_dump(memfile, flags.mem_words);
    }

    std::ifstream tapefile(flags.tape_path, std::ios::binary);
    if (!tapefile) {
        throw z1::Z1Error("cannot open " + flags.tape_path);
    }
    machine.load_tape(z1::load_z1p(tapefile));

    std::unique_ptr<z1::InputProvider> input;
    std::ifstream script;
    if (!flags.input_script.empty()) {
        script.open(flags.input_script);
        if (!script) {
            throw z1::Z1Error("cannot open " + flags.input_script);
        }
        input = std::make_unique<z1::ScriptInputProvider>(script);
    } else {
        input = std::make_unique<InteractiveInput>();
    }
    machine.set_input_provider(input.get());

    StdoutSink sink;
    machine.set_output_sink(&sink);

    int exit_code = 0;
    try {
        machine.run();
    } catch (const z1::Z1Error& e) {
        std::cerr << "z1: error: " << e.what() << '\n';
        exit_code = 1;
    }

    if (flags.trace == "instr") {
        std::cout << z1::render_instr_trace(machine.trace());
    } else if (flags.trace == "cycle") {
        std::cout << z1::render_cycle_trace(machine.trace());
    }

    if (!flags.dump_mem_path.empty()) {
        write_file(flags.dump_mem_path, machine.memory().dump());
    }
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Z1 mechanical computer emulator"};
    app.require_subcommand(1);

    // --- asm ---
    auto* asm_cmd = app.add_subcommand("asm", "assemble a .z1s source into a .z1p tape");
    std::string asm_in, asm_out;
    asm_cmd->add_option("source", asm_in, "source file (.z1s)")->required();
    asm_cmd->add_option("-o,--output", asm_out, "tape file (default: source with .z1p)");

    // --- disasm ---
    auto* dis_cmd = app.add_subcommand("disasm", "disassemble a .z1p tape");
    std::string dis_in, dis_out;
    dis_cmd->add_option("tape", dis_in, "tape file (.z1p)")->required();
    dis_cmd->add_option("-o,--output", dis_out, "write to file instead of stdout");

    // --- run ---
    auto* run_cmd = app.add_subcommand("run", "run a .z1p tape");
    RunFlags flags;
    run_cmd->add_option("tape", flags.tape_path, "tape file (.z1p)")->required();
    run_cmd->add_option("--mem-words", flags.mem_words, "memory size, 16 or 64")
        ->check(CLI::IsMember({16, 64}));
    auto* cpu_only = run_cmd->add_flag("--cpu-only", flags.cpu_only,
                                       "shut the memory down; loads read zeros");
    run_cmd->add_flag("--memory-only", flags.memory_only,
                      "shut the processor down; only memory traffic runs")
        ->excludes(cpu_only);
    auto* strict = run_cmd->add_flag("--strict-zero",
                                     "stop on zero mantissa results (default)");
    run_cmd->add_flag("--permissive-zero", flags.permissive,
                      "flag zero mantissa results and continue")
        ->excludes(strict);
    run_cmd->add_option("--trace", flags.trace, "trace granularity")
        ->check(CLI::IsMember({"off", "instr", "cycle"}));
    run_cmd->add_option("--dump-mem", flags.dump_mem_path, "dump memory after the run");
    run_cmd->add_option("--load-mem", flags.load_mem_path, "preload memory from a dump");
    run_cmd->add_option("--input-script", flags.input_script,
                        "panel inputs for READ instructions");

    // --- dump-microcode ---
    app.add_subcommand("dump-microcode", "print the criterion table");

    // --- dump-mem ---
    auto* dm_cmd = app.add_subcommand("dump-mem", "print a memory dump in canonical form");
    std::string dm_load;
    int dm_words = 64;
    dm_cmd->add_option("--load-mem", dm_load, "memory dump to validate and print");
    dm_cmd->add_option("--mem-words", dm_words, "memory size, 16 or 64")
        ->check(CLI::IsMember({16, 64}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (asm_cmd->parsed()) {
            if (asm_out.empty()) {
                asm_out = asm_in;
                if (auto dot = asm_out.rfind(".z1s"); dot != std::string::npos) {
                    asm_out.erase(dot);
                }
                asm_out += ".z1p";
            }
            z1::Tape tape = z1::assemble(read_file(asm_in));
            std::ofstream out(asm_out, std::ios::binary);
            if (!out) {
                throw z1::Z1Error("cannot write " + asm_out);
            }
            z1::save_z1p(out, tape);
            return 0;
        }
        if (dis_cmd->parsed()) {
            std::ifstream in(dis_in, std::ios::binary);
            if (!in) {
                throw z1::Z1Error("cannot open " + dis_in);
            }
            std::string text = z1::disassemble(z1::load_z1p(in));
            if (dis_out.empty()) {
                std::cout << text;
            } else {
                write_file(dis_out, text);
            }
            return 0;
        }
        if (run_cmd->parsed()) {
            return cmd_run(flags);
        }
        if (app.get_subcommand("dump-microcode")->parsed()) {
            std::cout << z1::MicroTable::instance().listing();
            return 0;
        }
        if (dm_cmd->parsed()) {
            if (dm_load.empty()) {
                std::cout << z1::MemoryUnit(dm_words).dump();
            } else {
                std::ifstream in(dm_load);
                if (!in) {
                    throw z1::Z1Error("cannot open " + dm_load);
                }
                std::cout << z1::MemoryUnit::load_dump(in, dm_words).dump();
            }
            return 0;
        }
    } catch (const z1::Z1Error& e) {
        std::cerr << "z1: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
