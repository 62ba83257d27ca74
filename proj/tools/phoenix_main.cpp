#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "phoenix/bytecode.hpp"
#include "phoenix/compile.hpp"
#include "phoenix/lexer.hpp"
#include "phoenix/parser.hpp"
#include "phoenix/preprocess.hpp"
#include "phoenix/source.hpp"
#include "phoenix/vm.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCompile = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 66;

struct IoError {
    std::string message;
};

std::string read_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError{"cannot open '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError{"cannot read '" + path + "'"};
    return ss.str();
}

phoenix::SourceFile load_source(const std::string& path) {
    return phoenix::SourceFile::from_text(path, read_file_bytes(path));
}

void print_diagnostics(const std::vector<phoenix::Diagnostic>& diagnostics,
                       const phoenix::SourceFile& src) {
    for (const phoenix::Diagnostic& d : diagnostics) {
        std::cerr << phoenix::render_diagnostic(d, src) << "\n";
    }
}

bool has_phxc_extension(const std::string& path) {
    const std::string ext = ".phxc";
    return path.size() >= ext.size() &&
           path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
}

std::string default_output_path(const std::string& input) {
    const std::string src_ext = ".phx";
    if (input.size() >= src_ext.size() &&
        input.compare(input.size() - src_ext.size(), src_ext.size(),
                      src_ext) == 0) {
        return input + "c";
    }
    return input + ".phxc";
}

// Compiles a source file, printing every diagnostic; image valid on success.
std::optional<phoenix::ProgramImage> compile_file(const std::string& path) {
    phoenix::SourceFile src = load_source(path);
    phoenix::CompileResult result = phoenix::compile_source(src);
    print_diagnostics(result.diagnostics, src);
    if (!result.ok) return std::nullopt;
    return std::move(result.image);
}

phoenix::ProgramImage load_image_file(const std::string& path) {
    std::string bytes = read_file_bytes(path);
    std::vector<uint8_t> data(bytes.begin(), bytes.end());
    return phoenix::load_image(data);
}

int cmd_build(const std::string& input, std::string output) {
    std::optional<phoenix::ProgramImage> image = compile_file(input);
    if (!image) return kExitCompile;
    if (output.empty()) output = default_output_path(input);
    std::vector<uint8_t> bytes = phoenix::serialize_image(*image);
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError{"cannot open '" + output + "' for writing"};
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError{"cannot write '" + output + "'"};
    return kExitOk;
}

int cmd_run(const std::string& input, const std::string& input_script,
            std::optional<uint64_t> max_steps, bool trace) {
    phoenix::ProgramImage image;
    if (has_phxc_extension(input)) {
        image = load_image_file(input);
    } else {
        std::optional<phoenix::ProgramImage> compiled = compile_file(input);
        if (!compiled) return kExitCompile;
        image = std::move(*compiled);
    }

    phoenix::VmOptions opts;
    if (const char* env = std::getenv("PHOENIX_MAX_STEPS")) {
        opts.max_steps = std::strtoull(env, nullptr, 10);
    }
    if (max_steps) opts.max_steps = *max_steps;
    opts.trace = trace;

    std::ifstream script;
    std::istream* in = &std::cin;
    if (!input_script.empty()) {
        script.open(input_script, std::ios::binary);
        if (!script) throw IoError{"cannot open '" + input_script + "'"};
        in = &script;
    }

    try {
        phoenix::run_image(image, *in, std::cout, opts,
                           trace ? &std::cerr : nullptr);
    } catch (const phoenix::RuntimeError& e) {
        std::cout.flush();
        std::cerr << "خطأ وقت التشغيل " << e.code << ": " << e.message
                  << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_lex(const std::string& input) {
    phoenix::SourceFile src = load_source(input);
    try {
        std::vector<phoenix::Token> tokens = phoenix::tokenize(src);
        std::cout << phoenix::dump_tokens(tokens);
    } catch (const phoenix::CompileError& e) {
        std::cerr << phoenix::render_diagnostic(e.diagnostic, src) << "\n";
        return kExitCompile;
    }
    return kExitOk;
}

int cmd_parse(const std::string& input) {
    phoenix::SourceFile src = load_source(input);
    try {
        phoenix::Program program =
            phoenix::parse_program(phoenix::tokenize(src));
        std::cout << phoenix::dump_ast(program);
    } catch (const phoenix::CompileError& e) {
        std::cerr << phoenix::render_diagnostic(e.diagnostic, src) << "\n";
        return kExitCompile;
    }
    return kExitOk;
}

int cmd_check(const std::string& input) {
    phoenix::SourceFile src = load_source(input);
    phoenix::CompileResult result = phoenix::compile_source(src);
    print_diagnostics(result.diagnostics, src);
    return result.ok ? kExitOk : kExitCompile;
}

int cmd_disasm(const std::string& input) {
    phoenix::ProgramImage image;
    if (has_phxc_extension(input)) {
        image = load_image_file(input);
    } else {
        std::optional<phoenix::ProgramImage> compiled = compile_file(input);
        if (!compiled) return kExitCompile;
        image = std::move(*compiled);
    }
    std::cout << phoenix::disassemble(image);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phoenix compiler and virtual machine"};
    app.require_subcommand(1);

    std::string input;
    std::string output;
    std::string input_script;
    std::optional<uint64_t> max_steps;
    bool trace = false;

    CLI::App* build = app.add_subcommand("build", "Compile a source file to a .phxc image");
    build->add_option("input", input, "source file (.phx)")->required();
    build->add_option("-o,--output", output, "output image path (default: input with .phxc)");

    CLI::App* run = app.add_subcommand("run", "Compile if needed and execute");
    run->add_option("input", input, "source file (.phx) or image (.phxc)")->required();
    run->add_option("--input-script", input_script, "file that feeds أدخل lines");
    run->add_option("--max-steps", max_steps, "step limit before R-006");
    run->add_flag("--trace", trace, "trace each executed instruction to stderr");

    CLI::App* lex = app.add_subcommand("lex", "Dump the token stream");
    lex->add_option("input", input, "source file (.phx)")->required();

    CLI::App* parse = app.add_subcommand("parse", "Dump the syntax tree");
    parse->add_option("input", input, "source file (.phx)")->required();

    CLI::App* check = app.add_subcommand("check", "Run semantic checks and print diagnostics");
    check->add_option("input", input, "source file (.phx)")->required();

    CLI::App* disasm = app.add_subcommand("disasm", "Disassemble an image or source file");
    disasm->add_option("input", input, "image (.phxc) or source file (.phx)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            return app.exit(e);
        }
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (build->parsed()) return cmd_build(input, output);
        if (run->parsed()) return cmd_run(input, input_script, max_steps, trace);
        if (lex->parsed()) return cmd_lex(input);
        if (parse->parsed()) return cmd_parse(input);
        if (check->parsed()) return cmd_check(input);
        if (disasm->parsed()) return cmd_disasm(input);
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.message << "\n";
        return kExitIo;
    } catch (const phoenix::CompileError& e) {
        // image-loading failures carry no source text
        std::cerr << phoenix::phase_name(e.diagnostic.phase) << " "
                  << e.diagnostic.code << " " << e.diagnostic.message << "\n";
        return kExitCompile;
    }
    return kExitUsage;
}
