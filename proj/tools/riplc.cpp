// riplc: compile RIPL programs to dataflow process networks, stream
// images through them, and estimate on-chip memory.
//
// Exit codes: 0 ok, 1 compile/semantic error, 2 I/O error, 3 deadlock,
// 4 memory budget exceeded.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ripl/compile.hpp"
#include "ripl/emit.hpp"
#include "ripl/eval.hpp"
#include "ripl/memest.hpp"
#include "ripl/pgm.hpp"
#include "ripl/sim.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCompile = 1;
constexpr int kExitIo = 2;
constexpr int kExitDeadlock = 3;
constexpr int kExitBudget = 4;

bool use_color() {
    const char* v = std::getenv("RIPLC_COLOR");
    return v && std::string(v) == "1";
}

void print_diags(const std::vector<ripl::Diag>& diags) {
    bool color = use_color();
    for (const auto& d : diags) {
        if (color) std::cerr << "\033[31m";
        std::cerr << ripl::format_diag(d);
        if (color) std::cerr << "\033[0m";
        std::cerr << "\n";
    }
}

void print_runtime_error(const ripl::RuntimeError& e) {
    bool color = use_color();
    if (color) std::cerr << "\033[31m";
    std::cerr << e.what();
    if (color) std::cerr << "\033[0m";
    std::cerr << "\n";
    if (!e.detail().empty()) std::cerr << e.detail();
}

int read_file(const std::string& path, std::string& out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "riplc: cannot open '" << path << "'\n";
        return kExitIo;
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    out = ss.str();
    return kExitOk;
}

int write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "riplc: cannot write '" << path.string() << "'\n";
        return kExitIo;
    }
    f << content;
    return kExitOk;
}

std::string program_stem(const std::string& path) {
    return fs::path(path).stem().string();
}

struct CompileArgs {
    std::string file;
    std::string emit;
    std::string out_dir = ".";
};

int run_compile(const CompileArgs& args) {
    std::string src;
    if (int rc = read_file(args.file, src)) return rc;

    auto compiled = ripl::compile_source(src);
    if (!compiled.ok()) {
        print_diags(compiled.diags);
        return kExitCompile;
    }

    for (const auto& tb : compiled->typed.bindings)
        std::cout << tb.name << " : " << ripl::type_text(tb.result) << "\n";

    fs::path dir(args.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::string stem = program_stem(args.file);
    if (args.emit == "dot" || args.emit == "both") {
        if (int rc = write_file(dir / (stem + ".dot"), ripl::emit_dot(compiled->graph)))
            return rc;
    }
    if (args.emit == "ir" || args.emit == "both") {
        if (int rc = write_file(dir / (stem + ".ir"), ripl::emit_actor_ir(compiled->graph)))
            return rc;
    }
    return kExitOk;
}

struct RunArgs {
    std::string file;
    std::vector<std::string> inputs; // name=path
    long long frames = 1;
    bool stats = false;
    bool trace = false;
    bool oracle = false;
    std::string out_dir = ".";
    long long force_depth = 0; // testing hook: override every FIFO depth
};

std::string render_value_text(const ripl::Value& v) {
    std::ostringstream os;
    if (auto* s = std::get_if<long long>(&v)) {
        os << *s << "\n";
    } else if (auto* vec = std::get_if<std::vector<long long>>(&v)) {
        for (size_t i = 0; i < vec->size(); ++i) os << (i ? " " : "") << (*vec)[i];
        os << "\n";
    }
    return os.str();
}

int run_run(const RunArgs& args) {
    std::string src;
    if (int rc = read_file(args.file, src)) return rc;

    auto compiled = ripl::compile_source(src);
    if (!compiled.ok()) {
        print_diags(compiled.diags);
        return kExitCompile;
    }

    if (args.force_depth > 0)
        for (auto& w : compiled->graph.wires) w.capacity = args.force_depth;

    std::map<std::string, ripl::Image> images;
    for (const auto& spec : args.inputs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos) {
            std::cerr << "riplc: --input expects name=file.pgm, got '" << spec << "'\n";
            return kExitIo;
        }
        std::string name = spec.substr(0, eq);
        std::string path = spec.substr(eq + 1);
        std::string bytes;
        if (int rc = read_file(path, bytes)) return rc;
        auto im = ripl::read_pgm(bytes);
        if (!im.ok()) {
            print_diags(im.diags);
            return kExitIo;
        }
        images[name] = std::move(*im);
    }

    // each frame repeats the supplied image
    std::map<std::string, std::vector<ripl::Image>> frames;
    for (const auto& [name, im] : images)
        frames[name] = std::vector<ripl::Image>(static_cast<size_t>(args.frames), im);

    ripl::SimConfig cfg;
    cfg.frames = args.frames;
    cfg.trace = args.trace;
    cfg.trace_out = &std::cout;

    ripl::SimResult result;
    try {
        result = ripl::simulate(compiled->graph, frames, cfg);
    } catch (const ripl::RuntimeError& e) {
        print_runtime_error(e);
        if (e.code() == "E_DEADLOCK") return kExitDeadlock;
        return kExitCompile;
    }

    if (args.oracle) {
        std::map<std::string, ripl::Value> ref;
        try {
            ref = ripl::run_reference(compiled->typed, images);
        } catch (const ripl::RuntimeError& e) {
            print_runtime_error(e);
            return kExitCompile;
        }
        for (const auto& [name, per_frame] : result.outputs) {
            for (const auto& v : per_frame) {
                if (!(v == ref.at(name))) {
                    std::cerr << "riplc: simulator and reference disagree on output '" << name
                              << "'\n";
                    return kExitCompile;
                }
            }
        }
        std::cout << "oracle check: outputs match\n";
    }

    fs::path dir(args.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    for (const auto& [name, per_frame] : result.outputs) {
        for (size_t f = 0; f < per_frame.size(); ++f) {
            std::string base = name + "_f" + std::to_string(f);
            if (auto* im = std::get_if<ripl::Image>(&per_frame[f])) {
                if (int rc = write_file(dir / (base + ".pgm"), ripl::write_pgm(*im))) return rc;
            } else {
                if (int rc = write_file(dir / (base + ".txt"),
                                        render_value_text(per_frame[f])))
                    return rc;
            }
        }
    }

    if (args.stats) {
        auto rep = ripl::analyze_pipeline(compiled->graph, result, args.frames);
        std::ostringstream os;
        os << ripl::render_stats(compiled->graph, result.stats);
        os << "fill_latency=" << rep.fill_latency << "\n";
        os << "makespan=" << rep.makespan << "\n";
        os << "throughput=" << rep.throughput << "\n";
        os << "pipeline_depth=" << rep.pipeline_depth << "\n";
        os << "sequential_baseline=" << rep.baseline << "\n";
        os << "speedup=" << rep.speedup << "\n";
        if (int rc = write_file(dir / "stats.txt", os.str())) return rc;
        auto mem = ripl::estimate_design(compiled->graph);
        if (int rc = write_file(dir / "memreport.txt", ripl::render_mem_kv(mem))) return rc;
        std::cout << "ticks: " << result.stats.ticks << "  fill: " << rep.fill_latency
                  << "  throughput: " << rep.throughput << " tokens/tick\n";
    }
    return kExitOk;
}

struct EstimateArgs {
    std::string file;
    long long budget = ripl::kDefaultBramBudget;
    long long lut_threshold = ripl::kDefaultLutThreshold;
    std::string out_dir = ".";
};

int run_estimate(const EstimateArgs& args) {
    std::string src;
    if (int rc = read_file(args.file, src)) return rc;

    auto compiled = ripl::compile_source(src);
    if (!compiled.ok()) {
        print_diags(compiled.diags);
        return kExitCompile;
    }

    auto rep = ripl::estimate_design(compiled->graph, args.budget, args.lut_threshold);
    std::cout << ripl::render_mem_table(rep);

    fs::path dir(args.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::string stem = program_stem(args.file);
    if (int rc = write_file(dir / (stem + ".mem"), ripl::render_mem_kv(rep))) return rc;

    return rep.fits ? kExitOk : kExitBudget;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIPL compiler and dataflow simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("riplc ") + ripl::kToolVersion);

    CompileArgs cargs;
    auto* compile = app.add_subcommand("compile", "Compile a program and print binding types");
    compile->add_option("file", cargs.file, "RIPL source file")->required();
    compile->add_option("--emit", cargs.emit, "Artifacts to write: dot, ir, or both")
        ->check(CLI::IsMember({"dot", "ir", "both"}));
    compile->add_option("-o,--out-dir", cargs.out_dir, "Output directory");

    RunArgs rargs;
    auto* run = app.add_subcommand("run", "Compile and stream images through the network");
    run->add_option("file", rargs.file, "RIPL source file")->required();
    run->add_option("--input", rargs.inputs, "Input image binding, name=file.pgm");
    run->add_option("--frames", rargs.frames, "Number of frames to stream")
        ->check(CLI::PositiveNumber);
    run->add_flag("--stats", rargs.stats, "Write simulation stats and memory report");
    run->add_flag("--trace", rargs.trace, "Print a per-tick firing trace");
    run->add_flag("--oracle", rargs.oracle,
                  "Also run the reference interpreter and compare outputs");
    run->add_option("-o,--out-dir", rargs.out_dir, "Output directory");
    run->add_option("--force-depth", rargs.force_depth,
                    "Override every FIFO depth (testing hook)")
        ->check(CLI::PositiveNumber);

    EstimateArgs eargs;
    auto* estimate = app.add_subcommand("estimate", "Estimate on-chip memory for a program");
    estimate->add_option("file", eargs.file, "RIPL source file")->required();
    estimate->add_option("--budget", eargs.budget, "BRAM budget in bytes");
    estimate->add_option("--lut-threshold", eargs.lut_threshold,
                         "Max elements for a LUT-class buffer");
    estimate->add_option("-o,--out-dir", eargs.out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compile->parsed()) return run_compile(cargs);
        if (run->parsed()) return run_run(rargs);
        if (estimate->parsed()) return run_estimate(eargs);
    } catch (const std::exception& e) {
        std::cerr << "riplc: internal error: " << e.what() << "\n";
        return kExitCompile;
    }
    return kExitOk;
}
