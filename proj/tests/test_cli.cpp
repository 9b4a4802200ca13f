#include <catch2/catch_amalgamated.hpp>

#include "ripl/pgm.hpp"
#include "support/fuzz.hpp"
#include "support/proc.hpp"

using proc::RunResult;
using proc::TempDir;

namespace {

const std::string kBin = RIPLC_PATH;

std::string q(const std::string& s) { return "'" + s + "'"; }

} // namespace

TEST_CASE("cli: compile prints binding types and writes artifacts") {
    TempDir dir;
    dir.write("p.ripl",
              "in a : image<50,40>;\n"
              "let b = concatMapRow(a, 2, 4, \\v -> [v[0], v[0], v[1], v[1]]);\n"
              "out b;\n");
    RunResult r = proc::run(kBin + " compile " + q(dir.file("p.ripl")) + " --emit both -o " +
                            q(dir.path()));
    INFO(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("b : Im(100,40)") != std::string::npos);
    CHECK(dir.exists("p.dot"));
    CHECK(dir.exists("p.ir"));
}

TEST_CASE("cli: compile errors exit 1 with an ERROR line") {
    TempDir dir;
    dir.write("bad.ripl", "in a : image<50,40>;\nlet b = mapRow(a, 3, \\v -> v);\nout b;\n");
    RunResult r = proc::run(kBin + " compile " + q(dir.file("bad.ripl")));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("ERROR E_DIV 2:9") != std::string::npos);
}

TEST_CASE("cli: missing file exits 2") {
    RunResult r = proc::run(kBin + " compile /nonexistent/nowhere.ripl");
    CHECK(r.exit_code == 2);
}

TEST_CASE("cli: run writes canonical output images") {
    TempDir dir;
    dir.write("id.ripl", "in a : image<6,4>;\nout a;\n");
    std::mt19937 rng(5);
    ripl::Image im = fuzz::random_image(rng, 6, 4);
    dir.write("a.pgm", ripl::write_pgm(im, ripl::PgmFormat::P2)); // feed the ASCII form
    RunResult r = proc::run(kBin + " run " + q(dir.file("id.ripl")) + " --input a=" +
                            q(dir.file("a.pgm")) + " -o " + q(dir.path()));
    INFO(r.output);
    CHECK(r.exit_code == 0);
    REQUIRE(dir.exists("a_f0.pgm"));
    CHECK(dir.read("a_f0.pgm") == ripl::write_pgm(im)); // canonical P5 rewrite
}

TEST_CASE("cli: oracle self-check passes on a sample") {
    TempDir dir;
    dir.write("edges.ripl",
              "in img : image<16,16>;\n"
              "let mean = convolve(img, (3, 3), \\w -> (w[0] + w[1] + w[2] + w[3] + w[4] + w[5]"
              " + w[6] + w[7] + w[8]) / 9);\n"
              "let edges = zipWithRow(img, mean, \\p q -> abs(p - q));\n"
              "out edges;\n");
    std::mt19937 rng(6);
    dir.write("img.pgm", ripl::write_pgm(fuzz::random_image(rng, 16, 16)));
    RunResult r = proc::run(kBin + " run " + q(dir.file("edges.ripl")) + " --input img=" +
                            q(dir.file("img.pgm")) + " --oracle --frames 2 -o " + q(dir.path()));
    INFO(r.output);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("outputs match") != std::string::npos);
    CHECK(dir.exists("edges_f0.pgm"));
    CHECK(dir.exists("edges_f1.pgm"));
}

TEST_CASE("cli: mismatched input size exits 1 with E_INPUT_DIM") {
    TempDir dir;
    dir.write("id.ripl", "in a : image<8,8>;\nout a;\n");
    std::mt19937 rng(7);
    dir.write("small.pgm", ripl::write_pgm(fuzz::random_image(rng, 4, 4)));
    RunResult r = proc::run(kBin + " run " + q(dir.file("id.ripl")) + " --input a=" +
                            q(dir.file("small.pgm")));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("E_INPUT_DIM") != std::string::npos);
}

TEST_CASE("cli: forced shallow FIFOs deadlock with exit 3 and a diagnosis") {
    TempDir dir;
    dir.write("join.ripl",
              "in a : image<16,16>;\n"
              "let m = mapRow(a, 1, \\v -> v);\n"
              "let cv = convolve(a, (3, 3), \\w -> w[4]);\n"
              "let z = zipWithRow(m, cv, \\p q -> min(p + q, 255));\n"
              "out z;\n");
    std::mt19937 rng(8);
    dir.write("a.pgm", ripl::write_pgm(fuzz::random_image(rng, 16, 16)));

    RunResult starved = proc::run(kBin + " run " + q(dir.file("join.ripl")) + " --input a=" +
                                  q(dir.file("a.pgm")) + " --force-depth 1 -o " + q(dir.path()));
    INFO(starved.output);
    CHECK(starved.exit_code == 3);
    CHECK(starved.output.find("E_DEADLOCK") != std::string::npos);
    CHECK(starved.output.find("starved") != std::string::npos);

    // default policy completes and matches the reference
    RunResult ok = proc::run(kBin + " run " + q(dir.file("join.ripl")) + " --input a=" +
                             q(dir.file("a.pgm")) + " --oracle -o " + q(dir.path()));
    INFO(ok.output);
    CHECK(ok.exit_code == 0);
}

TEST_CASE("cli: run --stats writes stats and the memory report") {
    TempDir dir;
    dir.write("b.ripl",
              "in a : image<8,8>;\nlet m = mapRow(a, 1, \\v -> [min(v[0] + 3, 255)]);\nout m;\n");
    std::mt19937 rng(9);
    dir.write("a.pgm", ripl::write_pgm(fuzz::random_image(rng, 8, 8)));
    RunResult r = proc::run(kBin + " run " + q(dir.file("b.ripl")) + " --input a=" +
                            q(dir.file("a.pgm")) + " --stats -o " + q(dir.path()));
    INFO(r.output);
    CHECK(r.exit_code == 0);
    REQUIRE(dir.exists("stats.txt"));
    REQUIRE(dir.exists("memreport.txt"));
    CHECK(dir.read("stats.txt").find("actor.m.firings=64") != std::string::npos);
    CHECK(dir.read("memreport.txt").find("actor.m.elements=1") != std::string::npos);
}

TEST_CASE("cli: estimate verdicts map to exit codes") {
    TempDir dir;
    dir.write("small.ripl", "in a : image<8,8>;\nlet m = mapRow(a, 1, \\v -> v);\nout m;\n");
    RunResult fits = proc::run(kBin + " estimate " + q(dir.file("small.ripl")) + " -o " +
                               q(dir.path()));
    INFO(fits.output);
    CHECK(fits.exit_code == 0);
    CHECK(fits.output.find("verdict: fits") != std::string::npos);
    CHECK(dir.exists("small.mem"));

    RunResult zero = proc::run(kBin + " estimate " + q(dir.file("small.ripl")) +
                               " --budget 0 -o " + q(dir.path()));
    CHECK(zero.exit_code == 4);

    // a transpose-heavy pipeline overflows the default budget
    std::string heavy = "in a : image<512,512>;\n";
    std::string prev = "a";
    for (int i = 0; i < 36; ++i) {
        std::string name = "s" + std::to_string(i);
        heavy += "let " + name + " = " + (i % 2 == 0 ? "mapCol" : "mapRow") + "(" + prev +
                 ", 1, \\v -> v);\n";
        prev = name;
    }
    heavy += "out " + prev + ";\n";
    dir.write("heavy.ripl", heavy);
    RunResult over = proc::run(kBin + " estimate " + q(dir.file("heavy.ripl")) + " -o " +
                               q(dir.path()));
    INFO(over.output);
    CHECK(over.exit_code == 4);
    CHECK(over.output.find("exceeds budget") != std::string::npos);
}

TEST_CASE("cli: trace output is printed when requested") {
    TempDir dir;
    dir.write("one.ripl", "in a : image<1,1>;\nout a;\n");
    ripl::Image px(1, 1, 42);
    dir.write("a.pgm", ripl::write_pgm(px));
    RunResult r = proc::run(kBin + " run " + q(dir.file("one.ripl")) + " --input a=" +
                            q(dir.file("a.pgm")) + " --trace -o " + q(dir.path()));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("tick 1: fired=[src_a]") != std::string::npos);
}
