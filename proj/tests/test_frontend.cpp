#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ripl/check.hpp"
#include "ripl/parser.hpp"
#include "ripl/pretty.hpp"
#include "support/fuzz.hpp"

using namespace ripl;

namespace {

Program parse_ok(const std::string& src) {
    auto r = parse(src);
    INFO(format_diags(r.diags));
    REQUIRE(r.ok());
    return *r;
}

bool has_code(const std::vector<Diag>& ds, const std::string& code) {
    for (const auto& d : ds)
        if (d.code == code) return true;
    return false;
}

} // namespace

TEST_CASE("parse: inputs and outputs") {
    Program p = parse_ok("in a : image<50,40>; out a;");
    REQUIRE(p.inputs.size() == 1);
    CHECK(p.inputs[0].name == "a");
    CHECK(p.inputs[0].width == 50);
    CHECK(p.inputs[0].height == 40);
    CHECK(p.bindings.empty());
    REQUIRE(p.outputs.size() == 1);
    CHECK(p.outputs[0].name == "a");
}

TEST_CASE("parse: mapRow binding with identity kernel") {
    Program p = parse_ok("in a : image<8,8>; let b = mapRow(a, 1, \\v -> v); out b;");
    REQUIRE(p.bindings.size() == 1);
    const auto& app = p.bindings[0].app;
    CHECK(app.callee == "mapRow");
    REQUIRE(app.actuals.size() == 3);
    CHECK(app.actuals[0].kind == Actual::Kind::Name);
    CHECK(app.actuals[0].name == "a");
    CHECK(app.actuals[1].kind == Actual::Kind::Int);
    CHECK(app.actuals[1].value == 1);
    REQUIRE(app.actuals[2].kind == Actual::Kind::Lambda);
    const Kernel& k = *app.actuals[2].kernel;
    REQUIRE(k.params == std::vector<std::string>{"v"});
    CHECK(k.body->kind == Expr::Kind::Var);
}

TEST_CASE("parse: missing semicolon reports the offending token") {
    std::string src = "in a : image<8,8> out a;";
    auto r = parse(src);
    REQUIRE_FALSE(r.ok());
    REQUIRE_FALSE(r.diags.empty());
    CHECK(r.diags[0].code == "E_SYNTAX");
    CHECK(r.diags[0].pos.line == 1);
    // position is the 'out' token
    CHECK(r.diags[0].pos.col == static_cast<int>(src.find("out")) + 1);
}

TEST_CASE("parse: comments and negative fold init") {
    Program p = parse_ok("// comment\nin a : image<4,4>; // trailing\n"
                         "let s = foldScalar(a, -5, \\p acc -> acc + p);\nout s;");
    REQUIRE(p.bindings.size() == 1);
    CHECK(p.bindings[0].app.actuals[1].value == -5);
}

TEST_CASE("parse: kernel expression forms") {
    Program p = parse_ok(
        "in a : image<4,4>;\n"
        "let b = mapRow(a, 2, \\v -> let t = v[0] + 1 in [if t > 128 then 255 else t % 7, "
        "clamp(-v[1], 0, 255)]);\n"
        "out b;");
    const Kernel& k = *p.bindings[0].app.actuals[2].kernel;
    CHECK(k.body->kind == Expr::Kind::Let);
}

TEST_CASE("parse: convolve window pair") {
    Program p = parse_ok("in a : image<8,8>; let c = convolve(a, (3, 5), \\w -> w[7]); out c;");
    const auto& pair = p.bindings[0].app.actuals[1];
    CHECK(pair.kind == Actual::Kind::Pair);
    CHECK(pair.value == 3);
    CHECK(pair.second == 5);
}

TEST_CASE("parse: multiple errors are collected") {
    auto r = parse("in a : image<8,8>\nlet b = mapRow(a, 1, \\v -> );\nout b;");
    REQUIRE_FALSE(r.ok());
    CHECK(r.diags.size() >= 2);
}

TEST_CASE("parse: empty program rejected") {
    auto r = parse("");
    REQUIRE_FALSE(r.ok());
    CHECK(has_code(r.diags, "E_SYNTAX"));
}

TEST_CASE("pretty-print round trip is stable") {
    const char* sources[] = {
        "in a : image<50,40>; out a;",
        "in a : image<8,8>; let b = mapRow(a, 1, \\v -> v); out b;",
        "in a : image<8,8>; let c = convolve(a, (3, 3), \\w -> (w[0] + w[8]) / 2); out c;",
        "in a : image<8,8>; in b : image<8,8>; let z = combineRow(a, b, 8, 16, append); out z;",
        "in a : image<4,4>; let s = foldVector(a, 0, 256, \\p acc -> upd(acc, p, acc[p] + 1));"
        " out s;",
    };
    for (const char* src : sources) {
        Program p1 = parse_ok(src);
        std::string printed = pretty_program(p1);
        Program p2 = parse_ok(printed);
        CHECK(program_equal(p1, p2));
        CHECK(pretty_program(p2) == printed);
    }
}

TEST_CASE("pretty-print round trip on fuzzed programs") {
    for (uint32_t seed = 1; seed <= 60; ++seed) {
        auto gp = fuzz::generate_program(seed);
        INFO(gp.source);
        Program p1 = parse_ok(gp.source);
        Program p2 = parse_ok(pretty_program(p1));
        CHECK(program_equal(p1, p2));
    }
}

TEST_CASE("check: rebinding is rejected") {
    Program p = parse_ok("in a : image<8,8>; let b = mapRow(a, 1, \\v -> v);"
                         " let b = mapRow(a, 1, \\v -> v); out b;");
    auto r = check_program(p);
    REQUIRE_FALSE(r.ok());
    CHECK(has_code(r.diags, "E_REBIND"));
}

TEST_CASE("check: input name cannot be rebound") {
    Program p = parse_ok("in a : image<8,8>; let a = mapRow(a, 1, \\v -> v); out a;");
    auto r = check_program(p);
    REQUIRE_FALSE(r.ok());
    CHECK(has_code(r.diags, "E_REBIND"));
}

TEST_CASE("check: use before definition is rejected") {
    Program p = parse_ok("in a : image<8,8>; let b = mapRow(c, 1, \\v -> v);"
                         " let c = mapRow(a, 1, \\v -> v); out b;");
    auto r = check_program(p);
    REQUIRE_FALSE(r.ok());
    CHECK(has_code(r.diags, "E_UNBOUND"));
}

TEST_CASE("check: arity violations") {
    Program p = parse_ok("in a : image<8,8>; let b = mapRow(a, 1); out b;");
    auto r = check_program(p);
    REQUIRE_FALSE(r.ok());
    CHECK(has_code(r.diags, "E_ARITY"));

    Program q = parse_ok("in a : image<8,8>; let b = frobnicate(a, 1, \\v -> v); out b;");
    auto r2 = check_program(q);
    REQUIRE_FALSE(r2.ok());
    CHECK(has_code(r2.diags, "E_ARITY"));
}

TEST_CASE("check: append placement") {
    Program good = parse_ok("in a : image<8,8>; in b : image<8,8>;"
                            " let z = combineRow(a, b, 4, append); out z;");
    CHECK(check_program(good).ok());

    Program bad = parse_ok("in a : image<8,8>; let z = mapRow(a, 1, append); out z;");
    auto r = check_program(bad);
    REQUIRE_FALSE(r.ok());
    CHECK(has_code(r.diags, "E_APPEND"));
}

TEST_CASE("check: kernel bodies may only use params and locals") {
    Program p = parse_ok("in a : image<8,8>; let b = mapRow(a, 1, \\v -> stray); out b;");
    auto r = check_program(p);
    REQUIRE_FALSE(r.ok());
    CHECK(has_code(r.diags, "E_UNBOUND"));

    Program q = parse_ok("in a : image<8,8>;"
                         " let b = mapRow(a, 1, \\v -> let t = v[0] in [t]); out b;");
    CHECK(check_program(q).ok());
}

namespace {

// Brute-force scope walker, independent of check_program: walks the raw
// actual lists and tracks definition order with a plain vector.
bool naive_scope_ok(const Program& p) {
    std::vector<std::string> defined;
    auto is_defined = [&](const std::string& n) {
        return std::find(defined.begin(), defined.end(), n) != defined.end();
    };
    for (const auto& in : p.inputs) {
        if (is_defined(in.name)) return false;
        defined.push_back(in.name);
    }
    for (const auto& b : p.bindings) {
        for (const auto& a : b.app.actuals)
            if (a.kind == Actual::Kind::Name && !is_defined(a.name)) return false;
        if (is_defined(b.name)) return false;
        defined.push_back(b.name);
    }
    for (const auto& o : p.outputs)
        if (!is_defined(o.name)) return false;
    return true;
}

} // namespace

TEST_CASE("check agrees with a brute-force scope walker on fuzzed programs") {
    std::mt19937 rng(7);
    for (uint32_t seed = 100; seed < 170; ++seed) {
        auto gp = fuzz::generate_program(seed);
        Program p = parse_ok(gp.source);
        REQUIRE(naive_scope_ok(p));
        REQUIRE(check_program(p).ok());

        // mutate: rename one referenced image to an unknown name
        Program broken = p;
        bool mutated = false;
        for (auto& b : broken.bindings) {
            for (auto& a : b.app.actuals) {
                if (a.kind == Actual::Kind::Name) {
                    a.name = "zzz_unknown";
                    mutated = true;
                    break;
                }
            }
            if (mutated) break;
        }
        if (mutated) {
            CHECK_FALSE(naive_scope_ok(broken));
            CHECK_FALSE(check_program(broken).ok());
        }

        // mutate: duplicate a binding name
        if (!p.bindings.empty()) {
            Program dup = p;
            dup.bindings.push_back(dup.bindings.back());
            CHECK_FALSE(naive_scope_ok(dup));
            CHECK_FALSE(check_program(dup).ok());
        }
    }
}

TEST_CASE("every sample program in the corpus parses and checks") {
    namespace fs = std::filesystem;
    int count = 0;
    for (const auto& entry : fs::directory_iterator(SAMPLES_DIR)) {
        if (entry.path().extension() != ".ripl") continue;
        std::ifstream f(entry.path());
        std::stringstream ss;
        ss << f.rdbuf();
        INFO(entry.path().string());
        Program p = parse_ok(ss.str());
        CHECK(check_program(p).ok());
        ++count;
    }
    CHECK(count >= 10);
}
