#include <catch2/catch_amalgamated.hpp>

#include "ripl/compile.hpp"
#include "support/fuzz.hpp"

using namespace ripl;

namespace {

TypedProgram typed(const std::string& src) {
    auto p = parse(src);
    REQUIRE(p.ok());
    auto c = check_program(*p);
    REQUIRE(c.ok());
    auto t = infer_sizes(*c);
    INFO(format_diags(t.diags));
    REQUIRE(t.ok());
    return *t;
}

int count_kind(const DpnGraph& g, ActorKind k) {
    int n = 0;
    for (const auto& a : g.actors)
        if (a.kind == k) ++n;
    return n;
}

const Actor& actor(const DpnGraph& g, const std::string& id) {
    int i = g.find_actor(id);
    REQUIRE(i >= 0);
    return g.actors[static_cast<size_t>(i)];
}

} // namespace

TEST_CASE("smallest pipeline: source, map, sink") {
    auto tp = typed("in a : image<8,8>; let b = mapRow(a, 1, \\v -> v); out b;");
    DpnGraph g = build_graph(tp);
    CHECK(g.actors.size() == 3);
    CHECK(g.wires.size() == 2);
    CHECK(count_kind(g, ActorKind::Source) == 1);
    CHECK(count_kind(g, ActorKind::Map) == 1);
    CHECK(count_kind(g, ActorKind::Sink) == 1);
}

TEST_CASE("fan-out: one output port per consumer") {
    auto tp = typed("in a : image<8,8>; in b : image<8,8>;"
                    " let z1 = zipWithRow(a, b, \\p q -> p + q);"
                    " let z2 = zipWithRow(a, z1, \\p q -> p + q);"
                    " out z1; out z2;");
    DpnGraph g = build_graph(tp);
    CHECK(actor(g, "src_a").out_ports.size() == 2);  // z1 and z2
    CHECK(actor(g, "z1").out_ports.size() == 2);     // z2 and its sink
    CHECK(actor(g, "z2").out_ports.size() == 1);
}

TEST_CASE("zipWith lowers to a two-input actor") {
    auto tp = typed("in a : image<8,8>; let z = zipWithRow(a, a, \\p q -> p + q); out z;");
    DpnGraph g = lower(tp);
    const Actor& z = actor(g, "z");
    REQUIRE(z.in_ports.size() == 2);
    CHECK(z.in_ports[0].rate == 1);
    CHECK(z.in_ports[1].rate == 1);
    CHECK(actor(g, "src_a").out_ports.size() == 2); // self-zip still uses two ports
}

TEST_CASE("transposition insertion counts") {
    auto count_tr = [&](const std::string& src) {
        DpnGraph g = insert_orientation_adapters(build_graph(typed(src)));
        return count_kind(g, ActorKind::Transpose);
    };
    // row then col: one adapter between the stages, none at the sink
    CHECK(count_tr("in a : image<8,8>; let r = mapRow(a, 1, \\v -> v);"
                   " let c = mapCol(r, 1, \\v -> v); out c;") == 1);
    // row then row: none
    CHECK(count_tr("in a : image<8,8>; let r = mapRow(a, 1, \\v -> v);"
                   " let r2 = mapRow(r, 1, \\v -> v); out r2;") == 0);
    // four alternating stages: three adapters
    CHECK(count_tr("in a : image<8,8>;"
                   " let s1 = mapRow(a, 1, \\v -> v);"
                   " let s2 = mapCol(s1, 1, \\v -> v);"
                   " let s3 = mapRow(s2, 1, \\v -> v);"
                   " let s4 = mapCol(s3, 1, \\v -> v);"
                   " out s4;") == 3);
    // column-wise first stage needs an adapter after the row-major source
    CHECK(count_tr("in a : image<8,8>; let c = mapCol(a, 1, \\v -> v); out c;") == 1);
    // convolve is row-wise, so col -> convolve needs one
    CHECK(count_tr("in a : image<8,8>; let c = mapCol(a, 1, \\v -> v);"
                   " let v = convolve(c, (3, 3), \\w -> w[4]); out v;") == 2);
}

TEST_CASE("transpose insertion is idempotent") {
    auto tp = typed("in a : image<8,8>; let r = mapRow(a, 1, \\v -> v);"
                    " let c = mapCol(r, 1, \\v -> v); out c;");
    DpnGraph once = insert_orientation_adapters(build_graph(tp));
    DpnGraph twice = insert_orientation_adapters(once);
    CHECK(graph_equal(once, twice));
}

TEST_CASE("rates follow the chunk sizes") {
    auto tp = typed("in a : image<50,40>;"
                    " let b = concatMapRow(a, 2, 4, \\v -> [v[0], v[0], v[1], v[1]]);"
                    " let m = mapRow(b, 1, \\v -> v);"
                    " let s = foldScalar(m, 0, \\p acc -> acc + p);"
                    " out s;");
    DpnGraph g = assign_rates(insert_orientation_adapters(build_graph(tp)));
    CHECK(actor(g, "b").in_ports[0].rate == 2);
    CHECK(actor(g, "b").out_ports[0].rate == 4);
    CHECK(actor(g, "m").in_ports[0].rate == 1);
    CHECK(actor(g, "s").in_ports[0].rate == 1);
    CHECK(actor(g, "s").out_ports[0].rate == 1); // one token per frame
}

TEST_CASE("fold vector emits its whole result per frame") {
    auto tp = typed("in a : image<4,4>;"
                    " let h = foldVector(a, 0, 256, \\p acc -> upd(acc, p, acc[p] + 1));"
                    " out h;");
    DpnGraph g = lower(tp);
    CHECK(actor(g, "h").out_ports[0].rate == 256);
    // the sink wire must be able to hold one full emission
    for (const auto& w : g.wires)
        if (g.actors[w.src.actor].id == "h") CHECK(w.capacity >= 256);
}

TEST_CASE("straight pipelines keep the default depth") {
    auto tp = typed("in a : image<8,8>; let b = mapRow(a, 1, \\v -> v);"
                    " let c = mapRow(b, 1, \\v -> v); out c;");
    DpnGraph g = lower(tp);
    for (const auto& w : g.wires) CHECK(w.capacity == kDefaultFifoDepth);
}

TEST_CASE("source to sink only") {
    auto tp = typed("in a : image<4,4>; out a;");
    DpnGraph g = lower(tp);
    REQUIRE(g.wires.size() == 1);
    CHECK(g.wires[0].capacity == kDefaultFifoDepth);
    CHECK(g.actors.size() == 2);
}

TEST_CASE("reconvergent paths get balancing slack") {
    auto tp = typed("in a : image<16,16>;"
                    " let m = mapRow(a, 1, \\v -> v);"
                    " let cv = convolve(a, (3, 3), \\w -> w[4]);"
                    " let z = zipWithRow(m, cv, \\p q -> min(p + q, 255));"
                    " out z;");
    DpnGraph g = lower(tp);
    // convolve warm-up: (3-1)*16 + 3 = 35; map branch needs >= 35 total slack
    long long short_branch = 0;
    for (const auto& w : g.wires) {
        const std::string& s = g.actors[w.src.actor].id;
        const std::string& d = g.actors[w.dst.actor].id;
        if ((s == "src_a" && d == "m") || (s == "m" && d == "z")) short_branch += w.capacity;
    }
    CHECK(short_branch >= 35);
}

TEST_CASE("transpose on one branch is balanced like any other latency") {
    auto tp = typed("in a : image<8,8>;"
                    " let c = mapCol(a, 1, \\v -> v);"
                    " let z = zipWithCol(c, a, \\p q -> p + q);"
                    " out z;");
    DpnGraph g = lower(tp);
    // branch through c carries a transpose (64 warm-up); the direct branch
    // also gets one (zipWithCol wants column order), so both paths carry
    // 64; any remaining imbalance stays small and the default depth holds
    auto violations = validate_graph(g);
    for (const auto& v : violations) INFO(v);
    CHECK(violations.empty());
}

TEST_CASE("validate: the full lowering of fuzzed programs passes") {
    for (uint32_t seed = 700; seed < 760; ++seed) {
        auto gp = fuzz::generate_program(seed);
        INFO(gp.source);
        auto tp = typed(gp.source);
        DpnGraph g = lower(tp);
        auto violations = validate_graph(g);
        for (const auto& v : violations) INFO(v);
        CHECK(violations.empty());

        // actor count bookkeeping: sources + bindings + sinks + transposes
        size_t transposes = 0;
        for (const auto& a : g.actors)
            if (a.kind == ActorKind::Transpose) ++transposes;
        CHECK(g.actors.size() == tp.program.inputs.size() + tp.bindings.size() +
                                     tp.program.outputs.size() + transposes);

        // rates divide each wire's per-frame token count
        for (const auto& w : g.wires) {
            long long tokens = w.frame.tokens();
            CHECK(tokens % g.actors[w.src.actor].out_ports[w.src.port].rate == 0);
            CHECK(tokens % g.actors[w.dst.actor].in_ports[w.dst.port].rate == 0);
        }
    }
}

TEST_CASE("validate: dangling port") {
    DpnGraph g;
    Actor src;
    src.id = "s";
    src.kind = ActorKind::Source;
    src.out_ports.resize(1);
    Actor sink;
    sink.id = "k";
    sink.kind = ActorKind::Sink;
    sink.in_ports.resize(2); // second port never wired
    g.actors = {src, sink};
    Wire w;
    w.src = {0, 0};
    w.dst = {1, 0};
    w.capacity = 4;
    g.wires = {w};
    auto violations = validate_graph(g);
    bool found = false;
    for (const auto& v : violations)
        if (v.find("unconnected port") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("validate: cycle") {
    DpnGraph g;
    for (int i = 0; i < 2; ++i) {
        Actor a;
        a.id = "m" + std::to_string(i);
        a.kind = ActorKind::Map;
        a.chunk_in = a.chunk_out = 1;
        a.in_ports.resize(1);
        a.out_ports.resize(1);
        g.actors.push_back(a);
    }
    Wire w01, w10;
    w01.src = {0, 0};
    w01.dst = {1, 0};
    w01.capacity = 1;
    w10.src = {1, 0};
    w10.dst = {0, 0};
    w10.capacity = 1;
    g.wires = {w01, w10};
    auto violations = validate_graph(g);
    bool found = false;
    for (const auto& v : violations)
        if (v.find("cycle") != std::string::npos) found = true;
    CHECK(found);
}
