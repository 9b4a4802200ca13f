#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ripl/eval.hpp"
#include "ripl/parser.hpp"
#include "ripl/typecheck.hpp"
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

Kernel kernel(const std::string& text) {
    auto k = parse_kernel_text(text);
    REQUIRE(k.ok());
    return *k;
}

} // namespace

TEST_CASE("eval_kernel: clamped add") {
    auto r = eval_kernel(kernel("\\p q -> min(p + q, 255)"), {200ll, 100ll});
    CHECK(std::get<long long>(r) == 255);
}

TEST_CASE("eval_kernel: identity on vectors") {
    auto r = eval_kernel(kernel("\\v -> v"), {std::vector<long long>{1, 2, 3}});
    CHECK(std::get<std::vector<long long>>(r) == std::vector<long long>{1, 2, 3});
}

TEST_CASE("eval_kernel: histogram step") {
    auto r = eval_kernel(kernel("\\p acc -> upd(acc, p, acc[p] + 1)"),
                         {2ll, std::vector<long long>{0, 0, 0, 0}});
    CHECK(std::get<std::vector<long long>>(r) == std::vector<long long>{0, 0, 1, 0});
}

TEST_CASE("eval_kernel: division by zero raises E_DIVZERO") {
    try {
        eval_kernel(kernel("\\p acc -> acc / p"), {0ll, 10ll});
        FAIL("expected E_DIVZERO");
    } catch (const RuntimeError& e) {
        CHECK(e.code() == "E_DIVZERO");
        CHECK(e.pos().line >= 1);
    }
}

TEST_CASE("eval_kernel: let, if, unary, comparisons") {
    auto r = eval_kernel(kernel("\\p q -> let d = p - q in if d < 0 then -d else d"),
                         {3ll, 10ll});
    CHECK(std::get<long long>(r) == 7);
    auto r2 = eval_kernel(kernel("\\p q -> (p >= q) + (p == q) * 10 + !(p != q) * 100"),
                          {5ll, 5ll});
    CHECK(std::get<long long>(r2) == 111);
}

namespace {

Image ramp_image(long long w, long long h, int step = 7) {
    Image im(w, h);
    for (long long i = 0; i < w * h; ++i)
        im.pixels[static_cast<size_t>(i)] = static_cast<uint8_t>((i * step) % 256);
    return im;
}

} // namespace

TEST_CASE("convolve with the center tap is the identity") {
    for (auto [a, b] : {std::pair<int, int>{3, 3}, {1, 3}, {5, 1}, {5, 5}}) {
        std::string src = "in x : image<8,8>; let c = convolve(x, (" + std::to_string(a) + ", " +
                          std::to_string(b) + "), \\w -> w[" + std::to_string((a * b) / 2) +
                          "]); out c;";
        TypedProgram tp = typed(src);
        Image im = ramp_image(8, 8);
        auto out = run_reference(tp, {{"x", im}});
        CHECK(std::get<Image>(out.at("c")) == im);
    }
}

TEST_CASE("replicate padding keeps constant images constant") {
    const char* kernels[] = {
        "\\w -> (w[0] + w[1] + w[2] + w[3] + w[4] + w[5] + w[6] + w[7] + w[8]) / 9",
        "\\w -> max(w[0], max(w[4], w[8]))",
        "\\w -> clamp(w[4] * 3 - w[0] - w[8], 0, 255)",
    };
    for (const char* k : kernels) {
        std::string src = std::string("in x : image<6,5>; let c = convolve(x, (3, 3), ") + k +
                          "); out c;";
        TypedProgram tp = typed(src);
        Image im(6, 5, 7);
        auto out = run_reference(tp, {{"x", im}});
        CHECK(std::get<Image>(out.at("c")) == im);
    }
}

TEST_CASE("foldVector histogram counts every pixel") {
    TypedProgram tp = typed("in x : image<4,4>;"
                            " let h = foldVector(x, 0, 256, \\p acc -> upd(acc, p, acc[p] + 1));"
                            " out h;");
    Image im(4, 4, 0);
    im.set(2, 1, 255);
    auto out = run_reference(tp, {{"x", im}});
    auto hist = std::get<std::vector<long long>>(out.at("h"));
    CHECK(hist[0] == 15);
    CHECK(hist[255] == 1);
    long long sum = 0;
    for (long long v : hist) sum += v;
    CHECK(sum == 16);
}

TEST_CASE("foldScalar visits pixels in row-major order") {
    // non-commutative kernel: acc*256 + p reproduces the traversal order
    TypedProgram tp = typed("in x : image<2,2>;"
                            " let s = foldScalar(x, 0, \\p acc -> acc * 256 + p); out s;");
    Image im(2, 2);
    im.set(0, 0, 1);
    im.set(1, 0, 2);
    im.set(0, 1, 3);
    im.set(1, 1, 4);
    auto out = run_reference(tp, {{"x", im}});
    CHECK(std::get<long long>(out.at("s")) == ((1 * 256 + 2) * 256 + 3) * 256 + 4);
}

TEST_CASE("combineRow append concatenates rows") {
    TypedProgram tp = typed("in a : image<4,3>; in b : image<4,3>;"
                            " let z = combineRow(a, b, 4, 8, append); out z;");
    Image a = ramp_image(4, 3, 3);
    Image b = ramp_image(4, 3, 11);
    auto out = run_reference(tp, {{"a", a}, {"b", b}});
    const Image& z = std::get<Image>(out.at("z"));
    REQUIRE(z.width == 8);
    REQUIRE(z.height == 3);
    for (long long y = 0; y < 3; ++y)
        for (long long x = 0; x < 4; ++x) {
            CHECK(z.at(x, y) == a.at(x, y));
            CHECK(z.at(x + 4, y) == b.at(x, y));
        }
}

TEST_CASE("combineCol append stacks columns") {
    TypedProgram tp = typed("in a : image<3,2>; in b : image<3,2>;"
                            " let z = combineCol(a, b, 2, 4, append); out z;");
    Image a = ramp_image(3, 2, 5);
    Image b = ramp_image(3, 2, 9);
    auto out = run_reference(tp, {{"a", a}, {"b", b}});
    const Image& z = std::get<Image>(out.at("z"));
    REQUIRE(z.width == 3);
    REQUIRE(z.height == 4);
    for (long long x = 0; x < 3; ++x) {
        CHECK(z.at(x, 0) == a.at(x, 0));
        CHECK(z.at(x, 1) == a.at(x, 1));
        CHECK(z.at(x, 2) == b.at(x, 0));
        CHECK(z.at(x, 3) == b.at(x, 1));
    }
}

TEST_CASE("zipWithRow and zipWithCol agree") {
    TypedProgram row = typed("in a : image<8,6>; in b : image<8,6>;"
                             " let z = zipWithRow(a, b, \\p q -> abs(p - q)); out z;");
    TypedProgram col = typed("in a : image<8,6>; in b : image<8,6>;"
                             " let z = zipWithCol(a, b, \\p q -> abs(p - q)); out z;");
    Image a = ramp_image(8, 6, 13);
    Image b = ramp_image(8, 6, 29);
    auto r1 = run_reference(row, {{"a", a}, {"b", b}});
    auto r2 = run_reference(col, {{"a", a}, {"b", b}});
    CHECK(std::get<Image>(r1.at("z")) == std::get<Image>(r2.at("z")));
}

TEST_CASE("map identity kernels leave the image unchanged") {
    for (const char* skel : {"mapRow", "mapCol"}) {
        for (int a : {1, 2, 4, 8}) {
            std::string src = "in x : image<8,8>; let m = " + std::string(skel) + "(x, " +
                              std::to_string(a) + ", \\v -> v); out m;";
            TypedProgram tp = typed(src);
            Image im = ramp_image(8, 8);
            auto out = run_reference(tp, {{"x", im}});
            CHECK(std::get<Image>(out.at("m")) == im);
        }
    }
}

TEST_CASE("mapCol chunks along columns") {
    // reverse each 2-chunk of every column; with height 2 this flips rows
    TypedProgram tp = typed("in x : image<3,2>; let m = mapCol(x, 2, \\v -> [v[1], v[0]]);"
                            " out m;");
    Image im = ramp_image(3, 2, 17);
    auto out = run_reference(tp, {{"x", im}});
    const Image& m = std::get<Image>(out.at("m"));
    for (long long x = 0; x < 3; ++x) {
        CHECK(m.at(x, 0) == im.at(x, 1));
        CHECK(m.at(x, 1) == im.at(x, 0));
    }
}

TEST_CASE("concatMapRow doubles pixels horizontally") {
    TypedProgram tp = typed("in x : image<4,2>;"
                            " let w = concatMapRow(x, 1, 2, \\v -> [v[0], v[0]]); out w;");
    Image im = ramp_image(4, 2, 21);
    auto out = run_reference(tp, {{"x", im}});
    const Image& w = std::get<Image>(out.at("w"));
    REQUIRE(w.width == 8);
    for (long long y = 0; y < 2; ++y)
        for (long long x = 0; x < 4; ++x) {
            CHECK(w.at(2 * x, y) == im.at(x, y));
            CHECK(w.at(2 * x + 1, y) == im.at(x, y));
        }
}

TEST_CASE("run_reference: identity program") {
    TypedProgram tp = typed("in a : image<8,8>; out a;");
    Image im = ramp_image(8, 8);
    auto out = run_reference(tp, {{"a", im}});
    CHECK(std::get<Image>(out.at("a")) == im);
}

TEST_CASE("run_reference: brighten then darken restores the original") {
    TypedProgram tp = typed(
        "in a : image<8,8>;"
        " let up = mapRow(a, 1, \\v -> [v[0] + 10]);"
        " let down = mapRow(up, 1, \\v -> [v[0] - 10]);"
        " out down;");
    Image im(8, 8);
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> px(10, 245); // clamping never engages
    for (auto& p : im.pixels) p = static_cast<uint8_t>(px(rng));
    auto out = run_reference(tp, {{"a", im}});
    CHECK(std::get<Image>(out.at("down")) == im);
}

TEST_CASE("run_reference: input size mismatch") {
    TypedProgram tp = typed("in a : image<8,8>; out a;");
    try {
        run_reference(tp, {{"a", Image(4, 4)}});
        FAIL("expected E_INPUT_DIM");
    } catch (const RuntimeError& e) {
        CHECK(e.code() == "E_INPUT_DIM");
    }
}

TEST_CASE("fold count equals the pixel count") {
    TypedProgram tp = typed("in a : image<6,7>; let n = foldScalar(a, 0, \\p acc -> acc + 1);"
                            " out n;");
    auto out = run_reference(tp, {{"a", ramp_image(6, 7)}});
    CHECK(std::get<long long>(out.at("n")) == 42);
}

TEST_CASE("intermediate dimensions match the inferred types on fuzzed programs") {
    std::mt19937 rng(99);
    for (uint32_t seed = 500; seed < 550; ++seed) {
        auto gp = fuzz::generate_program(seed);
        INFO(gp.source);
        TypedProgram tp = typed(gp.source);

        std::map<std::string, Image> inputs;
        for (size_t i = 0; i < gp.input_names.size(); ++i)
            inputs[gp.input_names[i]] =
                fuzz::random_image(rng, gp.input_dims[i].first, gp.input_dims[i].second);

        // replicate run_reference but snoop every intermediate value
        std::map<std::string, Value> env;
        for (const auto& [name, im] : inputs) env[name] = im;
        for (const auto& tb : tp.bindings) {
            std::vector<const Image*> args;
            for (const auto& img : tb.call.images) args.push_back(&std::get<Image>(env.at(img)));
            Value v = apply_skeleton(tb, args);
            const ValueType& want = tp.type_of.at(tb.name);
            if (auto* imt = std::get_if<ImageType>(&want)) {
                const Image& im = std::get<Image>(v);
                CHECK(im.width == imt->width);
                CHECK(im.height == imt->height);
            } else if (auto* vt = std::get_if<VectorType>(&want)) {
                CHECK(static_cast<long long>(std::get<std::vector<long long>>(v).size()) ==
                      vt->length);
            } else {
                CHECK(std::holds_alternative<long long>(v));
            }
            env[tb.name] = std::move(v);
        }
    }
}
