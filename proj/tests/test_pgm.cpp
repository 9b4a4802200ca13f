#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ripl/pgm.hpp"
#include "support/fuzz.hpp"

using namespace ripl;

TEST_CASE("p5: header and raw bytes") {
    std::string bytes = "P5\n2 2\n255\n";
    bytes += '\x00';
    bytes += '\x7f';
    bytes += '\x80';
    bytes += '\xff';
    auto r = read_pgm(bytes);
    REQUIRE(r.ok());
    CHECK(r->width == 2);
    CHECK(r->height == 2);
    CHECK(r->pixels == std::vector<uint8_t>{0, 127, 128, 255});
}

TEST_CASE("p2 with comments reads like the equivalent p5") {
    std::string p2 = "P2\n# a comment\n2 2 # inline\n255\n0 127\n128 255\n";
    std::string p5 = "P5\n2 2\n255\n";
    p5 += '\x00';
    p5 += '\x7f';
    p5 += '\x80';
    p5 += '\xff';
    auto a = read_pgm(p2);
    auto b = read_pgm(p5);
    REQUIRE(a.ok());
    REQUIRE(b.ok());
    CHECK(*a == *b);
}

TEST_CASE("rejections carry the right codes") {
    CHECK(read_pgm("P6\n2 2\n255\n....").diags[0].code == "E_MAGIC");
    CHECK(read_pgm("P5\n2 2\n65535\n").diags[0].code == "E_MAXVAL");
    CHECK(read_pgm("P5\n0 2\n255\n").diags[0].code == "E_HEADER");
    CHECK(read_pgm("P5\nx y\n255\n").diags[0].code == "E_HEADER");
    CHECK(read_pgm("P5\n4 4\n255\nabc").diags[0].code == "E_TRUNCATED");
    CHECK(read_pgm("P2\n2 2\n255\n1 2 3").diags[0].code == "E_TRUNCATED");
    CHECK(read_pgm("P2\n2 1\n100\n50 101").diags[0].code == "E_TRUNCATED");
}

TEST_CASE("canonical writer fixtures") {
    Image one(1, 1, 0);
    std::string p5 = write_pgm(one, PgmFormat::P5);
    std::string want = "P5\n1 1\n255\n";
    want += '\x00';
    CHECK(p5 == want);

    Image two(2, 1);
    two.set(0, 0, 10);
    two.set(1, 0, 20);
    CHECK(write_pgm(two, PgmFormat::P2) == "P2\n2 1\n255\n10 20\n");
}

TEST_CASE("round trip on fuzzed images, both formats") {
    std::mt19937 rng(31337);
    std::uniform_int_distribution<long long> dim(1, 40);
    for (int i = 0; i < 100; ++i) {
        Image im = fuzz::random_image(rng, dim(rng), dim(rng));
        for (PgmFormat f : {PgmFormat::P5, PgmFormat::P2}) {
            std::string bytes = write_pgm(im, f);
            auto back = read_pgm(bytes);
            REQUIRE(back.ok());
            CHECK(*back == im);
            // canonical: same image, same bytes
            CHECK(write_pgm(*back, f) == bytes);
        }
    }
}
