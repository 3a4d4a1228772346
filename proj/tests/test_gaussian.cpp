#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cda/gaussian_int.hpp"

using namespace cda;

TEST_CASE("ring operations") {
    GaussianInt a(3, -2), b(-1, 4);
    CHECK((a + b) == GaussianInt(2, 2));
    CHECK((a - b) == GaussianInt(4, -6));
    CHECK((a * b) == GaussianInt(5, 14));
    CHECK((-a) == GaussianInt(-3, 2));
    CHECK(a.conj() == GaussianInt(3, 2));
    CHECK(a.norm() == 13);
    CHECK((a * a.conj()) == GaussianInt(13, 0));
}

TEST_CASE("norm is multiplicative") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        GaussianInt a(long(rng() % 41) - 20, long(rng() % 41) - 20);
        GaussianInt b(long(rng() % 41) - 20, long(rng() % 41) - 20);
        CHECK((a * b).norm() == a.norm() * b.norm());
    }
}

TEST_CASE("i powers cycle") {
    CHECK(GaussianInt::i_pow(0) == GaussianInt(1, 0));
    CHECK(GaussianInt::i_pow(1) == GaussianInt(0, 1));
    CHECK(GaussianInt::i_pow(2) == GaussianInt(-1, 0));
    CHECK(GaussianInt::i_pow(3) == GaussianInt(0, -1));
    CHECK(GaussianInt::i_pow(7) == GaussianInt::i_pow(-1));
    GaussianInt z(5, -7);
    z.muli();
    CHECK(z == GaussianInt(0, 1) * GaussianInt(5, -7));
}

TEST_CASE("exact division") {
    GaussianInt d(2, 1), q(-3, 5);
    GaussianInt z = d * q;
    GaussianInt got;
    REQUIRE(zi_divides(d, z, &got));
    CHECK(got == q);
    CHECK(!zi_divides(GaussianInt(2, 1), GaussianInt(1, 0)));
    CHECK(zi_exact_div(z, d) == q);
    CHECK_THROWS_AS(zi_exact_div(GaussianInt(1, 0), GaussianInt(2, 1)), internal_error);
    // zero divisor divides only zero
    CHECK(zi_divides(GaussianInt(0, 0), GaussianInt(0, 0)));
    CHECK(!zi_divides(GaussianInt(0, 0), GaussianInt(1, 0)));
}

TEST_CASE("rounded division leaves small remainder") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 300; ++t) {
        GaussianInt z(long(rng() % 201) - 100, long(rng() % 201) - 100);
        GaussianInt d(long(rng() % 21) - 10, long(rng() % 21) - 10);
        if (d.is_zero()) continue;
        GaussianInt q = zi_round_div(z, d);
        GaussianInt r = z - q * d;
        CHECK(2 * r.norm() <= d.norm());
    }
}

TEST_CASE("gcd divides both arguments") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        GaussianInt a(long(rng() % 101) - 50, long(rng() % 101) - 50);
        GaussianInt b(long(rng() % 101) - 50, long(rng() % 101) - 50);
        GaussianInt g = zi_gcd(a, b);
        if (a.is_zero() && b.is_zero()) {
            CHECK(g.is_zero());
            continue;
        }
        CHECK(zi_divides(g, a));
        CHECK(zi_divides(g, b));
    }
    // common factor survives
    GaussianInt f(1, 1);
    GaussianInt g = zi_gcd(f * GaussianInt(3, 2), f * GaussianInt(-5, 1));
    CHECK(zi_divides(f, g));
}

TEST_CASE("canonical associate") {
    GaussianInt z(3, -4);
    GaussianInt c = canonical_assoc(z);
    CHECK(c.re > 0);
    CHECK(c.im >= 0);
    // all four associates map to the same representative
    GaussianInt w = z;
    for (int k = 0; k < 4; ++k) {
        CHECK(canonical_assoc(w) == c);
        w.muli();
    }
    CHECK(canonical_assoc(GaussianInt(0, 0)).is_zero());
    CHECK(canonical_assoc(GaussianInt(0, -5)) == GaussianInt(5, 0));
}

TEST_CASE("unit inverse") {
    for (int k = 0; k < 4; ++k) {
        GaussianInt u = GaussianInt::i_pow(k);
        CHECK((u * zi_unit_inv(u)).is_one());
    }
    CHECK_THROWS_AS(zi_unit_inv(GaussianInt(1, 1)), std::invalid_argument);
}

TEST_CASE("decimal string parsing") {
    CHECK(parse_zint("0") == 0);
    CHECK(parse_zint("-17") == -17);
    CHECK(parse_zint("123456789012345678901234567890") ==
          Zint("123456789012345678901234567890"));
    CHECK_THROWS_AS(parse_zint("12x"), config_error);
    CHECK_THROWS_AS(parse_zint(""), config_error);
    CHECK_THROWS_AS(parse_zint("1.5"), config_error);
}

TEST_CASE("printing") {
    CHECK(to_string(GaussianInt(3, -4)) == "3-4i");
    CHECK(to_string(GaussianInt(-2, 7)) == "-2+7i");
    CHECK(to_string(GaussianInt(5, 0)) == "5");
}
