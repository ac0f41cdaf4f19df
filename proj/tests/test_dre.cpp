/**
 * @file test_dre.cpp
 * @brief Tests for decomposable randomized encodings: the builder discipline,
 *        the masked-product constructions, exhaustive verification, and the
 *        JSON wire format.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qrpsm/dre.hpp"
#include "qrpsm/psm.hpp"  // BudgetError

using namespace qrpsm;

namespace {

Polynomial product_plus_target(u32 k) {
    Polynomial t = Polynomial::variable(1);
    Polynomial prod = Polynomial::constant(1);
    for (u32 v = 2; v <= k + 1; ++v) prod = prod * Polynomial::variable(v);
    return t + prod;
}

/// Minimal hand-rolled encoding of x1 over Z_3: c0 = x1 + r1, c1 = -r1.
Dre tiny_dre() {
    Dre d;
    d.p = 3;
    d.n = 1;
    d.m_r = 1;
    d.coords = {{1, {{1, true, {}}, {1, false, {1}}}}, {0, {{2, false, {1}}}}};
    d.dec = {{1, {0}}, {1, {1}}};
    d.target = Polynomial::variable(1);
    return d;
}

}  // namespace

// ===== coordinate evaluation =====

TEST_CASE("coordinates and decoder evaluate termwise") {
    Dre d = tiny_dre();
    std::vector<u32> r = {2};
    CHECK(d.eval_coord(0, 1, r) == 0);  // 1 + 2 mod 3
    CHECK(d.eval_coord(1, 0, r) == 1);  // -2 mod 3
    std::vector<u32> x = {1};
    std::vector<u32> m = d.encode(x, r);
    CHECK(m == std::vector<u32>{0, 1});
    CHECK(d.decode(m) == 1);

    CHECK(d.size() == 2);
    CHECK(d.component_sizes() == std::vector<u32>{1, 1});
    CHECK(d.coords_by_owner() == std::vector<std::vector<u32>>{{1}, {0}});

    CHECK_THROWS_AS(d.encode(std::vector<u32>{}, r), std::invalid_argument);
    std::vector<u32> no_r;
    CHECK_THROWS_AS(d.eval_coord(0, 1, no_r), std::invalid_argument);
    std::vector<u32> short_m = {1};
    CHECK_THROWS_AS(d.decode(short_m), std::invalid_argument);
}

TEST_CASE("the hand-rolled single-variable encoding verifies") {
    Dre d = tiny_dre();
    std::string why;
    CHECK(verify_dre(d, Polynomial::variable(1), {}, &why));
    CHECK(why.empty());
}

// ===== builder =====

TEST_CASE("builder reproduces the single-variable encoding") {
    DreBuilder b(3, 1);
    u32 c0 = b.add_coord(1, {{1, true, {}}});
    u32 c1 = b.add_coord(0, {}, false);
    b.add_dec(1, {c0});
    b.add_dec(1, {c1});
    Dre d = b.finish(Polynomial::variable(1), c1);
    CHECK(d.m_r == 1);
    CHECK(d.coords.size() == 2);
    CHECK(b.fresh_of(c0) == 1);
    // the absorber soaked up -r1
    CHECK(d.coords[c1].terms == std::vector<CoordTerm>{{2, false, {1}}});
    CHECK(verify_dre(d, Polynomial::variable(1)));
}

TEST_CASE("builder rejects structural misuse") {
    CHECK_THROWS_AS(DreBuilder(4, 1), std::invalid_argument);  // p not prime
    DreBuilder b(5, 2);
    CHECK_THROWS_AS(b.add_coord(3, {}), std::invalid_argument);  // owner > n
    CHECK_THROWS_AS(b.add_coord(0, {{1, true, {}}}), std::invalid_argument);
    u32 c0 = b.add_coord(1, {{1, true, {}}});
    CHECK_THROWS_AS(b.add_dec(1, {5}), std::invalid_argument);
    u32 c1 = b.add_coord(0, {}, false);
    CHECK_THROWS_AS(b.fresh_of(c1), std::invalid_argument);
    b.add_dec(1, {c0});
    b.add_dec(1, {c1});
    // absorber carrying fresh randomness is refused
    CHECK_THROWS_AS(b.finish(Polynomial::variable(1), c0), std::logic_error);
    // a residue that still depends on inputs is refused
    CHECK_THROWS_AS(b.finish(Polynomial::variable(2), c1), std::logic_error);
}

TEST_CASE("builder demands a linear single-use absorber") {
    DreBuilder b(3, 1);
    u32 c0 = b.add_coord(1, {{1, true, {}}});
    u32 c1 = b.add_coord(0, {}, false);
    b.add_dec(1, {c0});
    b.add_dec(1, {c1});
    b.add_dec(2, {c1});  // second use
    CHECK_THROWS_AS(b.finish(Polynomial::variable(1), c1), std::logic_error);

    DreBuilder b2(3, 1);
    u32 d0 = b2.add_coord(1, {{1, true, {}}});
    u32 d1 = b2.add_coord(0, {}, false);
    b2.add_dec(1, {d0, d1});  // absorber inside a product
    CHECK_THROWS_AS(b2.finish(Polynomial::variable(1), d1), std::logic_error);

    DreBuilder b3(3, 2);
    u32 e0 = b3.add_coord(1, {{1, true, {}}});
    u32 e1 = b3.add_coord(2, {{1, true, {}}}, false);  // non-absorber, no fresh
    u32 e2 = b3.add_coord(0, {}, false);
    b3.add_dec(1, {e0});
    b3.add_dec(1, {e1});
    b3.add_dec(1, {e2});
    CHECK_THROWS_AS(b3.finish(Polynomial::parse("x1 + x2"), e2), std::logic_error);
}

// ===== masked-product constructions =====

TEST_CASE("offset-product encodings verify exhaustively") {
    struct Case {
        u32 k, p;
    };
    for (Case c : {Case{1, 3}, Case{1, 5}, Case{2, 3}, Case{2, 5}, Case{3, 3}}) {
        CAPTURE(c.k);
        CAPTURE(c.p);
        Dre d = dre_product_plus(c.k, c.p);
        CHECK(d.n == c.k + 1);
        std::string why;
        CHECK(verify_dre(d, product_plus_target(c.k), {}, &why));
        CHECK(why.empty());
    }
}

TEST_CASE("offset-product gadget sizes double and add two") {
    CHECK(dre_product_plus(1, 3).size() == 2);
    CHECK(dre_product_plus(1, 3).m_r == 1);
    CHECK(dre_product_plus(2, 3).size() == 5);
    CHECK(dre_product_plus(2, 3).m_r == 4);
    CHECK(dre_product_plus(3, 3).size() == 11);
    CHECK(dre_product_plus(3, 3).m_r == 10);
    // one coordinate per player, and the player-1 absorber is fresh-free
    Dre d = dre_product_plus(2, 3);
    CHECK(d.component_sizes() == std::vector<u32>{0, 1, 2, 2});
    CHECK(d.coords_by_owner()[1] == std::vector<u32>{4});
    CHECK_THROWS_AS(dre_product_plus(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(dre_product_plus(2, 4), std::invalid_argument);
}

TEST_CASE("large offset-product instances stay correct at random points") {
    Dre d = dre_product_plus(3, 5);
    Polynomial t = product_plus_target(3);
    std::mt19937 rng(31337);
    for (int round = 0; round < 100; ++round) {
        std::vector<u32> x(d.n), r(d.m_r);
        for (u32& v : x) v = rng() % 5;
        for (u32& v : r) v = rng() % 5;
        u32 want = t.eval_mod(x, 5);
        CHECK(d.decode(d.encode(x, r)) == want);
    }
    // exhaustive verification of this instance is over the default budget
    CHECK_THROWS_AS(verify_dre(d, t), BudgetError);
}

TEST_CASE("polynomial encodings verify exhaustively") {
    struct Case {
        const char* f;
        u32 p;
    };
    for (Case c : {Case{"x1 + x2", 3}, Case{"x1*x2", 5}, Case{"x1*x2 + x3", 3},
                   Case{"2*x1*x2 + x3 + 1", 3}}) {
        CAPTURE(c.f);
        Polynomial f = Polynomial::parse(c.f);
        Dre d = dre_polynomial(f, c.p);
        CHECK(d.component_sizes()[0] == 1);  // the randomness-only absorber
        std::string why;
        CHECK(verify_dre(d, f, {}, &why));
        CHECK(why.empty());
    }
}

TEST_CASE("polynomial encoding edge cases") {
    // the zero polynomial needs no coordinates at all
    Dre z = dre_polynomial(Polynomial(), 5);
    CHECK(z.size() == 0);
    CHECK(z.m_r == 0);
    CHECK(verify_dre(z, Polynomial()));

    // coefficients divisible by p vanish from the encoding
    Polynomial f = Polynomial::parse("3*x1 + x2");
    Dre d = dre_polynomial(f, 3);
    CHECK(d.size() == 2);  // one gadget coordinate for x2, plus the absorber
    CHECK(verify_dre(d, f));

    CHECK_THROWS_AS(dre_polynomial(Polynomial::variable(1), 6), std::invalid_argument);
}

// ===== verification verdicts =====

TEST_CASE("verification explains correctness failures") {
    Dre d = dre_product_plus(1, 3);
    d.dec[0].coef = 2;  // decoder no longer matches
    std::string why;
    CHECK_FALSE(verify_dre(d, product_plus_target(1), {}, &why));
    CHECK(why.substr(0, 21) == "correctness failed at");
}

TEST_CASE("verification explains security failures") {
    // unmasked product: coordinates expose x1 and x2 directly
    Dre d;
    d.p = 3;
    d.n = 2;
    d.m_r = 0;
    d.coords = {{1, {{1, true, {}}}}, {2, {{1, true, {}}}}};
    d.dec = {{1, {0, 1}}};
    d.target = Polynomial::parse("x1*x2");
    std::string why;
    CHECK_FALSE(verify_dre(d, d.target, {}, &why));
    CHECK(why.substr(0, 16) == "security failed:");
}

TEST_CASE("verification rejects structurally invalid encodings") {
    Dre d = tiny_dre();
    d.coords[0].owner = 2;  // n = 1
    CHECK_THROWS_AS(verify_dre(d, Polynomial::variable(1)), std::invalid_argument);

    Dre e = tiny_dre();
    e.coords[0].terms[1].rs = {2};  // m_r = 1
    CHECK_THROWS_AS(verify_dre(e, Polynomial::variable(1)), std::invalid_argument);

    Dre g = tiny_dre();
    g.dec[1].coords = {7};
    CHECK_THROWS_AS(verify_dre(g, Polynomial::variable(1)), std::invalid_argument);

    // a target wider than the encoding is a verdict, not an exception
    std::string why;
    CHECK_FALSE(verify_dre(tiny_dre(), Polynomial::parse("x1 + x2"), {}, &why));
    CHECK(why == "target reads more variables than the encoding provides");
}

TEST_CASE("worker count does not change the verdict") {
    // large enough that the randomness space is actually split across threads
    Dre d = dre_product_plus(3, 3);
    DreVerifyOptions par;
    par.workers = 4;
    CHECK(verify_dre(d, product_plus_target(3), par));

    Dre e = dre_product_plus(2, 5);
    e.dec[0].coef = mulmod(e.dec[0].coef, 2, 5);
    std::string why1, why4;
    CHECK_FALSE(verify_dre(e, product_plus_target(2), {}, &why1));
    CHECK_FALSE(verify_dre(e, product_plus_target(2), par, &why4));
    CHECK(why1 == why4);
}

// ===== wire format =====

TEST_CASE("JSON round-trip preserves every field") {
    for (Dre d : {tiny_dre(), dre_product_plus(2, 5),
                  dre_polynomial(Polynomial::parse("2*x1*x2 + x3 + 1"), 3)}) {
        Dre back = Dre::from_json(d.to_json());
        CHECK(back == d);
    }
}

TEST_CASE("JSON parsing validates the encoding") {
    const std::string good = tiny_dre().to_json();
    CHECK(Dre::from_json(good) == tiny_dre());

    auto corrupt = [&](const std::string& from, const std::string& to) {
        std::string s = good;
        auto pos = s.find(from);
        REQUIRE(pos != std::string::npos);
        s.replace(pos, from.size(), to);
        return s;
    };
    CHECK_THROWS_AS(Dre::from_json(""), std::invalid_argument);
    CHECK_THROWS_AS(Dre::from_json("{}"), std::invalid_argument);
    CHECK_THROWS_AS(Dre::from_json(corrupt("\"p\":3", "\"p\":4")), std::invalid_argument);
    CHECK_THROWS_AS(Dre::from_json(corrupt("\"m_r\":1", "\"m_r\":0")), std::invalid_argument);
    CHECK_THROWS_AS(Dre::from_json(corrupt("\"owner\":1", "\"owner\":2")), std::invalid_argument);
    CHECK_THROWS_AS(Dre::from_json(corrupt("[2,false,[1]]", "[5,false,[1]]")),
                    std::invalid_argument);
    CHECK_THROWS_AS(Dre::from_json(corrupt("[1,[1]]", "[1,[9]]")), std::invalid_argument);
}
