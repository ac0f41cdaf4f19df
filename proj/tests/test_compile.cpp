/**
 * @file test_compile.cpp
 * @brief Tests for the Boolean-function compiler: embedding analysis, offset
 *        selection, the two-level randomized encoding, enumeration hooks,
 *        cost estimation, and the compiled-descriptor wire format.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qrpsm/compile.hpp"

using namespace qrpsm;

namespace {

Polynomial P(const char* s) { return Polynomial::parse(s); }

}  // namespace

// ===== flagship two-player instances =====

TEST_CASE("two-player AND compiles to the documented artifact") {
    QrPsmFromDre c = compile(TruthTable::and_fn(2), P("x1*x2"));
    CHECK(c.p == 7);
    CHECK(c.a0 == 3);
    CHECK(c.dre_len() == 11);
    CHECK(c.h.m_r == 10);
    CHECK_FALSE(c.flip_sign);
    CHECK(c.protocol.players() == 2);
    CHECK(c.protocol.msg_arity == std::vector<u32>{8, 3});
    CHECK(c.protocol.randomness_size == 847425747ull);  // 3 * 7^10
    REQUIRE(c.protocol.hooks.has_value());
    CHECK(c.protocol.hooks->slice_count == 343);

    // decoder argument classes: never zero, matching AND
    LegendreTable t(7);
    CHECK(t(addmod(c.a0, 0, 7)) == -1);
    CHECK(t(addmod(c.a0, 1, 7)) == 1);

    // sampled executions decode correctly at both ends of the index space
    for (u64 r : {u64(0), u64(12345678), c.protocol.randomness_size - 1}) {
        CHECK(execute(c.protocol, {1, 1}, r).out == 1);
        CHECK(execute(c.protocol, {1, 0}, r).out == -1);
        CHECK(execute(c.protocol, {0, 0}, r).out == -1);
    }
}

TEST_CASE("two-player XOR compiles at the same size") {
    QrPsmFromDre c = compile(TruthTable::xor_fn(2), P("x1 + x2 - 2*x1*x2"));
    CHECK(c.p == 7);
    CHECK(c.a0 == 3);
    CHECK(c.dre_len() == 11);
    CHECK(c.h.m_r == 10);
    CHECK(c.protocol.randomness_size == 847425747ull);
    for (u64 r : {u64(9), u64(847425746)}) {
        CHECK(execute(c.protocol, {1, 0}, r).out == 1);
        CHECK(execute(c.protocol, {1, 1}, r).out == -1);
    }
}

TEST_CASE("slice streams partition the randomness space consistently") {
    QrPsmFromDre c = compile(TruthTable::and_fn(2), P("x1*x2"));
    const ProtocolHooks& H = *c.protocol.hooks;
    std::vector<u32> x = {1, 1};
    u64 count = 0;
    u64 last_r = 0;
    bool first = true;
    H.stream_slice(x, 0, [&](u64 r, u64 packed) {
        if (count < 100) {
            Transcript tr = execute(c.protocol, x, r);
            CHECK(H.pack(tr.m.data()) == packed);
            CHECK(H.slice_of(tr.m.data()) == 0);
        }
        if (!first) CHECK(r > last_r);
        first = false;
        last_r = r;
        ++count;
    });
    // three pinned digits: each slice holds |R| / 7^3 tuples
    CHECK(count == c.protocol.randomness_size / 343);
}

// ===== small instances verified end to end =====

TEST_CASE("constant functions compile to tiny exhaustively verifiable protocols") {
    TruthTable one = TruthTable::from_hex("0x3", 1);
    QrPsmFromDre c = compile(one, Polynomial());
    CHECK(c.p == 3);
    CHECK(c.a0 == 1);
    CHECK(c.dre_len() == 4);
    CHECK(c.h.m_r == 3);
    CHECK(c.protocol.randomness_size == 27);
    REQUIRE(c.protocol.hooks.has_value());
    CHECK(c.protocol.hooks->slice_count == 9);

    Target t = Target::from_truth_table(one);
    CHECK(verify_correctness(c.protocol, t).ok);
    CHECK(verify_security(c.protocol, t).ok);  // both inputs share one fiber
}

TEST_CASE("flipped orientation carries through compilation") {
    TruthTable zero = TruthTable::from_hex("0x0", 1);
    CompileOptions opt;
    opt.flip_sign = true;
    QrPsmFromDre c = compile(zero, Polynomial(), opt);
    CHECK(c.p == 3);
    CHECK(c.a0 == 1);  // +1 demanded where f = 0
    CHECK(c.flip_sign);
    Target t = Target::from_truth_table(zero, true);
    CHECK(verify_correctness(c.protocol, t).ok);
    CHECK(verify_security(c.protocol, t).ok);

    // two-player AND under the flipped orientation picks the other offset
    QrPsmFromDre a = compile(TruthTable::and_fn(2), P("x1*x2"), opt);
    CHECK(a.p == 7);
    CHECK(a.a0 == 2);  // class(+1) at 2, class(-1) at 3
    for (u64 r : {u64(0), u64(777)}) {
        CHECK(execute(a.protocol, {1, 1}, r).out == -1);
        CHECK(execute(a.protocol, {0, 1}, r).out == 1);
    }
}

TEST_CASE("single-variable identity compiles and verifies exhaustively") {
    TruthTable id = TruthTable::from_hex("0x2", 1);
    QrPsmFromDre c = compile(id, P("x1"));
    CHECK(c.p == 7);
    CHECK(c.a0 == 3);
    CHECK(c.dre_len() == 6);
    CHECK(c.h.m_r == 5);
    CHECK(c.protocol.randomness_size == 50421);  // 3 * 7^5

    Target t = Target::from_truth_table(id);
    CHECK(verify_correctness(c.protocol, t).ok);
    CHECK(verify_security(c.protocol, t).ok);

    // the full stream agrees with the plain encoder, in ascending order
    const ProtocolHooks& H = *c.protocol.hooks;
    std::vector<u32> x = {1};
    u64 expect_r = 0;
    H.stream_all(x, [&](u64 r, const u32* msgs) {
        CHECK(r == expect_r);
        if (r < 50) {
            Transcript tr = execute(c.protocol, x, r);
            for (u32 j = 0; j < tr.m.size(); ++j) CHECK(tr.m[j] == msgs[j]);
        }
        ++expect_r;
    });
    CHECK(expect_r == c.protocol.randomness_size);
}

TEST_CASE("a function ignoring one player still compiles securely") {
    TruthTable dict = TruthTable::from_hex("0xa", 2);  // f(x) = x1
    QrPsmFromDre c = compile(dict, P("x1"));
    CHECK(c.p == 7);
    CHECK(c.protocol.players() == 2);
    CHECK(c.protocol.msg_arity == std::vector<u32>{6, 0});  // player 2 is silent
    CHECK(c.protocol.randomness_size == 50421);

    Target t = Target::from_truth_table(dict);
    CHECK(verify_correctness(c.protocol, t).ok);
    CHECK(verify_security(c.protocol, t).ok);  // fibers {00,01} and {10,11}
}

// ===== rejected inputs =====

TEST_CASE("compilation rejects non-embeddings and out-of-shape polynomials") {
    CHECK_THROWS_WITH_AS(compile(TruthTable::xor_fn(2), P("x1*x2")),
                         "compile: g does not embed f (value collision at x=1)",
                         std::invalid_argument);
    // degree three is beyond the compact encoder
    CHECK_THROWS_AS(compile(TruthTable::and_fn(3), P("x1*x2*x3")), std::invalid_argument);
    // quadratic monomials sharing a variable are too
    CHECK_THROWS_AS(compile(TruthTable::from_hex("0xc8", 3), P("x1*x2 + x2*x3")),
                    std::invalid_argument);
    // g reading variables f does not have
    CHECK_THROWS_AS(compile(TruthTable::and_fn(2), P("x1*x2*x3")), std::invalid_argument);
    // value range too wide to scan
    TruthTable one = TruthTable::from_hex("0x3", 1);
    CHECK_THROWS_AS(compile(one, P("1048576*x1")), std::invalid_argument);
}

// ===== cost estimation =====

TEST_CASE("cost estimates use the compact encoder when the shape allows") {
    CostEstimate e = estimate_cost(TruthTable::and_fn(2), P("x1*x2"));
    CHECK(e.p == 7);
    CHECK(e.s == 11);
    CHECK(e.bits == 33);
    CHECK(e.exact);

    CostEstimate x = estimate_cost(TruthTable::xor_fn(2), P("x1 + x2 - 2*x1*x2"));
    CHECK(x.s == 11);
    CHECK(x.exact);
}

TEST_CASE("cost estimates fall back to per-monomial sizing") {
    CostEstimate e = estimate_cost(TruthTable::and_fn(3), P("x1*x2*x3"));
    CHECK(e.p == 7);  // the value range still has length 2
    CHECK_FALSE(e.exact);
    CHECK(e.s == 27);
    CHECK(e.bits == 81);
}

// ===== wire format =====

TEST_CASE("compiled descriptors round-trip") {
    QrPsmFromDre c = compile(TruthTable::and_fn(2), P("x1*x2"));
    QrPsmFromDre back = QrPsmFromDre::from_json(c.to_json());
    CHECK(back.p == c.p);
    CHECK(back.a0 == c.a0);
    CHECK(back.h == c.h);
    CHECK(back.f.to_hex() == c.f.to_hex());
    CHECK(back.f.arity() == 2);
    CHECK_FALSE(back.flip_sign);
    CHECK(back.protocol.randomness_size == c.protocol.randomness_size);
    // the rebuilt protocol behaves identically
    for (u64 r : {u64(3), u64(999999)}) {
        for (u32 xi = 0; xi < 4; ++xi) {
            std::vector<u32> x = {xi & 1, xi >> 1};
            CHECK(execute(back.protocol, x, r).to_line() == execute(c.protocol, x, r).to_line());
        }
    }
}

TEST_CASE("descriptor parsing rejects inconsistent replays") {
    const std::string good = compile(TruthTable::and_fn(2), P("x1*x2")).to_json();
    CHECK_NOTHROW(QrPsmFromDre::from_json(good));

    auto corrupt = [&](const std::string& from, const std::string& to) {
        std::string s = good;
        auto pos = s.find(from);
        REQUIRE(pos != std::string::npos);
        s.replace(pos, from.size(), to);
        return s;
    };
    CHECK_THROWS_AS(QrPsmFromDre::from_json("not json"), std::invalid_argument);
    CHECK_THROWS_AS(QrPsmFromDre::from_json("{}"), std::invalid_argument);
    // offset zero can never produce nonzero classes
    CHECK_THROWS_AS(QrPsmFromDre::from_json(corrupt("\"a0\":3", "\"a0\":0")),
                    std::invalid_argument);
    // offset whose classes do not match f
    CHECK_THROWS_AS(QrPsmFromDre::from_json(corrupt("\"a0\":3", "\"a0\":4")),
                    std::invalid_argument);
    // claimed length disagreeing with the encoding
    CHECK_THROWS_AS(QrPsmFromDre::from_json(corrupt("\"dre_len\":11", "\"dre_len\":10")),
                    std::invalid_argument);
    // a different function than the offset was chosen for
    CHECK_THROWS_AS(QrPsmFromDre::from_json(corrupt("\"f\":\"0x8:2\"", "\"f\":\"0x6:2\"")),
                    std::invalid_argument);
    CHECK_THROWS_AS(QrPsmFromDre::from_json(corrupt("\"flip\":false", "\"flip\":true")),
                    std::invalid_argument);
    // modulus of the inner encoding must match the outer protocol
    CHECK_THROWS_AS(QrPsmFromDre::from_json(corrupt("\"p\":7", "\"p\":11")),
                    std::invalid_argument);
}
