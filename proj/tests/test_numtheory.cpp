/**
 * @file test_numtheory.cpp
 * @brief Unit and property tests for modular arithmetic, primality, Legendre
 *        symbols, and residue strings.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qrpsm/numtheory.hpp"

using namespace qrpsm;

// ===== basic modular arithmetic =====

TEST_CASE("modular helpers agree with wide-word arithmetic") {
    std::mt19937_64 rng(12345);
    const u32 primes[] = {3, 7, 65537, 2147483629u};  // last one is the largest prime < 2^31
    for (u32 p : primes) {
        for (int i = 0; i < 200; ++i) {
            u32 a = u32(rng() % p), b = u32(rng() % p);
            CHECK(addmod(a, b, p) == u32((u64(a) + b) % p));
            CHECK(submod(a, b, p) == u32((u64(a) + p - b) % p));
            CHECK(mulmod(a, b, p) == u32(u64(a) * b % p));
        }
    }
}

TEST_CASE("powmod matches repeated multiplication") {
    const u32 p = 1009;
    for (u32 a = 0; a < 20; ++a) {
        u64 expect = 1 % p;
        for (u32 e = 0; e < 40; ++e) {
            CHECK(powmod(a, e, p) == expect);
            expect = expect * a % p;
        }
    }
    CHECK(powmod(0, 0, 7) == 1);  // empty product convention
    CHECK(powmod(5, u64(1) << 63, 11) == 4);  // 5^2 = 3, 5^4 = 9, ... order divides 5
}

TEST_CASE("reduce maps arbitrary integers into [0, p)") {
    CHECK(reduce(0, 7) == 0);
    CHECK(reduce(-1, 7) == 6);
    CHECK(reduce(-7, 7) == 0);
    CHECK(reduce(-15, 7) == 6);
    CHECK(reduce(20, 7) == 6);
    CHECK(reduce(i64(-3000000000LL), 2147483629u) == u32((-3000000000LL % 2147483629LL) + 2147483629LL));
}

TEST_CASE("invmod produces multiplicative inverses") {
    std::mt19937_64 rng(99);
    for (u32 p : {3u, 5u, 101u, 65537u}) {
        for (int i = 0; i < 100; ++i) {
            u32 a = 1 + u32(rng() % (p - 1));
            u32 inv = invmod(a, p);
            CHECK(mulmod(a, inv, p) == 1);
        }
    }
    CHECK(invmod(1, 3) == 1);
    CHECK(invmod(2, 7) == 4);
}

// ===== primality =====

TEST_CASE("is_prime classifies small integers") {
    const bool want[] = {false, false, true, true, false, true, false, true,
                         false, false, false, true, false, true, false, false,
                         false, true, false, true};
    for (u64 n = 0; n < 20; ++n) CHECK(is_prime(n) == want[n]);
}

TEST_CASE("is_prime handles pseudoprime traps and large inputs") {
    CHECK_FALSE(is_prime(561));         // Carmichael
    CHECK_FALSE(is_prime(1105));        // Carmichael
    CHECK_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2,3,5,7
    CHECK_FALSE(is_prime(3825123056546413051ull));  // spsp to bases 2..23
    CHECK(is_prime(2147483629ull));
    CHECK(is_prime(2305843009213693951ull));  // 2^61 - 1
    CHECK_FALSE(is_prime(2305843009213693953ull));
    CHECK(is_prime(18446744073709551557ull));  // largest 64-bit prime
    CHECK_FALSE(is_prime(18446744073709551615ull));
}

TEST_CASE("is_prime agrees with trial division up to 20000") {
    auto trial = [](u64 n) {
        if (n < 2) return false;
        for (u64 d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    };
    for (u64 n = 0; n < 20000; ++n) CHECK(is_prime(n) == trial(n));
}

TEST_CASE("next_prime returns the least strictly larger prime") {
    CHECK(next_prime(0) == 2);
    CHECK(next_prime(1) == 2);
    CHECK(next_prime(2) == 3);
    CHECK(next_prime(3) == 5);
    CHECK(next_prime(13) == 17);
    CHECK(next_prime(89) == 97);
    CHECK(next_prime(1090) == 1091);
    CHECK(next_prime(1091) == 1093);
}

// ===== Legendre symbols =====

TEST_CASE("legendre basics mod 7") {
    // residues mod 7: 1, 2, 4
    CHECK(legendre(0, 7) == 0);
    CHECK(legendre(1, 7) == 1);
    CHECK(legendre(2, 7) == 1);
    CHECK(legendre(3, 7) == -1);
    CHECK(legendre(4, 7) == 1);
    CHECK(legendre(5, 7) == -1);
    CHECK(legendre(6, 7) == -1);
    CHECK(legendre(7, 7) == 0);
    CHECK(legendre(-1, 7) == -1);   // p = 3 mod 4
    CHECK(legendre(-1, 13) == 1);   // p = 1 mod 4
    CHECK(legendre(9, 7) == legendre(2, 7));
}

TEST_CASE("legendre is multiplicative on nonzero residues") {
    std::mt19937_64 rng(7777);
    for (u32 p : {3u, 5u, 11u, 101u, 9973u}) {
        for (int i = 0; i < 200; ++i) {
            u32 a = 1 + u32(rng() % (p - 1));
            u32 b = 1 + u32(rng() % (p - 1));
            CHECK(legendre(i64(mulmod(a, b, p)), p) == legendre(a, p) * legendre(b, p));
        }
    }
}

TEST_CASE("table construction agrees with the exponentiation path for every prime below 10^4") {
    // The table marks squares directly; legendre() exponentiates. The two are
    // fully independent, so exhaustive agreement is a strong cross-check.
    for (u32 p = 3; p < 10000; p = next_prime(p)) {
        LegendreTable t(p);
        for (u32 a = 0; a < p; ++a) CHECK(t(a) == legendre(a, p));
    }
}

TEST_CASE("LegendreTable::at reduces arbitrary integers") {
    LegendreTable t(11);
    CHECK(t.at(-1) == legendre(-1, 11));
    CHECK(t.at(-12) == legendre(-12, 11));
    CHECK(t.at(22) == 0);
    CHECK(t.p() == 11);
}

TEST_CASE("least nonresidue is the first symbol -1 position") {
    CHECK(LegendreTable(3).least_nonresidue() == 2);
    CHECK(LegendreTable(5).least_nonresidue() == 2);
    CHECK(LegendreTable(7).least_nonresidue() == 3);
    CHECK(LegendreTable(11).least_nonresidue() == 2);
    CHECK(LegendreTable(41).least_nonresidue() == 3);
    CHECK(LegendreTable(73).least_nonresidue() == 5);
    for (u32 p = 3; p < 2000; p = next_prime(p)) {
        LegendreTable t(p);
        u32 q = t.least_nonresidue();
        CHECK(t(q) == -1);
        for (u32 a = 1; a < q; ++a) CHECK(t(a) == 1);
    }
}

// ===== quadratic residue sequences =====

TEST_CASE("residue strings for the first eight primes") {
    CHECK(qr_sequence(2) == "1");
    CHECK(qr_sequence(3) == "10");
    CHECK(qr_sequence(5) == "1001");
    CHECK(qr_sequence(7) == "110100");
    CHECK(qr_sequence(11) == "1011100010");
    CHECK(qr_sequence(13) == "101100001101");
    CHECK(qr_sequence(17) == "1101000110001011");
    CHECK(qr_sequence(19) == "100111101010000110");
}

TEST_CASE("residue strings have exactly (p-1)/2 ones") {
    for (u32 p = 3; p < 1000; p = next_prime(p)) {
        std::string s = qr_sequence(p);
        REQUIRE(s.size() == p - 1);
        u32 ones = 0;
        for (char c : s) ones += (c == '1');
        CHECK(ones == (p - 1) / 2);
    }
}

TEST_CASE("residue_set equals the positions of ones in the string") {
    for (u32 p = 3; p < 500; p = next_prime(p)) {
        std::string s = qr_sequence(p);
        std::vector<u32> set = residue_set(p);
        CHECK(set.size() == (p - 1) / 2);
        std::vector<u32> from_string;
        for (u32 i = 1; i < p; ++i)
            if (s[i - 1] == '1') from_string.push_back(i);
        CHECK(set == from_string);
        // every member really is a square
        for (u32 a : set) CHECK(legendre(a, p) == 1);
    }
}

TEST_CASE("require_odd_prime rejects non-primes and 2") {
    CHECK_THROWS_AS(require_odd_prime(1, "t"), std::invalid_argument);
    CHECK_THROWS_AS(require_odd_prime(2, "t"), std::invalid_argument);
    CHECK_THROWS_AS(require_odd_prime(4, "t"), std::invalid_argument);
    CHECK_THROWS_AS(require_odd_prime(9, "t"), std::invalid_argument);
    CHECK_THROWS_AS(require_odd_prime(561, "t"), std::invalid_argument);
    CHECK_NOTHROW(require_odd_prime(3, "t"));
    CHECK_NOTHROW(require_odd_prime(1091, "t"));
}
