#pragma once

/**
 * @file numtheory.hpp
 * @brief Modular arithmetic, primality, Legendre symbols, and quadratic
 *        residue sequences over Z_p.
 *
 * Everything here assumes odd primes p < 2^31 unless stated otherwise, so a
 * product of two reduced residues always fits in uint64_t and no extended
 * precision is needed on the hot paths.
 */

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrpsm {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// ===== basic modular arithmetic =====

/// @brief (a + b) mod p for reduced operands a, b < p.
inline u32 addmod(u32 a, u32 b, u32 p) {
    u64 s = u64(a) + b;
    return u32(s >= p ? s - p : s);
}

/// @brief (a - b) mod p for reduced operands a, b < p.
inline u32 submod(u32 a, u32 b, u32 p) { return a >= b ? a - b : u32(u64(a) + p - b); }

/// @brief (a * b) mod p for reduced operands; p < 2^31 keeps a*b < 2^62.
inline u32 mulmod(u32 a, u32 b, u32 p) { return u32(u64(a) * b % p); }

/// @brief a^e mod p by square-and-multiply.
u32 powmod(u32 a, u64 e, u32 p);

/// @brief Reduce a possibly negative value into [0, p).
inline u32 reduce(i64 a, u32 p) {
    i64 r = a % i64(p);
    return u32(r < 0 ? r + i64(p) : r);
}

/// @brief Multiplicative inverse mod an odd prime p; a must be nonzero mod p.
u32 invmod(u32 a, u32 p);

// ===== primality =====

/// @brief Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime(u64 n) noexcept;

/// @brief Smallest prime strictly greater than n (n + gap must fit in u32).
u32 next_prime(u32 n);

// ===== Legendre symbols =====

/**
 * @brief Legendre symbol (a | p) in {-1, 0, +1} for an odd prime p.
 *
 * Computed by Euler's criterion: a^((p-1)/2) mod p is 1 for a nonzero
 * quadratic residue, p-1 for a nonresidue, and 0 when p divides a.
 */
int legendre(i64 a, u32 p);

/**
 * @brief Precomputed Legendre symbols for all residues mod one prime.
 *
 * Built in O(p) by marking the squares x^2 mod p, which is independent of the
 * Euler-criterion path in legendre() and therefore cross-checkable against it.
 * Mandatory for any loop performing more than ~p symbol evaluations.
 */
class LegendreTable {
public:
    explicit LegendreTable(u32 p);

    /// @brief Symbol of a reduced residue a < p.
    int operator()(u32 a) const { return table_[a]; }

    /// @brief Symbol of an arbitrary (possibly negative) integer.
    int at(i64 a) const { return table_[reduce(a, p_)]; }

    u32 p() const { return p_; }

    /// @brief Smallest quadratic nonresidue in [2, p).
    u32 least_nonresidue() const { return least_nonresidue_; }

private:
    u32 p_;
    u32 least_nonresidue_;
    std::vector<signed char> table_;
};

// ===== quadratic residue sequences =====

/**
 * @brief The residue string of p: bit i (1-indexed, i = 1..p-1) is 1 exactly
 *        when i is a nonzero quadratic residue mod p.
 *
 * p = 2 is special-cased to the single-character string "1".
 */
std::string qr_sequence(u32 p);

/// @brief Sorted nonzero quadratic residues mod p, exactly (p-1)/2 of them.
std::vector<u32> residue_set(u32 p);

/// @brief Throws std::invalid_argument unless p is an odd prime.
void require_odd_prime(u32 p, const char* where);

}  // namespace qrpsm
