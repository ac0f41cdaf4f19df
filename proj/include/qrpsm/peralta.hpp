#pragma once

/**
 * @file peralta.hpp
 * @brief Search for primes whose quadratic residue sequence contains every
 *        n-bit pattern as a substring, plus exact sufficiency tests.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "qrpsm/numtheory.hpp"

namespace qrpsm {

struct PeraltaRecord {
    u32 n = 0;
    u32 p = 0;
    /// True when p < n^2 * 2^(2n-2), the empirical growth envelope.
    bool bound_ok = false;
};

struct PeraltaOptions {
    u32 cap = u32(1) << 22;     ///< scan primes strictly below this value
    u32 workers = 1;            ///< worker threads for the prime scan
    std::string cache_path;     ///< optional "n p" cache file; empty = no cache
};

/**
 * @brief Does the residue string of p contain every n-bit string?
 *
 * Linear scan with a rolling n-bit window over the (p-1)-bit sequence.
 * Requires 1 <= n <= 24. p = 2 is handled via its degenerate one-bit string.
 */
bool is_n_peralta(u32 p, u32 n);

/**
 * @brief Least prime p whose residue string contains every n-bit string.
 *
 * Requires 1 <= n <= 12. Cached results are re-verified for membership before
 * being trusted; minimality is taken on faith from the cache. Throws
 * std::runtime_error if the cap is exhausted.
 */
PeraltaRecord peralta_prime(u32 n, const PeraltaOptions& opt = {});

/**
 * @brief Exact integer form of the character-sum sufficiency bound:
 *        sqrt(p) > n*2^(n-1) + sqrt(n^2*2^(2n-2) + 3n*2^n).
 *
 * Any prime passing this test contains every n-bit pattern. Evaluated as
 * t = p - 3n*2^n > 0 and t^2 > n^2 * 2^(2n) * p, with 128-bit intermediates.
 */
bool peralta_sufficient(u32 p, u32 n);

/**
 * @brief Exact integer sufficiency bound for the window property of Paley
 *        structures: p > A*sqrt(p) + B with A = (n-3)*2^(n-1) + 2 and
 *        B = (n+1)*2^(n-1) - 1. Odd primes only.
 */
bool acg_sufficient(u32 p, u32 n);

/**
 * @brief Least b >= 1 with b + L - 1 <= p - 1 such that the Legendre symbol
 *        of b + j matches pattern[j] for every defined position.
 *
 * Pattern entries are +1 (residue), -1 (nonresidue) or 0 (don't care).
 */
std::optional<u32> offset_for_pattern(const LegendreTable& t, std::span<const signed char> pattern);

}  // namespace qrpsm
