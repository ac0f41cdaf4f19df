#pragma once

/**
 * @file lqr.hpp
 * @brief Linear Legendre-decoder protocols [a_0, a_1, ..., a_n]_p: building,
 *        fast verification, conjugacy, synthesis from linear embeddings,
 *        minimal-modulus search, and coverage primes.
 *
 * The protocol [a_0..a_n]_p gives player 1 the message r_0*(a_0 + a_1*x_1) +
 * r_1 and player i >= 2 the message r_0*a_i*x_i + r_i, where r_0 is a nonzero
 * quadratic residue and r_1 + ... + r_n = 0 mod p. The referee outputs the
 * Legendre symbol of the message sum, which collapses to the symbol of
 * a_0 + sum a_i x_i. Default output orientation: +1 when f(x) = 1.
 */

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrpsm/peralta.hpp"
#include "qrpsm/psm.hpp"
#include "qrpsm/truth_table.hpp"

namespace qrpsm {

struct LqrProtocol {
    u32 p = 0;
    std::vector<u32> a;  ///< a[0] is the offset; a[1..n] are player coefficients

    u32 players() const { return u32(a.size()) - 1; }
};

/// @brief Parse one descriptor line {"p":5,"a":[2,1,1]}; throws on malformed input.
LqrProtocol parse_lqr(const std::string& json_line);

/// @brief Serialize to the one-line descriptor format.
std::string to_json_line(const LqrProtocol& P);

/// @brief Full protocol object with |R| = (p-1)/2 * p^(n-1).
PsmProtocol build_lqr(const LqrProtocol& P);

/// @brief Per-player communication in bits: n * ceil(log2 p).
u32 protocol_bits(const LqrProtocol& P);

// ===== fast verification =====

struct FastVerdict {
    bool ok = true;
    u32 counterexample_x = 0;  ///< input index, player 1 least significant
    int got = 0;               ///< Legendre class at the counterexample
    int want = 0;
};

/**
 * @brief O(2^n) correctness check: the symbol of a_0 + sum a_i x_i must be
 *        +1 exactly where f(x) = 1 and -1 elsewhere (flipped when flip_sign).
 */
FastVerdict fast_verify_lqr(const LqrProtocol& P, const TruthTable& f, bool flip_sign = false);

/**
 * @brief O(2^n) security check: the symbol of the decoded sum must be
 *        constant on each fiber {x : f(x) = c}.
 *
 * Conditioned on the message sum, messages are uniform over tuples attaining
 * it, so two inputs have identical message distributions exactly when their
 * sums share a Legendre class; a shared class 0 is secure (and incorrect).
 */
FastVerdict fast_verify_security_lqr(const LqrProtocol& P, const TruthTable& f);

// ===== conjugacy =====

/// @brief Scale all coefficients by a nonzero quadratic residue s (same function).
LqrProtocol conjugate(const LqrProtocol& P, u32 s);

/// @brief Orbit representative: first nonzero coefficient becomes 1 (residue
///        orbit) or the least nonresidue (nonresidue orbit).
LqrProtocol canonical_form(const LqrProtocol& P);

// ===== linear embeddings =====

struct LinearEmbedding {
    std::vector<i64> coeffs;
    i64 min_g = 0;  ///< min over {0,1}^n
    i64 max_g = 0;  ///< max over {0,1}^n

    u32 arity() const { return u32(coeffs.size()); }
    u32 length() const { return u32(max_g - min_g + 1); }
    i64 eval(u32 x_mask) const;
};

LinearEmbedding embed_symmetric(u32 n);                     ///< all-ones, length n+1
LinearEmbedding embed_weighted(std::span<const i64> w);     ///< length sum|w_i|+1
LinearEmbedding embed_any(u32 n);                           ///< powers of two, length 2^n
LinearEmbedding embed_composition(u32 m, u32 k);            ///< blocks, length (k+1)^m

// ===== synthesis =====

struct SynthOptions {
    PeraltaOptions peralta;  ///< cap / workers / cache for the prime lookup
};

struct SynthesisResult {
    LqrProtocol protocol;
    u32 bits = 0;  ///< n * ceil(log2 p)
};

/**
 * @brief Build a protocol for f from a linear embedding g of f.
 *
 * Uses the least prime whose residue string contains every l(g)-bit pattern,
 * then scans for the least offset b whose window realizes the class pattern
 * of f along reachable g-values; a_0 = b - min g. Throws std::invalid_argument
 * if g does not embed f (two inputs with equal g-value but different f-value).
 */
SynthesisResult synthesize(const TruthTable& f, const LinearEmbedding& g,
                           const SynthOptions& opt = {});

/**
 * @brief The split-table construction: p handles all 2^(n-1)-bit patterns,
 *        a_i = 2^(n-1-i) for i < n, and x_n switches between the offsets of
 *        the two half-table patterns (a_0 = b_0, a_n = b_1 - b_0).
 */
SynthesisResult universal_protocol(const TruthTable& f, const SynthOptions& opt = {});

// ===== searches =====

struct MinimalSearchOptions {
    u32 max_p = 101;          ///< largest prime tried
    u64 budget = 2'000'000'000;  ///< Legendre-class evaluations allowed
    u32 workers = 1;
};

/**
 * @brief Least-modulus protocol for f: primes ascending, canonical coefficient
 *        vectors in lexicographic order; first hit returned.
 *
 * Canonical vectors have a_0 in {1, least nonresidue}; a_0 = 0 never verifies
 * (the all-zero input hits class 0). Throws BudgetError when the evaluation
 * budget runs out, std::runtime_error when max_p is exhausted.
 */
LqrProtocol find_minimal_protocol(const TruthTable& f, const MinimalSearchOptions& opt = {});

struct LqrPrimeRecord {
    u32 n = 0;
    u32 p = 0;                  ///< least prime covering every truth table
    u64 vectors_scanned = 0;
};

/**
 * @brief Least odd prime p such that every f: {0,1}^n -> {0,1} admits a
 *        protocol mod p. Enumerates canonical vectors, discards any hitting
 *        class 0, and marks realized truth tables until all are covered.
 *        Requires n <= 4 (2^16 tables).
 */
LqrPrimeRecord lqr_prime(u32 n, u32 max_p = 1000, u32 workers = 1);

struct LnBounds {
    u64 lower = 0;                ///< least M with M^n >= 2^(2^n - 2)
    std::optional<u32> upper;     ///< split-table prime, when computable
};

/// @brief Counting lower bound and split-table upper bound for the coverage prime.
LnBounds ln_bounds(u32 n, const PeraltaOptions& opt = {});

}  // namespace qrpsm
