#pragma once

/**
 * @file psm.hpp
 * @brief Protocol abstraction for private simultaneous messages over Z_p,
 *        with exhaustive correctness and perfect-security verification.
 *
 * A protocol is n players plus a referee. Player i sees input x_i and shared
 * randomness r, and sends a fixed-length vector of Z_p scalars. The referee
 * decodes the concatenated messages to a value in {-1, 0, +1}. Verification
 * is exact: correctness enumerates every (x, r); security compares the full
 * message-tuple multisets of inputs that share an expected output.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qrpsm/numtheory.hpp"
#include "qrpsm/truth_table.hpp"

namespace qrpsm {

/// @brief Expected referee outputs for every input tuple, in {-1, 0, +1}.
struct Target {
    std::vector<u32> domain_sizes;     ///< per-player input domain cardinality
    std::vector<signed char> expected; ///< flat over inputs, player 1 least significant

    u64 num_inputs() const {
        u64 m = 1;
        for (u32 d : domain_sizes) m *= d;
        return m;
    }

    /**
     * @brief Boolean target: +1 where f(x) = 1 and -1 where f(x) = 0.
     *        With flip_sign, the opposite orientation (+1 when f(x) = 0).
     */
    static Target from_truth_table(const TruthTable& f, bool flip_sign = false);

    /// @brief Three-way comparison sign(x1 - x2) on {0,1,2}^2.
    static Target comparison();
};

/**
 * @brief Optional fast enumeration hooks a protocol may provide.
 *
 * Message tuples are packed into u64 keys by an injective, input-independent
 * packing. stream_slice(x, k, emit) must enumerate exactly the randomness
 * values whose message tuple falls in slice k (a fixed function of the
 * messages alone), emitting (r_index, packed) with r_index strictly
 * increasing. Together the slices partition the randomness space.
 */
struct ProtocolHooks {
    u32 slice_count = 1;
    std::function<u64(const u32* msgs)> pack;
    std::function<u32(const u32* msgs)> slice_of;
    std::function<void(const std::vector<u32>& x, u32 slice,
                       const std::function<void(u64 r, u64 packed)>& emit)>
        stream_slice;
    /// Enumerate all r ascending, handing the full message vector to the sink.
    std::function<void(const std::vector<u32>& x, const std::function<void(u64 r, const u32* msgs)>& sink)>
        stream_all;
};

struct PsmProtocol {
    u32 modulus = 0;
    std::vector<u32> domain_sizes;  ///< one entry per player
    std::vector<u32> msg_arity;     ///< scalars sent by each player
    u64 randomness_size = 0;        ///< |R|; randomness is indexed 0..|R|-1

    u32 players() const { return u32(domain_sizes.size()); }
    u32 total_msg_len() const;

    /// Write player i's scalars for input value xi and randomness index r.
    std::function<void(u32 player, u32 xi, u64 r, u32* out)> encode;
    /// Referee decision on the concatenated message vector.
    std::function<int(const u32* msgs)> decode;
    /// Human-readable randomness components for transcripts.
    std::function<std::vector<u32>(u64 r)> describe_r;

    std::optional<ProtocolHooks> hooks;
};

/// @brief One protocol execution, printable as "x=[..] r=[..] m=[..] out=..".
struct Transcript {
    std::vector<u32> x;
    std::vector<u32> r;
    std::vector<u32> m;
    int out = 0;
    std::string to_line() const;
};

/// @brief Run the protocol on one input with one randomness index.
Transcript execute(const PsmProtocol& P, const std::vector<u32>& x, u64 r_index);

/// @brief Thrown when a verification would exceed its enumeration budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerifyOptions {
    u64 budget = 100'000'000;  ///< max enumerated (input, randomness) pairs
};

struct CorrectnessResult {
    bool ok = true;
    std::optional<Transcript> counterexample;
    u64 pairs_checked = 0;
};

struct SecurityResult {
    bool ok = true;
    /// Two inputs with equal expected output but different message distributions.
    std::optional<std::pair<std::vector<u32>, std::vector<u32>>> counterexample;
    u64 tuples_checked = 0;
};

/**
 * @brief Exhaustive correctness: decode(messages(x, r)) equals the expected
 *        output for every input x and every randomness index r.
 */
CorrectnessResult verify_correctness(const PsmProtocol& P, const Target& t,
                                     const VerifyOptions& opt = {});

/**
 * @brief Perfect security against the referee: for inputs with the same
 *        expected output, the multisets of message tuples over the
 *        randomness space are identical.
 *
 * Each output class is checked against its first input as representative;
 * multiset equality is transitive, so this covers all pairs. When the
 * protocol provides hooks, tuples are compared slice by slice (sorted packed
 * keys) and per-slice counts must sum to |R|; a strided shadow check
 * recomputes emitted tuples through the plain encoder.
 */
SecurityResult verify_security(const PsmProtocol& P, const Target& t,
                               const VerifyOptions& opt = {});

// ===== reference two-party comparison protocol =====

/**
 * @brief The classic two-player comparison protocol mod 7: messages
 *        m1 = r1 + r2*x1, m2 = -(r1 + r2*x2), decode = Legendre(m1 + m2).
 *
 * Randomness is Z_7 x {1, 2, 4} (the nonzero residues mod 7), |R| = 21.
 */
PsmProtocol fkn_comparison();

/// @brief Mixed-radix helpers shared by protocol builders (player 1 least significant).
std::vector<u32> unrank_input(u64 idx, const std::vector<u32>& domain_sizes);
u64 rank_input(const std::vector<u32>& x, const std::vector<u32>& domain_sizes);

}  // namespace qrpsm
