#pragma once

/**
 * @file truth_table.hpp
 * @brief Dense truth tables for Boolean functions on {0,1}^n.
 *
 * Input tuples are indexed by x = sum over j of 2^(j-1) * x_j, i.e. player 1
 * occupies the least significant bit.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "qrpsm/numtheory.hpp"

namespace qrpsm {

class TruthTable {
public:
    /// @brief All-zero table on n variables (1 <= n <= 24).
    explicit TruthTable(u32 n);

    u32 arity() const { return n_; }
    u32 size() const { return u32(1) << n_; }

    bool get(u32 x) const { return (words_[x >> 6] >> (x & 63)) & 1; }
    void set(u32 x, bool v);

    u32 popcount() const;
    bool operator==(const TruthTable& o) const = default;

    /// @brief Hex rendering, LSB-first bit order (index 0 = least significant).
    std::string to_hex() const;

    // ----- named families -----
    static TruthTable zeros(u32 n) { return TruthTable(n); }
    static TruthTable ones(u32 n);
    static TruthTable and_fn(u32 n);
    static TruthTable or_fn(u32 n);
    static TruthTable xor_fn(u32 n);
    /// @brief 1 exactly when all input bits agree.
    static TruthTable eq_fn(u32 n);
    /// @brief 1 exactly when half or more of the input bits are 1.
    static TruthTable maj_fn(u32 n);

    /**
     * @brief Parse a hex literal such as "0x8" into an n-variable table.
     *
     * The hex value is read as an integer whose bit x is f(x); it must fit in
     * 2^n bits.
     */
    static TruthTable from_hex(const std::string& hex, u32 n);

    /// @brief Table from a packed 64-bit value (n <= 6).
    static TruthTable from_bits(u64 bits, u32 n);

    /// @brief Packed bits for n <= 6.
    u64 to_bits() const;

    /// @brief True when f is invariant under permuting its inputs.
    bool is_symmetric() const;

private:
    u32 n_;
    std::vector<u64> words_;
};

}  // namespace qrpsm
