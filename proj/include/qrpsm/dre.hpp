/// @file dre.hpp
/// @brief Decomposable randomized encodings of polynomials over Z_p.
///
/// A Dre splits the evaluation of a target polynomial into coordinates, each
/// reading at most one input variable plus shared randomness, together with a
/// public decoder polynomial over the coordinates. Correctness means the
/// decoder recovers the target on every (x, r); security means the coordinate
/// distribution depends on x only through the target value.
///
/// Constructions here follow a masked-product pattern: every coordinate except
/// one designated absorber carries its own fresh additive random scalar, and
/// the absorber (which the decoder uses linearly) soaks up the input-free
/// residue of the composition. This shape makes the coordinate map triangular
/// in the randomness, which yields perfect security; verify_dre still checks
/// both properties exhaustively.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qrpsm/numtheory.hpp"
#include "qrpsm/polynomial.hpp"

namespace qrpsm {

/// One additive piece of a coordinate: coef * (owner's input if uses_x)
/// * product of randomness scalars named by 1-based indices in rs.
struct CoordTerm {
    u32 coef = 0;          ///< already reduced mod p
    bool uses_x = false;   ///< multiply by the owning variable's value
    std::vector<u32> rs;   ///< randomness indices (multiset, sorted)

    bool operator==(const CoordTerm&) const = default;
};

/// One output coordinate. owner = 0 means randomness-only; owner i >= 1 may
/// read variable x_i and nothing else.
struct DreCoord {
    u32 owner = 0;
    std::vector<CoordTerm> terms;

    bool operator==(const DreCoord&) const = default;
};

/// One monomial of the decoder: coef * product of coordinate values
/// (0-based coordinate indices, multiset).
struct DecTerm {
    u32 coef = 0;
    std::vector<u32> coords;

    bool operator==(const DecTerm&) const = default;
};

/// Decomposable randomized encoding of `target` over Z_p.
struct Dre {
    u32 p = 3;
    u32 n = 0;    ///< number of input variables x_1..x_n
    u32 m_r = 0;  ///< number of randomness scalars r_1..r_{m_r}
    std::vector<DreCoord> coords;
    std::vector<DecTerm> dec;
    Polynomial target;

    /// Total output length s.
    u32 size() const { return u32(coords.size()); }

    /// Output lengths s_0..s_n per component encoder.
    std::vector<u32> component_sizes() const;

    /// Coordinate indices owned by each component, in coordinate order.
    std::vector<std::vector<u32>> coords_by_owner() const;

    /// Value of one coordinate; x_val is the owning variable's value
    /// (ignored for owner 0).
    u32 eval_coord(u32 idx, u32 x_val, std::span<const u32> r) const;

    /// All coordinates for a full assignment; x[i] is the value of x_{i+1}.
    std::vector<u32> encode(std::span<const u32> x, std::span<const u32> r) const;

    /// Decoder value on a coordinate vector.
    u32 decode(std::span<const u32> m) const;

    std::string to_json() const;
    static Dre from_json(const std::string& text);

    bool operator==(const Dre&) const = default;
};

/// Incremental Dre assembly with automatic fresh-randomness bookkeeping and a
/// final symbolic correctness pass.
///
/// add_coord appends a coordinate and, by default, a fresh additive random
/// scalar with unit coefficient; the returned value is the coordinate index.
/// finish() composes decoder and coordinates symbolically, requires the
/// residue against the target to be input-free, folds that residue into the
/// designated absorber coordinate, and re-checks the composition exactly.
class DreBuilder {
  public:
    DreBuilder(u32 p, u32 n);

    /// Allocates the next randomness index (1-based).
    u32 fresh();

    /// Appends a coordinate; terms are reduced mod p. When with_fresh is
    /// true a term {1, false, {new fresh}} is appended automatically.
    u32 add_coord(u32 owner, std::vector<CoordTerm> terms, bool with_fresh = true);

    /// Adds a decoder monomial over coordinate indices.
    void add_dec(i64 coef, std::vector<u32> coord_indices);

    u32 p() const { return p_; }

    /// Fresh randomness index attached to a coordinate; throws when the
    /// coordinate was added without one.
    u32 fresh_of(u32 coord_idx) const;

    /// Completes the construction. absorber_idx must name a coordinate that
    /// was added without a fresh random and that the decoder uses in exactly
    /// one monomial, alone and with a unit coefficient.
    Dre finish(const Polynomial& target, u32 absorber_idx);

  private:
    u32 p_;
    u32 n_;
    u32 next_r_ = 0;
    std::vector<DreCoord> coords_;
    std::vector<DecTerm> dec_;
    std::vector<std::optional<u32>> fresh_of_;  ///< fresh index per coordinate
};

/// Masked-product helper used by the builders: emits coordinates computing
/// scale * product(vars) + mask, where mask is a polynomial in the randomness
/// returned alongside the decoder formula for the value.
struct MaskedProduct {
    std::vector<DecTerm> formula;  ///< decoder monomials over coordinates
    Polynomial mask;               ///< randomness polynomial (variables shifted past n)
};

/// DRE of g(y_0, ..., y_k) = y_0 + y_1*...*y_k with y_j mapped to x_{j+1}.
Dre dre_product_plus(u32 k, u32 p);

/// DRE of an arbitrary polynomial: one masked-product gadget per monomial
/// plus a randomness-only absorber closing the telescoping masks.
Dre dre_polynomial(const Polynomial& f, u32 p);

struct DreVerifyOptions {
    u64 budget = 100'000'000;  ///< encode/decode evaluations allowed
    u32 workers = 1;
};

/// Exhaustive correctness and perfect-security check of D against `target`.
/// Returns false on the first violated property; optional `why` receives a
/// one-line reason. Throws BudgetError when p^{n+m_r} exceeds the budget.
bool verify_dre(const Dre& D, const Polynomial& target, const DreVerifyOptions& opt = {},
                std::string* why = nullptr);

}  // namespace qrpsm
