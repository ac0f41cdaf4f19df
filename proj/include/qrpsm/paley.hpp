/// @file paley.hpp
/// @brief Quadratic-residue graphs and tournaments on Z_p and their
///        star-extension property.
///
/// For p = 1 mod 4 the residue relation is symmetric and defines a graph;
/// for p = 3 mod 4 it is antisymmetric and total and defines a tournament.
/// The star-extension property of order n asks that every block of n
/// consecutive vertices, split any way into an in-set and an out-set, admits
/// an outside vertex adjacent to (resp. beating) exactly the in-set. The
/// property holds exactly when every n-bit pattern occurs in the residue
/// string of p, which this module cross-validates against the string-side
/// checker without sharing its code.

#pragma once

#include <string>
#include <vector>

#include "qrpsm/numtheory.hpp"

namespace qrpsm {

/// Residue graph (p = 1 mod 4) or tournament (p = 3 mod 4) on Z_p.
class PaleyStructure {
public:
    explicit PaleyStructure(u32 p);

    u32 p() const { return p_; }
    bool is_graph() const { return graph_; }

    /// Graph adjacency; symmetric. Requires x != y, both reduced mod p.
    bool adjacent(u32 x, u32 y) const { return table_(submod(x, y, p_)) == 1; }

    /// Tournament arc x -> y; exactly one direction holds for x != y.
    bool arc(u32 x, u32 y) const { return table_(submod(x, y, p_)) == 1; }

    /// Legendre class of x - y: +1, -1, or 0 when x = y.
    int klass(u32 x, u32 y) const { return table_(submod(x, y, p_)); }

    /// Edge list, one "x y" (graph) or "x>y" (tournament) per line,
    /// vertices ascending.
    std::string export_edges() const;

private:
    u32 p_;
    bool graph_;
    LegendreTable table_;
};

/// Outcome of the star-extension check, with a failure witness when it fails.
struct StarPropertyReport {
    u32 p = 0;
    u32 n = 0;
    bool holds = true;
    u32 fail_start = 0;  ///< window start s: S = {s, .., s+n-1} (mod p)
    u32 fail_mask = 0;   ///< in-set A = { s+k : bit k of fail_mask is 1 }
};

/// Checks every cyclic window of n consecutive vertices and every partition
/// of it. Throws std::invalid_argument unless p is an odd prime > n.
StarPropertyReport has_star_property_full(u32 p, u32 n, u32 workers = 1);

/// Single-window check on S = {1, .., n}; equivalent to the full check
/// because vertex translation is an automorphism.
bool has_star_property_reduced(u32 p, u32 n);

/// Least qualifying primes of each residue class mod 4, and their minimum.
struct MValues {
    u32 m_graph = 0;       ///< least p = 1 mod 4 whose graph has the property
    u32 m_tournament = 0;  ///< least p = 3 mod 4 whose tournament has it
    u32 m = 0;             ///< min of the two
};

/// Scans primes upward to max_p; throws BudgetError when the cap is reached
/// before both classes produce a prime.
MValues m_values(u32 n, u32 max_p = u32(1) << 22);

/// True when the first `sample` primes above n^2 * 4^(n-1) all have the
/// order-n property.
bool thm_ec_spotcheck(u32 n, u32 sample);

}  // namespace qrpsm
