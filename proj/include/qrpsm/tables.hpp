/// @file tables.hpp
/// @brief Canonical text renderings of the library's headline numbers, plus
///        a diff against embedded reference copies.
///
/// Four sections: residue strings for the primes up to 19, the least
/// pattern-complete primes through order 8, the least universal moduli for
/// linear protocols through arity 4, and a PASS/FAIL sweep of the built-in
/// catalog of published protocol vectors. Output is deterministic byte for
/// byte regardless of worker count; the diff section reports any line where
/// the computed tables disagree with the reference copies.

#pragma once

#include <string>

#include "qrpsm/peralta.hpp"

namespace qrpsm {

/// One catalog entry: a named Boolean family and a coefficient vector.
struct CatalogEntry {
    u32 n = 0;
    const char* name = "";
    u32 p = 0;
    std::vector<u32> a;
};

/// The 24 built-in protocol vectors (arities 2..7, four families each).
const std::vector<CatalogEntry>& protocol_catalog();

/// Computed sections, concatenated in canonical order.
std::string render_tables(u32 workers = 1, const PeraltaOptions& opt = {});

/// The embedded reference text the computed tables are expected to match.
std::string reference_tables();

struct TablesOutcome {
    std::string text;  ///< computed tables plus the diff section
    bool clean = true; ///< no line diverged from the reference
};

/// Render, diff, and report. clean == false signals a divergence.
TablesOutcome regenerate_tables(u32 workers = 1, const PeraltaOptions& opt = {});

}  // namespace qrpsm
