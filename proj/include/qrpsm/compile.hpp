/// @file compile.hpp
/// @brief Compiles a Boolean function with a polynomial value-embedding into
///        a Legendre-decoded PSM protocol.
///
/// The pipeline: evaluate g over {0,1}^n and check it separates f's level
/// sets; pick the least Peralta prime whose residue string contains the
/// required sign window; lift the window offset to a_0; build a randomized
/// encoding of h = (g + x_{n+1}) * x_{n+2}; hand player 1 the slots for x_1,
/// the offset and the residue multiplier, and everyone else their own input
/// slot. The referee decodes the encoding and outputs the Legendre class of
/// (g(x) + a_0) * r'.
///
/// The compact encoder covers multilinear g of degree at most 2 whose
/// quadratic monomials are variable-disjoint (linear terms anywhere); that
/// keeps the randomness arity small enough for exhaustive protocol
/// verification. estimate_cost falls back to the per-monomial encoding for
/// other shapes.

#pragma once

#include <optional>
#include <string>

#include "qrpsm/dre.hpp"
#include "qrpsm/peralta.hpp"
#include "qrpsm/polynomial.hpp"
#include "qrpsm/psm.hpp"
#include "qrpsm/truth_table.hpp"

namespace qrpsm {

struct CompileOptions {
    PeraltaOptions peralta;
    bool flip_sign = false;  ///< decide +1 on f(x) = 0 instead of f(x) = 1
};

/// Compiled protocol together with every artifact of the compilation.
struct QrPsmFromDre {
    TruthTable f{1};
    Polynomial g;
    bool flip_sign = false;
    u32 p = 0;       ///< modulus, the least l(g)-Peralta prime
    u32 a0 = 0;      ///< offset with a_0 + g(x) in [1, p-1] and the right classes
    Dre h;           ///< encoding of (g + x_{n+1}) * x_{n+2} over n+2 variables
    PsmProtocol protocol;

    u32 dre_len() const { return h.size(); }

    /// Descriptor with the replay data: {"p":..,"a0":..,"g":..,"dre_len":..,
    /// "f":"<hex>:<arity>","flip":..,"dre":{..}}.
    std::string to_json() const;

    /// Rebuilds the protocol (encoders, decoder, enumeration hooks) from a
    /// descriptor without re-running any search.
    static QrPsmFromDre from_json(const std::string& text);
};

/// Compile f through embedding g. Throws std::invalid_argument when g does
/// not embed f or is beyond the compact encoder's shape.
QrPsmFromDre compile(const TruthTable& f, const Polynomial& g, const CompileOptions& opt = {});

struct CostEstimate {
    u32 p = 0;
    u32 s = 0;          ///< randomized-encoding output length
    u64 bits = 0;       ///< s * ceil(log2 p)
    bool exact = true;  ///< false when the per-monomial fallback sized s
};

/// Communication cost of compiling f via g; uses the compact encoder when
/// the shape allows and the per-monomial juxtaposition otherwise.
CostEstimate estimate_cost(const TruthTable& f, const Polynomial& g, const CompileOptions& opt = {});

}  // namespace qrpsm
