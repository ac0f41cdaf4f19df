/// @file polynomial.hpp
/// @brief Sparse multivariate integer polynomials in variables x1, x2, ...
///
/// Polynomials are kept in a normal form: each term holds a sorted variable
/// multiset, like terms are merged, zero terms dropped, and terms ordered by
/// graded lexicographic rank. Evaluation is available over the integers and
/// modulo an odd prime.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qrpsm/numtheory.hpp"

namespace qrpsm {

/// One monomial: coef * product of vars (1-based indices, repeats = powers).
struct PolyTerm {
    i64 coef = 0;
    std::vector<u32> vars;  ///< sorted ascending, may repeat

    bool operator==(const PolyTerm&) const = default;
};

/// Sparse polynomial with integer coefficients.
class Polynomial {
  public:
    Polynomial() = default;

    /// Builds from raw terms; merges, sorts and prunes.
    explicit Polynomial(std::vector<PolyTerm> terms);

    /// Parses e.g. "x1*x2 + 3*x3 - 2" or "x1+x2-2*x1*x2".
    /// Factors are integer literals or variables x<k>; '*' between factors
    /// is optional only between a literal and a variable.
    static Polynomial parse(const std::string& text);

    static Polynomial constant(i64 c);
    static Polynomial variable(u32 index);

    const std::vector<PolyTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Largest variable index used; 0 for constants.
    u32 arity() const;

    /// Total degree of the largest monomial; 0 for constants.
    u32 degree() const;

    /// Value over the integers; x[i] is the value of x_{i+1}.
    i64 eval_int(std::span<const i64> x) const;

    /// Value modulo p; x[i] is the value of x_{i+1}, already reduced.
    u32 eval_mod(std::span<const u32> x, u32 p) const;

    /// Drops repeated variables inside each monomial (x*x -> x), merging the
    /// results. Agrees with the original on 0/1 assignments.
    Polynomial multilinear() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;

    /// Canonical rendering, e.g. "-2*x1*x2 + x1 + x2".
    std::string to_string() const;

    bool operator==(const Polynomial&) const = default;

  private:
    void normalize();

    std::vector<PolyTerm> terms_;
};

}  // namespace qrpsm
