#pragma once

/**
 * @file funcspec.hpp
 * @brief Parsing of function-spec strings used across the CLI.
 *
 * Grammar:
 *   "AND:n" | "XOR:n" | "EQ:n" | "MAJ:n"   named Boolean families
 *   "tt:0x8:3"                              explicit truth table (hex, arity)
 *   "COMP"                                  three-way comparison on {0,1,2}^2
 */

#include <optional>
#include <string>

#include "qrpsm/truth_table.hpp"

namespace qrpsm {

struct FuncSpec {
    enum class Kind { Boolean, Comparison };
    Kind kind = Kind::Boolean;
    std::optional<TruthTable> table;  // set when kind == Boolean

    u32 arity() const { return kind == Kind::Comparison ? 2 : table->arity(); }
    const TruthTable& tt() const { return *table; }
};

/// @brief Parse a function-spec string; throws std::invalid_argument on bad input.
FuncSpec parse_funcspec(const std::string& s);

}  // namespace qrpsm
