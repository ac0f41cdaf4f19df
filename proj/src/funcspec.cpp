#include "qrpsm/funcspec.hpp"

#include <stdexcept>

namespace qrpsm {

namespace {

u32 parse_arity(const std::string& s, size_t pos) {
    if (pos >= s.size()) throw std::invalid_argument("function spec: missing arity");
    size_t idx = 0;
    unsigned long v = std::stoul(s.substr(pos), &idx);
    if (idx != s.size() - pos) throw std::invalid_argument("function spec: trailing junk after arity");
    if (v < 1 || v > 24) throw std::invalid_argument("function spec: arity out of range");
    return u32(v);
}

}  // namespace

FuncSpec parse_funcspec(const std::string& s) {
    FuncSpec out;
    if (s == "COMP") {
        out.kind = FuncSpec::Kind::Comparison;
        return out;
    }
    out.kind = FuncSpec::Kind::Boolean;
    if (s.rfind("AND:", 0) == 0) {
        out.table = TruthTable::and_fn(parse_arity(s, 4));
    } else if (s.rfind("XOR:", 0) == 0) {
        out.table = TruthTable::xor_fn(parse_arity(s, 4));
    } else if (s.rfind("EQ:", 0) == 0) {
        out.table = TruthTable::eq_fn(parse_arity(s, 3));
    } else if (s.rfind("MAJ:", 0) == 0) {
        out.table = TruthTable::maj_fn(parse_arity(s, 4));
    } else if (s.rfind("tt:", 0) == 0) {
        size_t second = s.find(':', 3);
        if (second == std::string::npos)
            throw std::invalid_argument("function spec: expected tt:HEX:ARITY");
        std::string hex = s.substr(3, second - 3);
        u32 n = parse_arity(s, second + 1);
        out.table = TruthTable::from_hex(hex, n);
    } else {
        throw std::invalid_argument("function spec: unrecognized form '" + s + "'");
    }
    return out;
}

}  // namespace qrpsm
