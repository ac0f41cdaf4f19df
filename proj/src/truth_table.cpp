#include "qrpsm/truth_table.hpp"

#include <bit>
#include <stdexcept>

namespace qrpsm {

TruthTable::TruthTable(u32 n) : n_(n) {
    if (n < 1 || n > 24) throw std::invalid_argument("TruthTable: arity must be in [1, 24]");
    words_.assign((size() + 63) / 64, 0);
}

void TruthTable::set(u32 x, bool v) {
    u64 mask = u64(1) << (x & 63);
    if (v)
        words_[x >> 6] |= mask;
    else
        words_[x >> 6] &= ~mask;
}

u32 TruthTable::popcount() const {
    u32 c = 0;
    for (u64 w : words_) c += u32(std::popcount(w));
    return c;
}

std::string TruthTable::to_hex() const {
    static const char* digits = "0123456789abcdef";
    u32 nibbles = (size() + 3) / 4;
    std::string s;
    for (u32 i = nibbles; i-- > 0;) {
        u32 shift = (i * 4) & 63;
        s.push_back(digits[(words_[(i * 4) >> 6] >> shift) & 0xF]);
    }
    // strip leading zeros but keep at least one digit
    size_t first = s.find_first_not_of('0');
    return "0x" + (first == std::string::npos ? "0" : s.substr(first));
}

TruthTable TruthTable::ones(u32 n) {
    TruthTable t(n);
    for (u32 x = 0; x < t.size(); ++x) t.set(x, true);
    return t;
}

TruthTable TruthTable::and_fn(u32 n) {
    TruthTable t(n);
    t.set(t.size() - 1, true);
    return t;
}

TruthTable TruthTable::or_fn(u32 n) {
    TruthTable t = ones(n);
    t.set(0, false);
    return t;
}

TruthTable TruthTable::xor_fn(u32 n) {
    TruthTable t(n);
    for (u32 x = 0; x < t.size(); ++x) t.set(x, std::popcount(x) & 1);
    return t;
}

TruthTable TruthTable::eq_fn(u32 n) {
    TruthTable t(n);
    t.set(0, true);
    t.set(t.size() - 1, true);
    return t;
}

TruthTable TruthTable::maj_fn(u32 n) {
    TruthTable t(n);
    for (u32 x = 0; x < t.size(); ++x) t.set(x, 2 * u32(std::popcount(x)) >= n);
    return t;
}

TruthTable TruthTable::from_hex(const std::string& hex, u32 n) {
    std::string h = hex;
    if (h.rfind("0x", 0) == 0 || h.rfind("0X", 0) == 0) h = h.substr(2);
    if (h.empty()) throw std::invalid_argument("truth table hex: empty literal");
    TruthTable t(n);
    u32 bit = 0;
    for (size_t i = h.size(); i-- > 0;) {
        char c = h[i];
        u32 v;
        if (c >= '0' && c <= '9')
            v = u32(c - '0');
        else if (c >= 'a' && c <= 'f')
            v = u32(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F')
            v = u32(c - 'A' + 10);
        else
            throw std::invalid_argument("truth table hex: bad digit");
        for (u32 j = 0; j < 4; ++j, ++bit) {
            if ((v >> j) & 1) {
                if (bit >= t.size())
                    throw std::invalid_argument("truth table hex: value needs more than 2^n bits");
                t.set(bit, true);
            }
        }
    }
    return t;
}

TruthTable TruthTable::from_bits(u64 bits, u32 n) {
    if (n > 6) throw std::invalid_argument("from_bits: arity must be <= 6");
    TruthTable t(n);
    if (n == 6)
        t.words_[0] = bits;
    else {
        u64 mask = (u64(1) << t.size()) - 1;
        if (bits & ~mask) throw std::invalid_argument("from_bits: value needs more than 2^n bits");
        t.words_[0] = bits;
    }
    return t;
}

u64 TruthTable::to_bits() const {
    if (n_ > 6) throw std::invalid_argument("to_bits: arity must be <= 6");
    return words_[0];
}

bool TruthTable::is_symmetric() const {
    std::vector<int> by_weight(n_ + 1, -1);
    for (u32 x = 0; x < size(); ++x) {
        int w = std::popcount(x);
        int v = get(x) ? 1 : 0;
        if (by_weight[w] == -1)
            by_weight[w] = v;
        else if (by_weight[w] != v)
            return false;
    }
    return true;
}

}  // namespace qrpsm
