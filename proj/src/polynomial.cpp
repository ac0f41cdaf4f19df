#include "qrpsm/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qrpsm {

namespace {

/// Graded lexicographic order: higher degree first, then variable list.
bool term_before(const PolyTerm& a, const PolyTerm& b) {
    if (a.vars.size() != b.vars.size()) return a.vars.size() > b.vars.size();
    return a.vars < b.vars;
}

}  // namespace

void Polynomial::normalize() {
    std::map<std::vector<u32>, i64> merged;
    for (auto& t : terms_) {
        if (t.coef == 0) continue;
        std::vector<u32> v = t.vars;
        std::sort(v.begin(), v.end());
        merged[std::move(v)] += t.coef;
    }
    terms_.clear();
    for (auto& [vars, coef] : merged) {
        if (coef != 0) terms_.push_back({coef, vars});
    }
    std::sort(terms_.begin(), terms_.end(), term_before);
}

Polynomial::Polynomial(std::vector<PolyTerm> terms) : terms_(std::move(terms)) { normalize(); }

Polynomial Polynomial::constant(i64 c) {
    return Polynomial(std::vector<PolyTerm>{{c, {}}});
}

Polynomial Polynomial::variable(u32 index) {
    if (index == 0) throw std::invalid_argument("variable indices start at 1");
    return Polynomial(std::vector<PolyTerm>{{1, {index}}});
}

Polynomial Polynomial::parse(const std::string& text) {
    size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("polynomial parse error at offset " + std::to_string(i) +
                                    ": " + what);
    };

    std::vector<PolyTerm> terms;
    skip();
    if (i == text.size()) fail("empty input");
    bool first = true;
    while (true) {
        skip();
        if (i == text.size()) break;
        i64 sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip();
        } else if (!first) {
            fail("expected '+' or '-' between terms");
        }
        first = false;

        PolyTerm term{sign, {}};
        bool saw_factor = false;
        while (true) {
            skip();
            if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                i64 v = 0;
                size_t start = i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                    v = v * 10 + (text[i] - '0');
                    if (v > (i64(1) << 40)) fail("coefficient literal too large");
                    ++i;
                }
                (void)start;
                term.coef *= v;
                saw_factor = true;
            } else if (i < text.size() && (text[i] == 'x' || text[i] == 'X')) {
                ++i;
                if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                    fail("variable needs an index, e.g. x1");
                u64 idx = 0;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                    idx = idx * 10 + u64(text[i] - '0');
                    if (idx > 64) fail("variable index too large");
                    ++i;
                }
                if (idx == 0) fail("variable indices start at 1");
                term.vars.push_back(u32(idx));
                saw_factor = true;
            } else {
                fail("expected a factor (integer or x<k>)");
            }
            skip();
            if (i < text.size() && text[i] == '*') {
                ++i;
                continue;
            }
            // implicit product only for literal-then-variable, e.g. "2x1"
            if (i < text.size() && (text[i] == 'x' || text[i] == 'X')) continue;
            break;
        }
        if (!saw_factor) fail("empty term");
        terms.push_back(std::move(term));
    }
    if (terms.empty()) fail("no terms");
    return Polynomial(std::move(terms));
}

u32 Polynomial::arity() const {
    u32 n = 0;
    for (auto& t : terms_)
        for (u32 v : t.vars) n = std::max(n, v);
    return n;
}

u32 Polynomial::degree() const {
    size_t d = 0;
    for (auto& t : terms_) d = std::max(d, t.vars.size());
    return u32(d);
}

i64 Polynomial::eval_int(std::span<const i64> x) const {
    i64 total = 0;
    for (auto& t : terms_) {
        i64 v = t.coef;
        for (u32 var : t.vars) {
            if (var > x.size()) throw std::invalid_argument("eval_int: assignment too short");
            v *= x[var - 1];
        }
        total += v;
    }
    return total;
}

u32 Polynomial::eval_mod(std::span<const u32> x, u32 p) const {
    u32 total = 0;
    for (auto& t : terms_) {
        u32 v = reduce(t.coef, p);
        for (u32 var : t.vars) {
            if (var > x.size()) throw std::invalid_argument("eval_mod: assignment too short");
            v = mulmod(v, x[var - 1] % p, p);
        }
        total = addmod(total, v, p);
    }
    return total;
}

Polynomial Polynomial::multilinear() const {
    std::vector<PolyTerm> out;
    for (auto& t : terms_) {
        PolyTerm u{t.coef, t.vars};
        u.vars.erase(std::unique(u.vars.begin(), u.vars.end()), u.vars.end());
        out.push_back(std::move(u));
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<PolyTerm> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return Polynomial(std::move(all));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    std::vector<PolyTerm> all = terms_;
    for (auto t : o.terms_) {
        t.coef = -t.coef;
        all.push_back(std::move(t));
    }
    return Polynomial(std::move(all));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    std::vector<PolyTerm> all;
    for (auto& a : terms_) {
        for (auto& b : o.terms_) {
            PolyTerm t{a.coef * b.coef, a.vars};
            t.vars.insert(t.vars.end(), b.vars.begin(), b.vars.end());
            all.push_back(std::move(t));
        }
    }
    return Polynomial(std::move(all));
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& t : terms_) {
        i64 c = t.coef;
        if (first) {
            if (c < 0) os << '-';
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        u64 mag = c < 0 ? u64(-(c + 1)) + 1 : u64(c);
        if (mag != 1 || t.vars.empty()) os << mag;
        bool star = mag != 1 || t.vars.empty();
        for (u32 v : t.vars) {
            if (star) os << '*';
            os << 'x' << v;
            star = true;
        }
    }
    return os.str();
}

}  // namespace qrpsm
