#include "qrpsm/dre.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "qrpsm/psm.hpp"

namespace qrpsm {

namespace {

using u128 = unsigned __int128;

/// Reduces every coefficient into [0, p).
Polynomial pmod(const Polynomial& f, u32 p) {
    std::vector<PolyTerm> out;
    for (auto& t : f.terms()) out.push_back({i64(reduce(t.coef, p)), t.vars});
    return Polynomial(std::move(out));
}

u32 checked_bits(u32 p) { return u32(std::bit_width(p - 1)); }

}  // namespace

// ===== Dre accessors =====

std::vector<u32> Dre::component_sizes() const {
    std::vector<u32> s(n + 1, 0);
    for (auto& c : coords) {
        if (c.owner > n) throw std::invalid_argument("Dre: coordinate owner out of range");
        ++s[c.owner];
    }
    return s;
}

std::vector<std::vector<u32>> Dre::coords_by_owner() const {
    std::vector<std::vector<u32>> g(n + 1);
    for (u32 i = 0; i < coords.size(); ++i) {
        if (coords[i].owner > n) throw std::invalid_argument("Dre: coordinate owner out of range");
        g[coords[i].owner].push_back(i);
    }
    return g;
}

u32 Dre::eval_coord(u32 idx, u32 x_val, std::span<const u32> r) const {
    const DreCoord& c = coords.at(idx);
    u32 total = 0;
    for (auto& t : c.terms) {
        u32 v = t.coef;
        if (t.uses_x) v = mulmod(v, x_val % p, p);
        for (u32 id : t.rs) {
            if (id == 0 || id > r.size())
                throw std::invalid_argument("Dre: randomness index out of range");
            v = mulmod(v, r[id - 1], p);
        }
        total = addmod(total, v, p);
    }
    return total;
}

std::vector<u32> Dre::encode(std::span<const u32> x, std::span<const u32> r) const {
    if (x.size() < n) throw std::invalid_argument("Dre::encode: assignment too short");
    std::vector<u32> out(coords.size());
    for (u32 i = 0; i < coords.size(); ++i) {
        u32 xv = coords[i].owner ? x[coords[i].owner - 1] : 0;
        out[i] = eval_coord(i, xv, r);
    }
    return out;
}

u32 Dre::decode(std::span<const u32> m) const {
    u32 total = 0;
    for (auto& t : dec) {
        u32 v = t.coef;
        for (u32 idx : t.coords) {
            if (idx >= m.size()) throw std::invalid_argument("Dre::decode: coordinate index out of range");
            v = mulmod(v, m[idx], p);
        }
        total = addmod(total, v, p);
    }
    return total;
}

std::string Dre::to_json() const {
    nlohmann::json j;
    j["p"] = p;
    j["n"] = n;
    j["m_r"] = m_r;
    j["coords"] = nlohmann::json::array();
    for (auto& c : coords) {
        nlohmann::json jc;
        jc["owner"] = c.owner;
        jc["terms"] = nlohmann::json::array();
        for (auto& t : c.terms) jc["terms"].push_back({t.coef, t.uses_x, t.rs});
        j["coords"].push_back(std::move(jc));
    }
    j["dec"] = nlohmann::json::array();
    for (auto& t : dec) j["dec"].push_back({t.coef, t.coords});
    j["target"] = target.to_string();
    return j.dump();
}

Dre Dre::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("Dre descriptor: ") + e.what());
    }
    Dre d;
    try {
        d.p = j.at("p").get<u32>();
        d.n = j.at("n").get<u32>();
        d.m_r = j.at("m_r").get<u32>();
        for (auto& jc : j.at("coords")) {
            DreCoord c;
            c.owner = jc.at("owner").get<u32>();
            for (auto& jt : jc.at("terms")) {
                CoordTerm t;
                t.coef = jt.at(0).get<u32>();
                t.uses_x = jt.at(1).get<bool>();
                t.rs = jt.at(2).get<std::vector<u32>>();
                c.terms.push_back(std::move(t));
            }
            d.coords.push_back(std::move(c));
        }
        for (auto& jt : j.at("dec")) {
            DecTerm t;
            t.coef = jt.at(0).get<u32>();
            t.coords = jt.at(1).get<std::vector<u32>>();
            d.dec.push_back(std::move(t));
        }
        d.target = Polynomial::parse(j.at("target").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("Dre descriptor: ") + e.what());
    }
    if (!is_prime(d.p)) throw std::invalid_argument("Dre descriptor: p must be prime");
    for (auto& c : d.coords) {
        if (c.owner > d.n) throw std::invalid_argument("Dre descriptor: owner out of range");
        for (auto& t : c.terms) {
            if (t.coef >= d.p) throw std::invalid_argument("Dre descriptor: coefficient not reduced");
            if (c.owner == 0 && t.uses_x)
                throw std::invalid_argument("Dre descriptor: owner-0 coordinate reads an input");
            for (u32 id : t.rs)
                if (id == 0 || id > d.m_r)
                    throw std::invalid_argument("Dre descriptor: randomness index out of range");
        }
    }
    for (auto& t : d.dec) {
        if (t.coef >= d.p) throw std::invalid_argument("Dre descriptor: coefficient not reduced");
        for (u32 idx : t.coords)
            if (idx >= d.coords.size())
                throw std::invalid_argument("Dre descriptor: decoder index out of range");
    }
    return d;
}

// ===== builder =====

DreBuilder::DreBuilder(u32 p, u32 n) : p_(p), n_(n) {
    if (!is_prime(p)) throw std::invalid_argument("DreBuilder: p must be prime");
}

u32 DreBuilder::fresh() { return ++next_r_; }

u32 DreBuilder::add_coord(u32 owner, std::vector<CoordTerm> terms, bool with_fresh) {
    if (owner > n_) throw std::invalid_argument("DreBuilder: owner out of range");
    DreCoord c;
    c.owner = owner;
    for (auto& t : terms) {
        if (owner == 0 && t.uses_x)
            throw std::invalid_argument("DreBuilder: owner-0 coordinate cannot read an input");
        if (t.coef % p_ == 0) continue;
        CoordTerm u{t.coef % p_, t.uses_x, t.rs};
        std::sort(u.rs.begin(), u.rs.end());
        c.terms.push_back(std::move(u));
    }
    std::optional<u32> f;
    if (with_fresh) {
        f = fresh();
        c.terms.push_back({1, false, {*f}});
    }
    coords_.push_back(std::move(c));
    fresh_of_.push_back(f);
    return u32(coords_.size() - 1);
}

void DreBuilder::add_dec(i64 coef, std::vector<u32> coord_indices) {
    u32 c = reduce(coef, p_);
    if (c == 0) return;
    for (u32 idx : coord_indices)
        if (idx >= coords_.size()) throw std::invalid_argument("DreBuilder: decoder index out of range");
    std::sort(coord_indices.begin(), coord_indices.end());
    dec_.push_back({c, std::move(coord_indices)});
}

u32 DreBuilder::fresh_of(u32 coord_idx) const {
    if (coord_idx >= fresh_of_.size() || !fresh_of_[coord_idx])
        throw std::invalid_argument("DreBuilder: coordinate has no fresh randomness");
    return *fresh_of_[coord_idx];
}

namespace {

/// Symbolic polynomial of a coordinate over the joint variable space
/// x_1..x_n, r_1..r_m mapped to variables 1..n, n+1..n+m.
Polynomial coord_symbolic(const DreCoord& c, u32 n) {
    std::vector<PolyTerm> terms;
    for (auto& t : c.terms) {
        PolyTerm pt{i64(t.coef), {}};
        if (t.uses_x) pt.vars.push_back(c.owner);
        for (u32 id : t.rs) pt.vars.push_back(n + id);
        std::sort(pt.vars.begin(), pt.vars.end());
        terms.push_back(std::move(pt));
    }
    return Polynomial(std::move(terms));
}

Polynomial compose_symbolic(const std::vector<DreCoord>& coords, const std::vector<DecTerm>& dec,
                            u32 n, u32 p) {
    std::vector<Polynomial> cp;
    cp.reserve(coords.size());
    for (auto& c : coords) cp.push_back(coord_symbolic(c, n));
    Polynomial total;
    for (auto& t : dec) {
        Polynomial term = Polynomial::constant(i64(t.coef));
        for (u32 idx : t.coords) term = pmod(term * cp[idx], p);
        total = pmod(total + term, p);
    }
    return total;
}

}  // namespace

Dre DreBuilder::finish(const Polynomial& target, u32 absorber_idx) {
    if (absorber_idx >= coords_.size())
        throw std::invalid_argument("DreBuilder::finish: absorber index out of range");
    if (fresh_of_[absorber_idx])
        throw std::logic_error("DreBuilder::finish: absorber must carry no fresh randomness");
    if (target.arity() > n_)
        throw std::invalid_argument("DreBuilder::finish: target arity exceeds builder arity");

    // The decoder must use the absorber exactly once, alone, with a unit.
    u32 uses = 0, unit = 0;
    for (auto& t : dec_) {
        u32 k = u32(std::count(t.coords.begin(), t.coords.end(), absorber_idx));
        if (k == 0) continue;
        uses += k;
        if (t.coords.size() != 1) uses = 2;  // appears inside a product
        unit = t.coef;
    }
    if (uses != 1 || unit % p_ == 0)
        throw std::logic_error("DreBuilder::finish: decoder must use the absorber linearly, once");

    // Fold the input-free composition residue into the absorber.
    Polynomial want = pmod(target, p_);
    Polynomial residual = pmod(compose_symbolic(coords_, dec_, n_, p_) - want, p_);
    for (auto& t : residual.terms())
        for (u32 v : t.vars)
            if (v <= n_)
                throw std::logic_error("DreBuilder::finish: composition residue depends on inputs");
    u32 inv_unit = invmod(unit % p_, p_);
    std::map<std::pair<bool, std::vector<u32>>, u32> merged;
    for (auto& t : coords_[absorber_idx].terms)
        merged[{t.uses_x, t.rs}] = addmod(merged[{t.uses_x, t.rs}], t.coef, p_);
    for (auto& t : residual.terms()) {
        std::vector<u32> rs;
        for (u32 v : t.vars) rs.push_back(v - n_);
        u32 c = mulmod(reduce(-t.coef, p_), inv_unit, p_);
        merged[{false, rs}] = addmod(merged[{false, rs}], c, p_);
    }
    coords_[absorber_idx].terms.clear();
    for (auto& [key, c] : merged)
        if (c) coords_[absorber_idx].terms.push_back({c, key.first, key.second});

    // Exact recomposition check.
    if (compose_symbolic(coords_, dec_, n_, p_) != want)
        throw std::logic_error("DreBuilder::finish: recomposition does not match the target");

    // Triangularity: each non-absorber coordinate carries its own fresh
    // random, used exactly once with a unit coefficient, and references no
    // randomness allocated after it. With the absorber determined by the
    // decoder equation, this makes the encoding perfectly simulatable.
    for (u32 i = 0; i < coords_.size(); ++i) {
        if (i == absorber_idx) continue;
        if (!fresh_of_[i])
            throw std::logic_error("DreBuilder::finish: non-absorber coordinate lacks fresh randomness");
        u32 f = *fresh_of_[i];
        u32 seen = 0;
        for (auto& t : coords_[i].terms) {
            for (u32 id : t.rs) {
                if (id > f)
                    throw std::logic_error("DreBuilder::finish: coordinate references later randomness");
                if (id == f) {
                    ++seen;
                    if (t.uses_x || t.rs.size() != 1 || (t.coef != 1 && t.coef != p_ - 1))
                        throw std::logic_error(
                            "DreBuilder::finish: fresh randomness must appear as a unit term");
                }
            }
        }
        if (seen != 1)
            throw std::logic_error("DreBuilder::finish: fresh randomness must appear exactly once");
    }

    Dre d;
    d.p = p_;
    d.n = n_;
    d.m_r = next_r_;
    d.coords = coords_;
    d.dec = dec_;
    d.target = want;
    return d;
}

// ===== masked products and the standard constructions =====

namespace {

std::vector<DecTerm> formula_times_coord(std::vector<DecTerm> f, u32 coord) {
    for (auto& t : f) {
        t.coords.push_back(coord);
        std::sort(t.coords.begin(), t.coords.end());
    }
    return f;
}

void formula_append_scaled(std::vector<DecTerm>& dst, const std::vector<DecTerm>& src, u32 scale,
                           u32 p) {
    for (auto t : src) {
        t.coef = mulmod(t.coef, scale, p);
        if (t.coef) dst.push_back(std::move(t));
    }
}

Polynomial rvar(u32 n, u32 id) { return Polynomial::variable(n + id); }

/// Coordinates computing (product of scale randoms) * (product of vars) with
/// an additive mask; formula/mask returned, coordinates appended to b.
MaskedProduct masked_product(DreBuilder& b, u32 n, std::span<const u32> vars,
                             const std::vector<u32>& scale) {
    const u32 p = b.p();
    if (vars.empty()) throw std::invalid_argument("masked_product: empty variable list");
    if (vars.size() == 1) {
        u32 idx = b.add_coord(vars[0], {{1, true, scale}});
        MaskedProduct out;
        out.formula = {{1, {idx}}};
        out.mask = rvar(n, b.fresh_of(idx));
        return out;
    }
    auto left = masked_product(b, n, vars.subspan(0, vars.size() - 1), scale);
    const u32 w = vars.back();

    u32 beta = b.add_coord(w, {{1, true, {}}});
    u32 b_r = b.fresh_of(beta);

    std::vector<CoordTerm> gterms;
    for (auto& t : left.mask.terms()) {
        std::vector<u32> rs;
        for (u32 v : t.vars) rs.push_back(v - n);
        gterms.push_back({reduce(t.coef, p), true, std::move(rs)});
    }
    u32 gamma = b.add_coord(w, std::move(gterms));
    u32 c_r = b.fresh_of(gamma);

    std::vector<u32> scale2 = scale;
    scale2.push_back(b_r);
    std::sort(scale2.begin(), scale2.end());
    auto scaled = masked_product(b, n, vars.subspan(0, vars.size() - 1), scale2);

    MaskedProduct out;
    formula_append_scaled(out.formula, formula_times_coord(left.formula, beta), 1, p);
    out.formula.push_back({p - 1, {gamma}});
    formula_append_scaled(out.formula, scaled.formula, p - 1, p);
    out.mask = pmod(left.mask * rvar(n, b_r) - rvar(n, c_r) - scaled.mask, p);
    return out;
}

}  // namespace

Dre dre_product_plus(u32 k, u32 p) {
    if (k < 1) throw std::invalid_argument("dre_product_plus: k must be at least 1");
    if (!is_prime(p)) throw std::invalid_argument("dre_product_plus: p must be prime");
    const u32 n = k + 1;
    DreBuilder b(p, n);
    std::vector<u32> vars;
    for (u32 i = 2; i <= k + 1; ++i) vars.push_back(i);
    auto mp = masked_product(b, n, vars, {});
    u32 absorber = b.add_coord(1, {{1, true, {}}}, false);
    for (auto& t : mp.formula) b.add_dec(i64(t.coef), t.coords);
    b.add_dec(1, {absorber});

    Polynomial target = Polynomial::variable(1);
    Polynomial prod = Polynomial::constant(1);
    for (u32 v : vars) prod = prod * Polynomial::variable(v);
    target = target + prod;
    return b.finish(target, absorber);
}

Dre dre_polynomial(const Polynomial& f, u32 p) {
    if (!is_prime(p)) throw std::invalid_argument("dre_polynomial: p must be prime");
    if (f.is_zero()) {
        Dre d;
        d.p = p;
        d.n = 0;
        d.m_r = 0;
        d.target = f;
        return d;
    }
    const u32 n = f.arity();
    DreBuilder b(p, n);
    for (auto& t : f.terms()) {
        if (t.vars.empty()) continue;  // constants land in the absorber
        u32 c = reduce(t.coef, p);
        if (c == 0) continue;
        auto mp = masked_product(b, n, t.vars, {});
        for (auto& ft : mp.formula) b.add_dec(i64(mulmod(ft.coef, c, p)), ft.coords);
    }
    u32 absorber = b.add_coord(0, {}, false);
    b.add_dec(1, {absorber});
    return b.finish(f, absorber);
}

// ===== verification =====

bool verify_dre(const Dre& D, const Polynomial& target, const DreVerifyOptions& opt,
                std::string* why) {
    const u32 p = D.p;
    if (!is_prime(p)) throw std::invalid_argument("verify_dre: p must be prime");
    if (target.arity() > D.n) {
        if (why) *why = "target reads more variables than the encoding provides";
        return false;
    }
    for (auto& c : D.coords) {
        if (c.owner > D.n) throw std::invalid_argument("verify_dre: owner out of range");
        for (auto& t : c.terms)
            for (u32 id : t.rs)
                if (id == 0 || id > D.m_r)
                    throw std::invalid_argument("verify_dre: randomness index out of range");
    }
    for (auto& t : D.dec)
        for (u32 idx : t.coords)
            if (idx >= D.coords.size())
                throw std::invalid_argument("verify_dre: decoder index out of range");

    u128 cost = 1;
    for (u32 i = 0; i < D.n + D.m_r; ++i) {
        cost *= p;
        if (cost > opt.budget) throw BudgetError("verify_dre: p^(n+m_r) exceeds the budget");
    }
    const u64 r_total = u64([&] {
        u128 v = 1;
        for (u32 i = 0; i < D.m_r; ++i) v *= p;
        return v;
    }());
    const u64 x_total = u64([&] {
        u128 v = 1;
        for (u32 i = 0; i < D.n; ++i) v *= p;
        return v;
    }());

    const u32 bits = checked_bits(p);
    if (u64(bits) * D.size() > 120)
        throw std::invalid_argument("verify_dre: coordinate tuple too wide to pack");

    std::vector<u32> xv(D.n, 0);
    std::map<u32, std::vector<u128>> fiber_rep;
    std::vector<u128> packed(r_total);

    for (u64 xi = 0; xi < x_total; ++xi) {
        const u32 want = target.eval_mod(xv, p);

        auto fill = [&](u64 lo, u64 hi, unsigned char* bad, u64* bad_r) {
            std::vector<u32> rv(D.m_r, 0);
            u64 t = lo;
            for (u32 i = 0; i < D.m_r; ++i) {
                rv[i] = u32(t % p);
                t /= p;
            }
            std::vector<u32> m(D.size());
            for (u64 ri = lo; ri < hi; ++ri) {
                for (u32 ci = 0; ci < D.size(); ++ci) {
                    u32 xval = D.coords[ci].owner ? xv[D.coords[ci].owner - 1] : 0;
                    m[ci] = D.eval_coord(ci, xval, rv);
                }
                if (D.decode(m) != want) {
                    *bad = 1;
                    *bad_r = ri;
                    return;
                }
                u128 key = 0;
                for (u32 ci = 0; ci < D.size(); ++ci) key = (key << bits) | m[ci];
                packed[ri] = key;
                // odometer over randomness digits
                for (u32 i = 0; i < D.m_r; ++i) {
                    if (++rv[i] < p) break;
                    rv[i] = 0;
                }
            }
        };

        unsigned char bad = 0;
        u64 bad_r = 0;
        if (opt.workers <= 1 || r_total < 4096) {
            fill(0, r_total, &bad, &bad_r);
        } else {
            u32 w = std::min<u32>(opt.workers, 16);
            std::vector<std::thread> pool;
            std::vector<unsigned char> bads(w, 0);
            std::vector<u64> bad_rs(w, 0);
            u64 chunk = (r_total + w - 1) / w;
            for (u32 i = 0; i < w; ++i) {
                u64 lo = i * chunk, hi = std::min(r_total, lo + chunk);
                if (lo >= hi) break;
                pool.emplace_back([&, i, lo, hi] { fill(lo, hi, &bads[i], &bad_rs[i]); });
            }
            for (auto& th : pool) th.join();
            for (u32 i = 0; i < w; ++i)
                if (bads[i] && (!bad || bad_rs[i] < bad_r)) {
                    bad = 1;
                    bad_r = bad_rs[i];
                }
        }
        if (bad) {
            if (why) {
                std::ostringstream os;
                os << "correctness failed at x index " << xi << ", r index " << bad_r;
                *why = os.str();
            }
            return false;
        }

        std::sort(packed.begin(), packed.end());
        auto it = fiber_rep.find(want);
        if (it == fiber_rep.end()) {
            fiber_rep.emplace(want, packed);
        } else if (it->second != packed) {
            if (why) {
                std::ostringstream os;
                os << "security failed: x index " << xi
                   << " is distinguishable within the fiber of output " << want;
                *why = os.str();
            }
            return false;
        }

        for (u32 i = 0; i < D.n; ++i) {
            if (++xv[i] < p) break;
            xv[i] = 0;
        }
    }
    return true;
}

}  // namespace qrpsm
