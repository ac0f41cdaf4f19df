#include "qrpsm/compile.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>

#include <json.hpp>

namespace qrpsm {

namespace {

using u128 = unsigned __int128;

// ===== embedding analysis =====

struct EmbedResult {
    i64 min_g = 0;
    u32 length = 1;                    ///< l(g): size of g's value range
    std::vector<signed char> pattern;  ///< wanted class per window slot; 0 = unreachable
};

EmbedResult embed_pattern(const TruthTable& f, const Polynomial& g, bool flip) {
    const u32 n = f.arity();
    if (g.arity() > n)
        throw std::invalid_argument("compile: g reads more variables than f provides");
    std::vector<i64> xv(n, 0);
    std::vector<i64> vals(f.size());
    i64 lo = 0, hi = 0;
    for (u32 x = 0; x < f.size(); ++x) {
        for (u32 i = 0; i < n; ++i) xv[i] = (x >> i) & 1;
        vals[x] = g.eval_int(xv);
        if (x == 0) {
            lo = hi = vals[0];
        } else {
            lo = std::min(lo, vals[x]);
            hi = std::max(hi, vals[x]);
        }
    }
    if (hi - lo + 1 > (i64(1) << 20))
        throw std::invalid_argument("compile: g's value range is too long");
    EmbedResult e;
    e.min_g = lo;
    e.length = u32(hi - lo + 1);
    e.pattern.assign(e.length, 0);
    for (u32 x = 0; x < f.size(); ++x) {
        size_t slot = size_t(vals[x] - lo);
        signed char want = f.get(x) ? 1 : -1;
        if (flip) want = -want;
        if (e.pattern[slot] == 0)
            e.pattern[slot] = want;
        else if (e.pattern[slot] != want)
            throw std::invalid_argument("compile: g does not embed f (value collision at x=" +
                                        std::to_string(x) + ")");
    }
    return e;
}

// ===== compact-encoder shape =====

struct PairSpec {
    u32 i = 0, j = 0;   ///< variable indices of the quadratic monomial
    u32 c = 0;          ///< its coefficient mod p
    u32 si = 0, sj = 0; ///< input shifts folding the in-pair linear terms
};

struct LinSpec {
    u32 k = 0;  ///< variable index
    u32 d = 0;  ///< coefficient mod p
};

/// g + x_{n+1} rewritten as sum of c*(x_i+si)*(x_j+sj) products over disjoint
/// variable pairs, plus linear terms on the remaining variables, plus a
/// constant. Returns nothing when g is not multilinear-quadratic with
/// disjoint quadratic monomials mod p.
struct UForm {
    std::vector<PairSpec> pairs;
    std::vector<LinSpec> linears;  ///< ascending variable index; x_{n+1} last
    u32 e0 = 0;
};

std::optional<UForm> normalize_u(const Polynomial& g, u32 n, u32 p) {
    Polynomial gm = g.multilinear();
    if (gm.degree() > 2) return std::nullopt;
    u32 e0 = 0;
    std::map<u32, u32> lin;
    std::vector<std::array<u32, 3>> quad;
    for (auto& t : gm.terms()) {
        u32 c = reduce(t.coef, p);
        if (c == 0) continue;
        if (t.vars.empty())
            e0 = addmod(e0, c, p);
        else if (t.vars.size() == 1)
            lin[t.vars[0]] = addmod(lin[t.vars[0]], c, p);
        else
            quad.push_back({t.vars[0], t.vars[1], c});
    }
    std::map<u32, u32> touch;
    for (auto& q : quad)
        if (++touch[q[0]] > 1 || ++touch[q[1]] > 1) return std::nullopt;

    UForm u;
    for (auto& q : quad) {
        PairSpec ps;
        ps.i = q[0];
        ps.j = q[1];
        ps.c = q[2];
        u32 cinv = invmod(ps.c, p);
        u32 di = lin.count(ps.i) ? lin[ps.i] : 0;
        u32 dj = lin.count(ps.j) ? lin[ps.j] : 0;
        ps.sj = mulmod(di, cinv, p);
        ps.si = mulmod(dj, cinv, p);
        lin.erase(ps.i);
        lin.erase(ps.j);
        e0 = submod(e0, mulmod(ps.c, mulmod(ps.si, ps.sj, p), p), p);
        u.pairs.push_back(ps);
    }
    u.e0 = e0;
    for (auto& [k, d] : lin)
        if (d) u.linears.push_back({k, d});
    u.linears.push_back({n + 1, 1});
    return u;
}

/// Two-level encoding of h = U * x_{n+2}: level 1 masks U itself via
/// multiply-and-reshare pair gadgets plus blinded linear slots; level 2
/// multiplies by x_{n+2} and cancels the level-1 mask with scaled copies.
/// The x_{n+1} slot's scaled copy closes the construction as the absorber.
Dre build_h_dre(const UForm& u, u32 p, u32 n, const Polynomial& target) {
    const u32 w = n + 2;
    DreBuilder b(p, w);

    struct PairCoords {
        u32 A = 0, B = 0, C = 0, D = 0, F = 0, G = 0, H = 0;
        u32 ra = 0, rb = 0;
    };
    std::vector<PairCoords> pc(u.pairs.size());
    std::vector<u32> E(u.linears.size(), 0), I(u.linears.size(), 0);

    Polynomial alpha;  // level-1 mask, over randomness variables shifted by w
    auto rv = [&](u32 id) { return Polynomial::variable(w + id); };

    for (size_t t = 0; t < u.pairs.size(); ++t) {
        const PairSpec& q = u.pairs[t];
        pc[t].A = b.add_coord(q.i, {{1, true, {}}, {q.si, false, {}}});
        pc[t].ra = b.fresh_of(pc[t].A);
        pc[t].B = b.add_coord(q.j, {{1, true, {}}, {q.sj, false, {}}});
        pc[t].rb = b.fresh_of(pc[t].B);
        pc[t].C = b.add_coord(q.j, {{1, true, {pc[t].ra}}, {q.sj, false, {pc[t].ra}}});
        u32 rc = b.fresh_of(pc[t].C);
        pc[t].D = b.add_coord(q.i, {{1, true, {pc[t].rb}},
                                    {q.si, false, {pc[t].rb}},
                                    {1, false, {pc[t].ra, pc[t].rb}},
                                    {p - 1, false, {rc}}});
        u32 rd = b.fresh_of(pc[t].D);  // A*B - C - D = (x_i+si)(x_j+sj) - rd
        alpha = alpha - Polynomial::constant(i64(q.c)) * rv(rd);
    }
    for (size_t k = 0; k < u.linears.size(); ++k) {
        E[k] = b.add_coord(u.linears[k].k, {{1, true, {}}});
        alpha = alpha + Polynomial::constant(i64(u.linears[k].d)) * rv(b.fresh_of(E[k]));
    }

    u32 beta = b.add_coord(w, {{1, true, {}}});
    u32 rbeta = b.fresh_of(beta);

    std::vector<CoordTerm> gterms;
    for (auto& t : alpha.terms()) {
        std::vector<u32> rs;
        for (u32 v : t.vars) rs.push_back(v - w);
        gterms.push_back({reduce(t.coef, p), true, std::move(rs)});
    }
    u32 gamma = b.add_coord(w, std::move(gterms));

    for (size_t t = 0; t < u.pairs.size(); ++t) {
        const PairSpec& q = u.pairs[t];
        pc[t].F = b.add_coord(q.i, {{1, true, {rbeta}}, {q.si, false, {rbeta}}});
        u32 rf = b.fresh_of(pc[t].F);
        pc[t].G = b.add_coord(q.i, {{1, true, {rbeta, pc[t].rb}}, {q.si, false, {rbeta, pc[t].rb}}});
        pc[t].H = b.add_coord(q.j, {{1, true, {rf}}, {q.sj, false, {rf}}});
    }
    u32 absorber = 0;
    for (size_t k = 0; k < u.linears.size(); ++k) {
        bool is_abs = u.linears[k].k == n + 1;
        I[k] = b.add_coord(u.linears[k].k, {{1, true, {rbeta}}}, !is_abs);
        if (is_abs) absorber = I[k];
    }

    // decoder: (level-1 value) * beta - gamma - (scaled level-1 value)
    for (size_t t = 0; t < u.pairs.size(); ++t) {
        const i64 c = i64(u.pairs[t].c);
        b.add_dec(c, {pc[t].A, pc[t].B, beta});
        b.add_dec(-c, {pc[t].C, beta});
        b.add_dec(-c, {pc[t].D, beta});
        b.add_dec(-c, {pc[t].F, pc[t].B});
        b.add_dec(c, {pc[t].G});
        b.add_dec(c, {pc[t].H});
    }
    for (size_t k = 0; k < u.linears.size(); ++k) {
        b.add_dec(i64(u.linears[k].d), {E[k], beta});
        b.add_dec(-i64(u.linears[k].d), {I[k]});
    }
    b.add_dec(i64(u.e0), {beta});
    b.add_dec(-1, {gamma});

    return b.finish(target, absorber);
}

// ===== protocol assembly =====

struct Shared {
    Dre h;
    u32 p = 0, n = 0, a0 = 0, m_r = 0;
    u64 pm = 1;  ///< p^{m_r}
    std::vector<u32> residues;
    LegendreTable table;
    std::vector<u32> pos;            ///< coordinate -> message index
    std::vector<u32> coord_of_msg;   ///< message index -> coordinate
    std::vector<std::vector<u32>> owned;  ///< player -> coordinates

    Shared(Dre dre, u32 n_, u32 a0_)
        : h(std::move(dre)), p(h.p), n(n_), a0(a0_), m_r(h.m_r), residues(residue_set(h.p)), table(h.p) {
        u128 acc = 1;
        for (u32 i = 0; i < m_r; ++i) {
            acc *= p;
            if (acc > (u128(1) << 62))
                throw std::invalid_argument("compile: randomness space too large to index");
        }
        pm = u64(acc);
        const u32 s = h.size();
        owned.assign(n, {});
        for (u32 ci = 0; ci < s; ++ci) owned[player_of_owner(h.coords[ci].owner)].push_back(ci);
        pos.assign(s, 0);
        coord_of_msg.assign(s, 0);
        u32 off = 0;
        for (u32 pl = 0; pl < n; ++pl) {
            for (u32 ci : owned[pl]) {
                pos[ci] = off;
                coord_of_msg[off] = ci;
                ++off;
            }
        }
    }

    u32 player_of_owner(u32 o) const { return (o <= 1 || o > n) ? 0 : o - 1; }

    /// Value substituted for the owning variable of a coordinate.
    u32 owner_xval(u32 o, u32 xi, u32 rprime) const {
        if (o == 0) return 0;
        if (o == n + 1) return a0;
        if (o == n + 2) return rprime;
        return xi;
    }

    void r_digits(u64 lo, u32* out) const {
        for (u32 i = 0; i < m_r; ++i) {
            out[i] = u32(lo % p);
            lo /= p;
        }
    }
};

// ----- enumeration hooks: affine odometer over free randomness digits -----

struct SliceCoord {
    u32 ci = 0;    ///< coordinate whose value pins one digit
    u32 id = 0;    ///< the digit it pins
    u32 unit = 1;  ///< its coefficient there (1 or p-1; self-inverse)
};

struct HookEngine {
    std::shared_ptr<const Shared> sh;
    u32 bits = 0;
    std::vector<SliceCoord> scs;
    std::vector<u32> free_desc;   ///< unpinned digit ids, most significant first
    std::vector<u64> pw;          ///< p^0..p^{m_r}

    u32 oxval(u32 owner, const std::vector<u32>& x, u32 rprime) const {
        if (owner == 0) return 0;
        if (owner == sh->n + 1) return sh->a0;
        if (owner == sh->n + 2) return rprime;
        return x[owner - 1];
    }

    /// Enumerates every randomness index consistent with the pinned slice
    /// digits, in increasing order, maintaining all coordinate values
    /// incrementally. step(r, coordinate values).
    void run(const std::vector<u32>& x, const std::vector<u32>* slice_vals,
             const std::function<void(u64, const u32*)>& step) const {
        const Shared& S = *sh;
        const u32 p = S.p;
        const u32 s = S.h.size();
        const u32 levels = u32(free_desc.size());
        std::vector<u32> digit(S.m_r + 1, 0);
        std::vector<u32> level_of(S.m_r + 1, u32(-1));
        for (u32 l = 0; l < levels; ++l) level_of[free_desc[l]] = l;

        std::vector<std::vector<u32>> vals(levels + 1, std::vector<u32>(s));
        std::vector<u32> slope(s);
        std::vector<u32> scratch(s);

        for (u32 hi = 0; hi < S.residues.size(); ++hi) {
            const u32 rprime = S.residues[hi];
            u64 r_base = u64(hi) * pw[S.m_r];
            std::fill(digit.begin(), digit.end(), 0);
            for (u32 k = 0; k < scs.size(); ++k) {
                const SliceCoord& sc = scs[k];
                const DreCoord& c = S.h.coords[sc.ci];
                // constant part: every term except the pinned digit's own
                // (the pinning scan guarantees all others are digit-free)
                u32 cst = 0;
                for (auto& t : c.terms) {
                    if (!t.rs.empty()) continue;
                    u32 v = t.coef;
                    if (t.uses_x) v = mulmod(v, oxval(c.owner, x, rprime), p);
                    cst = addmod(cst, v, p);
                }
                u32 want = (*slice_vals)[k];
                u32 d = mulmod(submod(want, cst, p), sc.unit, p);
                digit[sc.id] = d;
                r_base += u64(d) * pw[sc.id - 1];
            }

            // base coordinate values: pinned digits set, free digits zero
            std::vector<u32> rvec(S.m_r);
            for (u32 id = 1; id <= S.m_r; ++id) rvec[id - 1] = digit[id];
            for (u32 ci = 0; ci < s; ++ci)
                vals[0][ci] = S.h.eval_coord(ci, oxval(S.h.coords[ci].owner, x, rprime), rvec);

            if (levels == 0) {
                step(r_base, vals[0].data());
                continue;
            }

            // recursive odometer, most significant free digit outermost
            auto slope_at = [&](u32 level) {
                const u32 id = free_desc[level];
                std::fill(slope.begin(), slope.end(), 0);
                for (u32 ci = 0; ci < s; ++ci) {
                    const DreCoord& c = S.h.coords[ci];
                    u32 acc = 0;
                    for (auto& t : c.terms) {
                        bool has = false, deeper = false;
                        for (u32 rid : t.rs) {
                            if (rid == id) has = true;
                            else if (level_of[rid] != u32(-1) && level_of[rid] > level) deeper = true;
                        }
                        if (!has || deeper) continue;
                        u32 v = t.coef;
                        if (t.uses_x) v = mulmod(v, oxval(c.owner, x, rprime), p);
                        for (u32 rid : t.rs) {
                            if (rid == id) continue;
                            v = mulmod(v, digit[rid], p);
                        }
                        acc = addmod(acc, v, p);
                    }
                    slope[ci] = acc;
                }
            };

            struct Rec {
                const HookEngine& eng;
                u32 p, s, levels;
                std::vector<u32>& digit;
                std::vector<std::vector<u32>>& vals;
                std::vector<u32>& slope;
                std::vector<u32>& scratch;
                const std::function<void(u64, const u32*)>& step;
                const std::function<void(u32)>& slope_at;

                void go(u32 level, u64 r_cur) {
                    const u32 id = eng.free_desc[level];
                    const u64 stride = eng.pw[id - 1];
                    slope_at(level);
                    if (level + 1 == levels) {
                        std::copy(vals[level].begin(), vals[level].end(), scratch.begin());
                        u64 r = r_cur;
                        for (u32 v = 0; v < p; ++v) {
                            step(r, scratch.data());
                            r += stride;
                            if (v + 1 < p)
                                for (u32 ci = 0; ci < s; ++ci) {
                                    u32 nv = scratch[ci] + slope[ci];
                                    scratch[ci] = nv >= p ? nv - p : nv;
                                }
                        }
                        return;
                    }
                    // keep this level's slope local: deeper calls overwrite it
                    std::vector<u32> my_slope = slope;
                    vals[level + 1] = vals[level];
                    u64 r = r_cur;
                    for (u32 v = 0; v < p; ++v) {
                        digit[id] = v;
                        go(level + 1, r);
                        r += stride;
                        if (v + 1 < p)
                            for (u32 ci = 0; ci < s; ++ci) {
                                u32 nv = vals[level + 1][ci] + my_slope[ci];
                                vals[level + 1][ci] = nv >= p ? nv - p : nv;
                            }
                    }
                    digit[id] = 0;
                }
            };

            std::function<void(u32)> slope_fn = [&](u32 level) { slope_at(level); };
            Rec rec{*this, p, s, levels, digit, vals, slope, scratch, step, slope_fn};
            rec.go(0, r_base);
        }
    }
};

std::optional<ProtocolHooks> build_hooks(const std::shared_ptr<const Shared>& sh) {
    const Shared& S = *sh;
    const u32 p = S.p;
    const u32 s = S.h.size();
    const u32 bits = u32(std::bit_width(p - 1));
    if (u64(bits) * s > 64 || S.m_r > 40) return std::nullopt;
    for (auto& c : S.h.coords)
        for (auto& t : c.terms)
            if (std::adjacent_find(t.rs.begin(), t.rs.end()) != t.rs.end())
                return std::nullopt;  // repeated digit in one monomial

    auto eng = std::make_shared<HookEngine>();
    eng->sh = sh;
    eng->bits = bits;
    eng->pw.resize(S.m_r + 1, 1);
    for (u32 i = 1; i <= S.m_r; ++i) eng->pw[i] = eng->pw[i - 1] * p;

    std::vector<char> pinned(S.m_r + 1, 0);
    for (u32 ci = 0; ci < s && eng->scs.size() < 3; ++ci) {
        const DreCoord& c = S.h.coords[ci];
        u32 only_id = 0, unit = 0, unit_terms = 0;
        bool ok = true;
        for (auto& t : c.terms) {
            for (u32 id : t.rs) {
                if (only_id == 0) only_id = id;
                if (id != only_id) ok = false;
            }
            if (t.rs.size() == 1 && t.rs[0] == only_id) {
                ++unit_terms;
                if (t.uses_x || (t.coef != 1 && t.coef != p - 1)) ok = false;
                unit = t.coef;
            } else if (!t.rs.empty()) {
                ok = false;  // the digit appears inside a product
            }
        }
        if (!ok || only_id == 0 || unit_terms != 1 || pinned[only_id]) continue;
        pinned[only_id] = 1;
        eng->scs.push_back({ci, only_id, unit});
    }
    for (u32 id = S.m_r; id >= 1; --id)
        if (!pinned[id]) eng->free_desc.push_back(id);

    ProtocolHooks H;
    u64 sc_count = 1;
    for (size_t i = 0; i < eng->scs.size(); ++i) sc_count *= p;
    if (sc_count > u32(-1)) return std::nullopt;
    H.slice_count = u32(sc_count);

    H.pack = [eng](const u32* msgs) {
        const u32 n = eng->sh->h.size();
        u64 key = 0;
        for (u32 j = 0; j < n; ++j) key = (key << eng->bits) | msgs[j];
        return key;
    };
    H.slice_of = [eng](const u32* msgs) {
        u32 k = 0;
        for (auto& sc : eng->scs) k = k * eng->sh->p + msgs[eng->sh->pos[sc.ci]];
        return k;
    };
    H.stream_slice = [eng](const std::vector<u32>& x, u32 slice,
                           const std::function<void(u64, u64)>& emit) {
        const Shared& S2 = *eng->sh;
        std::vector<u32> svals(eng->scs.size());
        for (size_t k = eng->scs.size(); k-- > 0;) {
            svals[k] = u32(slice % S2.p);
            slice /= S2.p;
        }
        const u32 s2 = S2.h.size();
        eng->run(x, &svals, [&](u64 r, const u32* vals) {
            u64 key = 0;
            for (u32 j = 0; j < s2; ++j) key = (key << eng->bits) | vals[S2.coord_of_msg[j]];
            emit(r, key);
        });
    };
    H.stream_all = [eng](const std::vector<u32>& x,
                         const std::function<void(u64, const u32*)>& sink) {
        const Shared& S2 = *eng->sh;
        const u32 s2 = S2.h.size();
        // all digits free: a second engine sharing the tables
        HookEngine all;
        all.sh = eng->sh;
        all.bits = eng->bits;
        all.pw = eng->pw;
        for (u32 id = S2.m_r; id >= 1; --id) all.free_desc.push_back(id);
        std::vector<u32> msgs(s2);
        all.run(x, nullptr, [&](u64 r, const u32* vals) {
            for (u32 j = 0; j < s2; ++j) msgs[j] = vals[S2.coord_of_msg[j]];
            sink(r, msgs.data());
        });
    };
    return H;
}

PsmProtocol assemble_psm(const Dre& h, const TruthTable& f, u32 p, u32 a0) {
    const u32 n = f.arity();
    if (h.n != n + 2) throw std::invalid_argument("compile: encoding arity must be n+2");
    if (h.p != p) throw std::invalid_argument("compile: modulus mismatch");
    auto sh = std::make_shared<const Shared>(h, n, a0);

    PsmProtocol P;
    P.modulus = p;
    P.domain_sizes.assign(n, 2);
    P.msg_arity.resize(n);
    for (u32 pl = 0; pl < n; ++pl) P.msg_arity[pl] = u32(sh->owned[pl].size());
    P.randomness_size = sh->pm * u64((p - 1) / 2);

    P.describe_r = [sh](u64 r) {
        std::vector<u32> out(sh->m_r + 1);
        sh->r_digits(r % sh->pm, out.data());
        out[sh->m_r] = sh->residues[size_t(r / sh->pm)];
        return out;
    };
    P.encode = [sh](u32 player, u32 xi, u64 r, u32* out) {
        const u32 rp = sh->residues[size_t(r / sh->pm)];
        static thread_local std::vector<u32> rv;
        rv.resize(sh->m_r);
        sh->r_digits(r % sh->pm, rv.data());
        u32 k = 0;
        for (u32 ci : sh->owned[player]) {
            u32 o = sh->h.coords[ci].owner;
            out[k++] = sh->h.eval_coord(ci, sh->owner_xval(o, xi, rp), rv);
        }
    };
    P.decode = [sh](const u32* m) {
        static thread_local std::vector<u32> coords;
        coords.resize(sh->h.size());
        for (u32 j = 0; j < coords.size(); ++j) coords[sh->coord_of_msg[j]] = m[j];
        return sh->table(sh->h.decode(coords));
    };
    P.hooks = build_hooks(sh);
    return P;
}

}  // namespace

// ===== public entry points =====

QrPsmFromDre compile(const TruthTable& f, const Polynomial& g, const CompileOptions& opt) {
    const u32 n = f.arity();
    EmbedResult emb = embed_pattern(f, g, opt.flip_sign);
    PeraltaRecord pr = peralta_prime(emb.length, opt.peralta);
    LegendreTable t(pr.p);
    auto b = offset_for_pattern(t, emb.pattern);
    if (!b) throw std::logic_error("compile: no window offset in a qualifying residue string");
    u32 a0 = reduce(i64(*b) - emb.min_g, pr.p);

    auto uf = normalize_u(g, n, pr.p);
    if (!uf)
        throw std::invalid_argument(
            "compile: g is beyond the compact encoder "
            "(multilinear degree <= 2 with variable-disjoint quadratic monomials required)");

    Polynomial target = (g.multilinear() + Polynomial::variable(n + 1)) *
                        Polynomial::variable(n + 2);
    QrPsmFromDre out;
    out.f = f;
    out.g = g;
    out.flip_sign = opt.flip_sign;
    out.p = pr.p;
    out.a0 = a0;
    out.h = build_h_dre(*uf, pr.p, n, target);
    out.protocol = assemble_psm(out.h, f, pr.p, a0);

    // offset guarantee: the decoder's argument class is never 0
    std::vector<i64> xv(n, 0);
    for (u32 x = 0; x < f.size(); ++x) {
        for (u32 i = 0; i < n; ++i) xv[i] = (x >> i) & 1;
        u32 v = addmod(a0, reduce(g.eval_int(xv), pr.p), pr.p);
        if (v == 0) throw std::logic_error("compile: offset scan admitted a zero class");
    }
    return out;
}

CostEstimate estimate_cost(const TruthTable& f, const Polynomial& g, const CompileOptions& opt) {
    const u32 n = f.arity();
    EmbedResult emb = embed_pattern(f, g, opt.flip_sign);
    PeraltaRecord pr = peralta_prime(emb.length, opt.peralta);
    CostEstimate ce;
    ce.p = pr.p;
    auto uf = normalize_u(g, n, pr.p);
    Polynomial target = (g.multilinear() + Polynomial::variable(n + 1)) *
                        Polynomial::variable(n + 2);
    if (uf) {
        ce.s = build_h_dre(*uf, pr.p, n, target).size();
        ce.exact = true;
    } else {
        ce.s = dre_polynomial(target, pr.p).size();
        ce.exact = false;
    }
    ce.bits = u64(ce.s) * std::bit_width(pr.p - 1);
    return ce;
}

std::string QrPsmFromDre::to_json() const {
    nlohmann::json j;
    j["p"] = p;
    j["a0"] = a0;
    j["g"] = g.to_string();
    j["dre_len"] = dre_len();
    j["f"] = f.to_hex() + ":" + std::to_string(f.arity());
    j["flip"] = flip_sign;
    j["dre"] = nlohmann::json::parse(h.to_json());
    return j.dump();
}

QrPsmFromDre QrPsmFromDre::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("compiled descriptor: ") + e.what());
    }
    QrPsmFromDre out;
    u32 dre_len_claimed = 0;
    try {
        out.p = j.at("p").get<u32>();
        out.a0 = j.at("a0").get<u32>();
        out.g = Polynomial::parse(j.at("g").get<std::string>());
        std::string fs = j.at("f").get<std::string>();
        auto colon = fs.rfind(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("compiled descriptor: f must be <hex>:<arity>");
        out.f = TruthTable::from_hex(fs.substr(0, colon), u32(std::stoul(fs.substr(colon + 1))));
        out.flip_sign = j.value("flip", false);
        out.h = Dre::from_json(j.at("dre").dump());
        dre_len_claimed = j.at("dre_len").get<u32>();
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("compiled descriptor: ") + e.what());
    }
    require_odd_prime(out.p, "compiled descriptor");
    if (out.a0 == 0 || out.a0 >= out.p)
        throw std::invalid_argument("compiled descriptor: a0 out of range");
    if (dre_len_claimed != out.h.size())
        throw std::invalid_argument("compiled descriptor: dre_len disagrees with the encoding");

    // decoder-argument sanity: classes match f and never hit 0
    const u32 n = out.f.arity();
    LegendreTable t(out.p);
    std::vector<i64> xv(n, 0);
    for (u32 x = 0; x < out.f.size(); ++x) {
        for (u32 i = 0; i < n; ++i) xv[i] = (x >> i) & 1;
        u32 v = addmod(out.a0, reduce(out.g.eval_int(xv), out.p), out.p);
        int want = out.f.get(x) ? 1 : -1;
        if (out.flip_sign) want = -want;
        if (t(v) != want)
            throw std::invalid_argument("compiled descriptor: offset classes disagree with f");
    }
    out.protocol = assemble_psm(out.h, out.f, out.p, out.a0);
    return out;
}

}  // namespace qrpsm
