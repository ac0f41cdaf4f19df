#include "qrpsm/lqr.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace qrpsm {

namespace {

u64 ipow(u64 b, u32 e) {
    u64 r = 1;
    while (e--) r *= b;
    return r;
}

u32 ceil_log2(u32 p) { return u32(std::bit_width(p - 1)); }

}  // namespace

LqrProtocol parse_lqr(const std::string& json_line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_line);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("protocol descriptor: ") + e.what());
    }
    if (!j.is_object() || !j.contains("p") || !j.contains("a") || j.size() != 2)
        throw std::invalid_argument("protocol descriptor: expected {\"p\":...,\"a\":[...]}");
    if (!j["p"].is_number_unsigned())
        throw std::invalid_argument("protocol descriptor: p must be a positive integer");
    LqrProtocol P;
    P.p = j["p"].get<u32>();
    require_odd_prime(P.p, "protocol descriptor");
    if (!j["a"].is_array() || j["a"].size() < 2)
        throw std::invalid_argument("protocol descriptor: a must list an offset and n >= 1 coefficients");
    for (auto& v : j["a"]) {
        if (!v.is_number_integer())
            throw std::invalid_argument("protocol descriptor: coefficients must be integers");
        i64 c = v.get<i64>();
        if (c < 0 || c >= i64(P.p))
            throw std::invalid_argument("protocol descriptor: coefficients must lie in [0, p)");
        P.a.push_back(u32(c));
    }
    return P;
}

std::string to_json_line(const LqrProtocol& P) {
    std::ostringstream os;
    os << "{\"p\":" << P.p << ",\"a\":[";
    for (size_t i = 0; i < P.a.size(); ++i) {
        if (i) os << ',';
        os << P.a[i];
    }
    os << "]}";
    return os.str();
}

u32 protocol_bits(const LqrProtocol& P) { return P.players() * ceil_log2(P.p); }

PsmProtocol build_lqr(const LqrProtocol& P) {
    require_odd_prime(P.p, "build_lqr");
    if (P.a.size() < 2) throw std::invalid_argument("build_lqr: need n >= 1 players");
    const u32 p = P.p;
    const u32 n = P.players();

    struct Shared {
        LqrProtocol P;
        LegendreTable table;
        std::vector<u32> residues;
        std::vector<u64> pw;  // pw[i] = p^i
        Shared(const LqrProtocol& pr) : P(pr), table(pr.p), residues(residue_set(pr.p)) {
            pw.resize(pr.players() + 1, 1);
            for (size_t i = 1; i < pw.size(); ++i) pw[i] = pw[i - 1] * pr.p;
        }
        // components (r_0, r_1, ..., r_n) of randomness index r
        std::vector<u32> parts(u64 r) const {
            const u32 np = P.players();
            std::vector<u32> out(np + 1);
            out[0] = residues[size_t(r / pw[np - 1])];
            u64 rest = r % pw[np - 1];
            u32 acc = 0;
            for (u32 i = 1; i + 1 <= np; ++i) {
                if (i < np) {
                    out[i] = u32(rest % P.p);
                    rest /= P.p;
                    acc = addmod(acc, out[i], P.p);
                }
            }
            out[np] = submod(0, acc, P.p);
            return out;
        }
    };
    auto sh = std::make_shared<const Shared>(P);

    PsmProtocol out;
    out.modulus = p;
    out.domain_sizes.assign(n, 2);
    out.msg_arity.assign(n, 1);
    out.randomness_size = u64((p - 1) / 2) * sh->pw[n - 1];
    out.describe_r = [sh](u64 r) { return sh->parts(r); };
    out.encode = [sh, p](u32 player, u32 xi, u64 r, u32* dst) {
        auto rp = sh->parts(r);
        const u32 a = sh->P.a[player + 1];
        u32 lin = mulmod(a, xi, p);
        if (player == 0) lin = addmod(lin, sh->P.a[0], p);
        dst[0] = addmod(mulmod(rp[0], lin, p), rp[player + 1], p);
    };
    out.decode = [sh, p, n](const u32* m) {
        u32 s = 0;
        for (u32 i = 0; i < n; ++i) s = addmod(s, m[i], p);
        return sh->table(s);
    };
    return out;
}

namespace {

/// Legendre class of a_0 + sum of a_i over set bits of x.
int class_at(const LegendreTable& t, const std::vector<u32>& a, u32 x) {
    const u32 p = t.p();
    u32 s = a[0];
    u32 m = x;
    while (m) {
        u32 i = u32(std::countr_zero(m));
        s = addmod(s, a[i + 1], p);
        m &= m - 1;
    }
    return t(s);
}

}  // namespace

FastVerdict fast_verify_lqr(const LqrProtocol& P, const TruthTable& f, bool flip_sign) {
    if (P.players() != f.arity())
        throw std::invalid_argument("fast_verify_lqr: protocol arity differs from function arity");
    LegendreTable t(P.p);
    FastVerdict v;
    for (u32 x = 0; x < f.size(); ++x) {
        int got = class_at(t, P.a, x);
        int want = f.get(x) ? 1 : -1;
        if (flip_sign) want = -want;
        if (got != want) {
            v.ok = false;
            v.counterexample_x = x;
            v.got = got;
            v.want = want;
            return v;
        }
    }
    return v;
}

FastVerdict fast_verify_security_lqr(const LqrProtocol& P, const TruthTable& f) {
    if (P.players() != f.arity())
        throw std::invalid_argument("fast_verify_security_lqr: arity mismatch");
    LegendreTable t(P.p);
    FastVerdict v;
    // Discovered class per f-value. Class 0 is a legitimate shared value here:
    // two inputs whose sums both vanish produce identical message
    // distributions (every tuple sums to 0), so only a *differing* class
    // within a fiber breaks security.
    int fiber_class[2] = {0, 0};
    bool seen[2] = {false, false};
    for (u32 x = 0; x < f.size(); ++x) {
        int got = class_at(t, P.a, x);
        int fv = f.get(x) ? 1 : 0;
        if (!seen[fv]) {
            seen[fv] = true;
            fiber_class[fv] = got;
        } else if (fiber_class[fv] != got) {
            v.ok = false;
            v.counterexample_x = x;
            v.got = got;
            v.want = fiber_class[fv];
            return v;
        }
    }
    return v;
}

LqrProtocol conjugate(const LqrProtocol& P, u32 s) {
    LegendreTable t(P.p);
    if (t.at(i64(s)) != 1)
        throw std::invalid_argument("conjugate: scale must be a nonzero quadratic residue");
    LqrProtocol out;
    out.p = P.p;
    out.a.reserve(P.a.size());
    for (u32 c : P.a) out.a.push_back(mulmod(c, s % P.p, P.p));
    return out;
}

LqrProtocol canonical_form(const LqrProtocol& P) {
    LegendreTable t(P.p);
    for (u32 c : P.a) {
        if (c == 0) continue;
        u32 target = t(c) == 1 ? 1 : t.least_nonresidue();
        u32 s = mulmod(target, invmod(c, P.p), P.p);
        return conjugate(P, s);
    }
    return P;  // all-zero vector is its own representative
}

// ===== embeddings =====

i64 LinearEmbedding::eval(u32 x_mask) const {
    i64 s = 0;
    for (u32 i = 0; i < coeffs.size(); ++i)
        if ((x_mask >> i) & 1) s += coeffs[i];
    return s;
}

namespace {

LinearEmbedding finish_embedding(std::vector<i64> coeffs) {
    LinearEmbedding e;
    e.coeffs = std::move(coeffs);
    for (i64 w : e.coeffs) {
        if (w < 0)
            e.min_g += w;
        else
            e.max_g += w;
    }
    if (e.max_g - e.min_g + 1 > (i64(1) << 40))
        throw std::invalid_argument("embedding: length exceeds 2^40");
    return e;
}

}  // namespace

LinearEmbedding embed_symmetric(u32 n) { return finish_embedding(std::vector<i64>(n, 1)); }

LinearEmbedding embed_weighted(std::span<const i64> w) {
    if (w.empty()) throw std::invalid_argument("embed_weighted: empty weight vector");
    return finish_embedding(std::vector<i64>(w.begin(), w.end()));
}

LinearEmbedding embed_any(u32 n) {
    if (n > 30) throw std::invalid_argument("embed_any: arity too large");
    std::vector<i64> c(n);
    for (u32 i = 0; i < n; ++i) c[i] = i64(1) << i;
    return finish_embedding(std::move(c));
}

LinearEmbedding embed_composition(u32 m, u32 k) {
    if (m < 1 || k < 1) throw std::invalid_argument("embed_composition: m, k must be positive");
    std::vector<i64> c;
    c.reserve(size_t(m) * k);
    i64 w = 1;
    for (u32 j = 0; j < m; ++j) {
        for (u32 i = 0; i < k; ++i) c.push_back(w);
        if (j + 1 < m) {
            if (w > (i64(1) << 40) / i64(k + 1))
                throw std::invalid_argument("embed_composition: length exceeds 2^40");
            w *= i64(k) + 1;
        }
    }
    return finish_embedding(std::move(c));
}

// ===== synthesis =====

namespace {

SynthesisResult make_result(LqrProtocol P, const TruthTable& f, const char* who) {
    SynthesisResult res;
    res.bits = protocol_bits(P);
    res.protocol = std::move(P);
    FastVerdict v = fast_verify_lqr(res.protocol, f);
    if (!v.ok)
        throw std::logic_error(std::string(who) + ": constructed protocol fails verification at x=" +
                               std::to_string(v.counterexample_x));
    return res;
}

}  // namespace

SynthesisResult synthesize(const TruthTable& f, const LinearEmbedding& g, const SynthOptions& opt) {
    if (g.arity() != f.arity())
        throw std::invalid_argument("synthesize: embedding arity differs from function arity");
    const u32 n = f.arity();
    const u32 L = g.length();
    if (L > (u32(1) << 24)) throw std::invalid_argument("synthesize: embedding too long");

    // Class pattern along the value window; 0 marks unreachable slots.
    std::vector<signed char> pattern(L, 0);
    for (u32 x = 0; x < (u32(1) << n); ++x) {
        u64 slot = u64(g.eval(x) - g.min_g);
        signed char want = f.get(x) ? 1 : -1;
        if (pattern[slot] == 0)
            pattern[slot] = want;
        else if (pattern[slot] != want)
            throw std::invalid_argument("synthesize: g does not embed f (value collision at x=" +
                                        std::to_string(x) + ")");
    }

    PeraltaRecord pr = peralta_prime(L, opt.peralta);
    LegendreTable t(pr.p);
    auto b = offset_for_pattern(t, pattern);
    if (!b)
        throw std::logic_error("synthesize: pattern not found in a qualifying residue string");

    LqrProtocol P;
    P.p = pr.p;
    P.a.resize(n + 1);
    P.a[0] = reduce(i64(*b) - g.min_g, pr.p);
    for (u32 i = 0; i < n; ++i) P.a[i + 1] = reduce(g.coeffs[i], pr.p);
    return make_result(std::move(P), f, "synthesize");
}

SynthesisResult universal_protocol(const TruthTable& f, const SynthOptions& opt) {
    const u32 n = f.arity();
    if (n < 1 || n > 4)
        throw std::invalid_argument("universal_protocol: arity must be in [1, 4]");
    const u32 half = u32(1) << (n - 1);

    PeraltaRecord pr = peralta_prime(half, opt.peralta);
    LegendreTable t(pr.p);

    // Half-table class patterns, read along v(x) = sum 2^(n-1-i) x_i.
    auto pattern_for = [&](u32 c) {
        std::vector<signed char> pat(half);
        for (u32 j = 0; j < half; ++j) {
            u32 idx = c << (n - 1);
            for (u32 i = 1; i <= n - 1; ++i)
                if ((j >> (n - 1 - i)) & 1) idx |= u32(1) << (i - 1);
            pat[j] = f.get(idx) ? 1 : -1;
        }
        return pat;
    };
    auto p0 = pattern_for(0), p1 = pattern_for(1);
    auto b0 = offset_for_pattern(t, p0);
    auto b1 = offset_for_pattern(t, p1);
    if (!b0 || !b1)
        throw std::logic_error("universal_protocol: half-table pattern missing from residue string");

    LqrProtocol P;
    P.p = pr.p;
    P.a.resize(n + 1);
    P.a[0] = *b0;
    for (u32 i = 1; i <= n - 1; ++i) P.a[i] = u32(1) << (n - 1 - i);
    P.a[n] = reduce(i64(*b1) - i64(*b0), pr.p);
    return make_result(std::move(P), f, "universal_protocol");
}

// ===== minimal-modulus search =====

namespace {

struct WantTable {
    std::vector<int> want;  // expected class per input index
    explicit WantTable(const TruthTable& f) : want(f.size()) {
        for (u32 x = 0; x < f.size(); ++x) want[x] = f.get(x) ? 1 : -1;
    }
};

/// Scan one (a_0, a_1) band in lexicographic order; return first passing
/// vector or empty. Budget counts Legendre lookups.
std::vector<u32> scan_band(const LegendreTable& t, const WantTable& w, u32 n, u32 a0, u32 a1,
                           u64& evals, u64 budget) {
    const u32 p = t.p();
    const u32 size = u32(w.want.size());
    std::vector<u32> a(n, 0);  // a[0] is a_1
    if (n >= 1) a[0] = a1;
    const u64 band = n >= 1 ? ipow(p, n - 1) : 1;
    for (u64 it = 0; it < band; ++it) {
        bool pass = true;
        for (u32 x = 1; x < size; ++x) {  // x = 0 pre-checked by caller
            u32 s = a0;
            u32 m = x;
            while (m) {
                u32 i = u32(std::countr_zero(m));
                s = addmod(s, a[i], p);
                m &= m - 1;
            }
            ++evals;
            if (t(s) != w.want[x]) {
                pass = false;
                break;
            }
        }
        if (evals > budget) throw BudgetError("find_minimal_protocol: evaluation budget exhausted");
        if (pass) {
            std::vector<u32> full;
            full.push_back(a0);
            full.insert(full.end(), a.begin(), a.end());
            return full;
        }
        // lexicographic odometer over a[1..n-1] (a_2..a_n), last digit fastest
        u32 d = n;
        while (d-- > 1) {
            if (++a[d] < p) break;
            a[d] = 0;
        }
    }
    return {};
}

}  // namespace

LqrProtocol find_minimal_protocol(const TruthTable& f, const MinimalSearchOptions& opt) {
    const u32 n = f.arity();
    WantTable w(f);
    u64 evals = 0;
    for (u32 p = 3; p <= opt.max_p; p = next_prime(p)) {
        LegendreTable t(p);
        const u32 q = t.least_nonresidue();
        for (u32 a0 : {u32(1), q}) {
            if (t(a0) != w.want[0]) continue;  // the all-zero input sees a_0 alone
            if (n == 0) continue;
            if (opt.workers <= 1) {
                for (u32 a1 = 0; a1 < p; ++a1) {
                    auto hit = scan_band(t, w, n, a0, a1, evals, opt.budget);
                    if (!hit.empty()) return LqrProtocol{p, std::move(hit)};
                }
            } else {
                std::atomic<u32> next{0};
                std::atomic<u32> best{p};
                std::map<u32, std::vector<u32>> hits;
                std::mutex mu;
                std::atomic<u64> shared_evals{0};
                std::atomic<bool> blown{false};
                auto body = [&] {
                    u64 local = 0;
                    for (;;) {
                        u32 a1 = next.fetch_add(1);
                        if (a1 >= p || a1 > best.load() || blown.load()) break;
                        try {
                            u64 e = 0;
                            auto hit = scan_band(t, w, n, a0, a1, e, opt.budget);
                            local += e;
                            if (!hit.empty()) {
                                std::lock_guard<std::mutex> g(mu);
                                hits[a1] = hit;
                                u32 cur = best.load();
                                while (a1 < cur && !best.compare_exchange_weak(cur, a1)) {
                                }
                            }
                        } catch (const BudgetError&) {
                            blown.store(true);
                            break;
                        }
                        if (shared_evals.fetch_add(local) + local > opt.budget) {
                            blown.store(true);
                            break;
                        }
                        local = 0;
                    }
                    shared_evals.fetch_add(local);
                };
                std::vector<std::thread> pool;
                for (u32 i = 0; i < opt.workers; ++i) pool.emplace_back(body);
                for (auto& th : pool) th.join();
                evals += shared_evals.load();
                if (blown.load() && hits.empty())
                    throw BudgetError("find_minimal_protocol: evaluation budget exhausted");
                if (!hits.empty()) return LqrProtocol{p, hits.begin()->second};
            }
        }
    }
    throw std::runtime_error("find_minimal_protocol: no protocol with modulus <= " +
                             std::to_string(opt.max_p));
}

// ===== coverage prime =====

LqrPrimeRecord lqr_prime(u32 n, u32 max_p, u32 workers) {
    if (n < 1 || n > 4) throw std::invalid_argument("lqr_prime: n must be in [1, 4]");
    const u32 size = u32(1) << n;
    const u64 tables = u64(1) << size;
    LqrPrimeRecord rec;
    rec.n = n;

    for (u32 p = 3; p <= max_p; p = next_prime(p)) {
        LegendreTable t(p);
        const u32 q = t.least_nonresidue();
        std::vector<unsigned char> covered(tables, 0);
        std::atomic<u64> count{0};
        std::atomic<u64> scanned{0};

        auto scan_range = [&](u32 a0, u32 a1_lo, u32 a1_hi, std::vector<unsigned char>& cov,
                              u64& cnt, u64& vecs) {
            std::vector<u32> a(n, 0);
            std::vector<u32> sums(size);
            const u64 band = ipow(p, n - 1);
            for (u32 a1 = a1_lo; a1 < a1_hi; ++a1) {
                a[0] = a1;
                std::fill(a.begin() + 1, a.end(), 0);
                for (u64 it = 0; it < band; ++it) {
                    ++vecs;
                    // subset sums by splitting off the lowest set bit
                    sums[0] = a0;
                    u64 tt = 0;
                    bool dead = false;
                    for (u32 x = 0; x < size; ++x) {
                        if (x) {
                            u32 i = u32(std::countr_zero(x));
                            sums[x] = addmod(sums[x & (x - 1)], a[i], p);
                        }
                        int c = t(sums[x]);
                        if (c == 0) {
                            dead = true;
                            break;
                        }
                        if (c == 1) tt |= u64(1) << x;
                    }
                    if (!dead && !cov[tt]) {
                        cov[tt] = 1;
                        ++cnt;
                    }
                    u32 d = n;
                    while (d-- > 1) {
                        if (++a[d] < p) break;
                        a[d] = 0;
                    }
                }
            }
        };

        if (workers <= 1) {
            u64 cnt = 0, vecs = 0;
            for (u32 a0 : {u32(1), q}) scan_range(a0, 0, p, covered, cnt, vecs);
            count = cnt;
            scanned = vecs;
        } else {
            std::vector<std::thread> pool;
            std::mutex mu;
            std::atomic<u32> task{0};
            const u32 ntasks = 2 * p;
            auto body = [&] {
                std::vector<unsigned char> cov(tables, 0);
                u64 cnt = 0, vecs = 0;
                for (;;) {
                    u32 k = task.fetch_add(1);
                    if (k >= ntasks) break;
                    u32 a0 = k < p ? 1 : q;
                    u32 a1 = k % p;
                    scan_range(a0, a1, a1 + 1, cov, cnt, vecs);
                }
                std::lock_guard<std::mutex> g(mu);
                for (u64 i = 0; i < tables; ++i) {
                    if (cov[i] && !covered[i]) {
                        covered[i] = 1;
                        count.fetch_add(1);
                    }
                }
                scanned.fetch_add(vecs);
            };
            for (u32 i = 0; i < workers; ++i) pool.emplace_back(body);
            for (auto& th : pool) th.join();
        }
        rec.vectors_scanned += scanned.load();
        if (count.load() == tables) {
            rec.p = p;
            return rec;
        }
    }
    throw std::runtime_error("lqr_prime: no covering prime <= " + std::to_string(max_p));
}

LnBounds ln_bounds(u32 n, const PeraltaOptions& opt) {
    if (n < 1 || n > 6) throw std::invalid_argument("ln_bounds: n must be in [1, 6]");
    LnBounds b;
    const u32 ebits = (u32(1) << n) - 2;  // target is 2^ebits
    unsigned __int128 target = (unsigned __int128)(1) << ebits;
    u64 m = 1;
    for (;;) {
        unsigned __int128 v = 1;
        bool ge = false;
        for (u32 i = 0; i < n; ++i) {
            v *= m;
            if (v >= target) {
                ge = true;
                break;
            }
        }
        if (ge || v >= target) break;
        ++m;
    }
    b.lower = m;
    const u32 half = u32(1) << (n - 1);
    if (half <= 12) {
        b.upper = peralta_prime(half, opt).p;
    }
    return b;
}

}  // namespace qrpsm
