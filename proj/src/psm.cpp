#include "qrpsm/psm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qrpsm {

namespace {

using u128 = unsigned __int128;

std::string join(const std::vector<u32>& v) {
    std::ostringstream os;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        os << v[i];
    }
    return os.str();
}

/// Strided recomputation of an emitted tuple through the plain encoder; guards
/// the fast enumeration hooks against drifting from the protocol definition.
constexpr u64 kShadowStride = 4'000'037;

}  // namespace

u32 PsmProtocol::total_msg_len() const {
    u32 s = 0;
    for (u32 a : msg_arity) s += a;
    return s;
}

Target Target::from_truth_table(const TruthTable& f, bool flip_sign) {
    Target t;
    t.domain_sizes.assign(f.arity(), 2);
    t.expected.resize(f.size());
    for (u32 x = 0; x < f.size(); ++x) {
        int v = f.get(x) ? 1 : -1;
        t.expected[x] = static_cast<signed char>(flip_sign ? -v : v);
    }
    return t;
}

Target Target::comparison() {
    Target t;
    t.domain_sizes = {3, 3};
    t.expected.resize(9);
    for (u32 x2 = 0; x2 < 3; ++x2)
        for (u32 x1 = 0; x1 < 3; ++x1)
            t.expected[x1 + 3 * x2] = static_cast<signed char>(x1 > x2 ? 1 : (x1 < x2 ? -1 : 0));
    return t;
}

std::vector<u32> unrank_input(u64 idx, const std::vector<u32>& domain_sizes) {
    std::vector<u32> x(domain_sizes.size());
    for (size_t i = 0; i < domain_sizes.size(); ++i) {
        x[i] = u32(idx % domain_sizes[i]);
        idx /= domain_sizes[i];
    }
    return x;
}

u64 rank_input(const std::vector<u32>& x, const std::vector<u32>& domain_sizes) {
    u64 idx = 0;
    for (size_t i = domain_sizes.size(); i-- > 0;) idx = idx * domain_sizes[i] + x[i];
    return idx;
}

std::string Transcript::to_line() const {
    std::ostringstream os;
    os << "x=[" << join(x) << "] r=[" << join(r) << "] m=[" << join(m) << "] out=" << out;
    return os.str();
}

Transcript execute(const PsmProtocol& P, const std::vector<u32>& x, u64 r_index) {
    if (x.size() != P.domain_sizes.size())
        throw std::invalid_argument("execute: input arity mismatch");
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] >= P.domain_sizes[i]) throw std::invalid_argument("execute: input out of domain");
    if (r_index >= P.randomness_size) throw std::invalid_argument("execute: randomness index out of range");
    Transcript tr;
    tr.x = x;
    tr.r = P.describe_r(r_index);
    tr.m.resize(P.total_msg_len());
    u32* out = tr.m.data();
    for (u32 i = 0; i < P.players(); ++i) {
        P.encode(i, x[i], r_index, out);
        out += P.msg_arity[i];
    }
    tr.out = P.decode(tr.m.data());
    return tr;
}

namespace {

void encode_all(const PsmProtocol& P, const std::vector<u32>& x, u64 r, u32* buf) {
    u32* out = buf;
    for (u32 i = 0; i < P.players(); ++i) {
        P.encode(i, x[i], r, out);
        out += P.msg_arity[i];
    }
}

void check_budget(const PsmProtocol& P, const Target& t, u64 budget, const char* what) {
    u128 total = u128(t.num_inputs()) * P.randomness_size;
    if (total > budget)
        throw BudgetError(std::string(what) + ": would enumerate " +
                          std::to_string(u64(total / 1000000)) +
                          "M pairs, over budget " + std::to_string(budget) +
                          " (raise the budget to proceed)");
}

void validate_shape(const PsmProtocol& P, const Target& t) {
    if (P.domain_sizes != t.domain_sizes)
        throw std::invalid_argument("verify: protocol and target domains differ");
    if (P.randomness_size == 0) throw std::invalid_argument("verify: empty randomness space");
}

}  // namespace

CorrectnessResult verify_correctness(const PsmProtocol& P, const Target& t,
                                     const VerifyOptions& opt) {
    validate_shape(P, t);
    check_budget(P, t, opt.budget, "verify_correctness");
    CorrectnessResult res;
    const u64 inputs = t.num_inputs();
    const u32 mlen = P.total_msg_len();
    std::vector<u32> buf(mlen), shadow(mlen);
    u64 shadow_tick = kShadowStride;
    for (u64 xi = 0; xi < inputs && res.ok; ++xi) {
        std::vector<u32> x = unrank_input(xi, t.domain_sizes);
        const int want = t.expected[xi];
        auto judge = [&](u64 r, const u32* msgs) {
            ++res.pairs_checked;
            int got = P.decode(msgs);
            if (got != want && res.ok) {
                res.ok = false;
                Transcript tr = execute(P, x, r);
                res.counterexample = tr;
            }
        };
        if (P.hooks && P.hooks->stream_all) {
            u64 streamed = 0;
            P.hooks->stream_all(x, [&](u64 r, const u32* msgs) {
                ++streamed;
                if (--shadow_tick == 0) {
                    shadow_tick = kShadowStride;
                    encode_all(P, x, r, shadow.data());
                    if (!std::equal(shadow.begin(), shadow.end(), msgs))
                        throw std::logic_error("stream_all: tuple disagrees with plain encoder");
                }
                judge(r, msgs);
            });
            if (streamed != P.randomness_size)
                throw std::logic_error("stream_all: enumerated " + std::to_string(streamed) +
                                       " tuples, expected " + std::to_string(P.randomness_size));
        } else {
            for (u64 r = 0; r < P.randomness_size && res.ok; ++r) {
                encode_all(P, x, r, buf.data());
                judge(r, buf.data());
            }
        }
    }
    return res;
}

namespace {

/// Mixed-radix packing of a full message vector into a 128-bit key.
struct PlainPacker {
    u32 base;
    u32 len;
    PlainPacker(u32 modulus, u32 mlen) : base(modulus), len(mlen) {
        double bits = mlen * std::log2(double(modulus));
        if (bits > 126)
            throw BudgetError("verify_security: message space too large for direct packing; "
                              "protocol must provide enumeration hooks");
    }
    u128 operator()(const u32* msgs) const {
        u128 k = 0;
        for (u32 i = 0; i < len; ++i) k = k * base + msgs[i];
        return k;
    }
};

}  // namespace

SecurityResult verify_security(const PsmProtocol& P, const Target& t, const VerifyOptions& opt) {
    validate_shape(P, t);
    check_budget(P, t, opt.budget, "verify_security");
    SecurityResult res;
    const u64 inputs = t.num_inputs();

    // Group inputs by expected output; the first input of each class is the
    // representative every other member is compared against.
    std::map<int, std::vector<u64>> classes;
    for (u64 xi = 0; xi < inputs; ++xi) classes[t.expected[xi]].push_back(xi);

    const u32 mlen = P.total_msg_len();
    std::vector<u32> shadow(mlen);

    if (P.hooks && P.hooks->stream_slice) {
        const ProtocolHooks& H = *P.hooks;
        u64 shadow_tick = kShadowStride;
        auto collect = [&](const std::vector<u32>& x, u32 slice, std::vector<u64>& out) {
            out.clear();
            u64 last_r = 0;
            bool first = true;
            H.stream_slice(x, slice, [&](u64 r, u64 packed) {
                if (!first && r <= last_r)
                    throw std::logic_error("stream_slice: r indices not strictly increasing");
                first = false;
                last_r = r;
                if (--shadow_tick == 0) {
                    shadow_tick = kShadowStride;
                    encode_all(P, x, r, shadow.data());
                    if (H.pack(shadow.data()) != packed)
                        throw std::logic_error("stream_slice: packed tuple disagrees with plain encoder");
                    if (H.slice_of(shadow.data()) != slice)
                        throw std::logic_error("stream_slice: tuple emitted in wrong slice");
                }
                out.push_back(packed);
            });
            res.tuples_checked += out.size();
            std::sort(out.begin(), out.end());
        };
        std::vector<u64> ref, cur;
        for (auto& [val, members] : classes) {
            (void)val;
            if (members.size() < 2) continue;
            std::vector<u64> counts(members.size(), 0);
            std::vector<u32> x0 = unrank_input(members[0], t.domain_sizes);
            for (u32 k = 0; k < H.slice_count && res.ok; ++k) {
                collect(x0, k, ref);
                counts[0] += ref.size();
                for (size_t j = 1; j < members.size() && res.ok; ++j) {
                    std::vector<u32> xj = unrank_input(members[j], t.domain_sizes);
                    collect(xj, k, cur);
                    counts[j] += cur.size();
                    if (cur != ref) {
                        res.ok = false;
                        res.counterexample = {x0, xj};
                    }
                }
            }
            if (res.ok) {
                for (u64 c : counts)
                    if (c != P.randomness_size)
                        throw std::logic_error("stream_slice: slices enumerate " + std::to_string(c) +
                                               " tuples, expected " + std::to_string(P.randomness_size));
            }
        }
        return res;
    }

    // Plain path: pack whole tuples into 128-bit keys and sort.
    PlainPacker pack(P.modulus, mlen);
    std::vector<u32> buf(mlen);
    auto collect_plain = [&](u64 input_idx, std::vector<u128>& out) {
        out.clear();
        out.reserve(P.randomness_size);
        std::vector<u32> x = unrank_input(input_idx, t.domain_sizes);
        for (u64 r = 0; r < P.randomness_size; ++r) {
            encode_all(P, x, r, buf.data());
            out.push_back(pack(buf.data()));
        }
        res.tuples_checked += P.randomness_size;
        std::sort(out.begin(), out.end());
    };
    std::vector<u128> ref, cur;
    for (auto& [val, members] : classes) {
        (void)val;
        if (members.size() < 2) continue;
        collect_plain(members[0], ref);
        for (size_t j = 1; j < members.size() && res.ok; ++j) {
            collect_plain(members[j], cur);
            if (cur != ref) {
                res.ok = false;
                res.counterexample = {unrank_input(members[0], t.domain_sizes),
                                      unrank_input(members[j], t.domain_sizes)};
            }
        }
    }
    return res;
}

PsmProtocol fkn_comparison() {
    PsmProtocol P;
    P.modulus = 7;
    P.domain_sizes = {3, 3};
    P.msg_arity = {1, 1};
    P.randomness_size = 21;  // Z_7 x {1, 2, 4}
    static const u32 kResidues[3] = {1, 2, 4};
    P.describe_r = [](u64 r) {
        return std::vector<u32>{u32(r / 3), kResidues[r % 3]};
    };
    P.encode = [](u32 player, u32 xi, u64 r, u32* out) {
        u32 r1 = u32(r / 3), r2 = kResidues[r % 3];
        u32 v = addmod(r1, mulmod(r2, xi, 7), 7);
        out[0] = player == 0 ? v : submod(0, v, 7);
    };
    P.decode = [](const u32* m) {
        static const LegendreTable t(7);
        return t(addmod(m[0], m[1], 7));
    };
    return P;
}

}  // namespace qrpsm
