#include "qrpsm/peralta.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace qrpsm {

bool is_n_peralta(u32 p, u32 n) {
    if (n < 1 || n > 24) throw std::invalid_argument("is_n_peralta: n must be in [1, 24]");
    if (!is_prime(p)) throw std::invalid_argument("is_n_peralta: p must be prime");
    // A (p-1)-bit string holds at most p-n distinct n-bit windows.
    if (u64(p) < (u64(1) << n) + n) return false;
    LegendreTable t(p);
    const u32 mask = (u32(1) << n) - 1;
    std::vector<unsigned char> seen(u64(1) << n, 0);
    u32 remaining = u32(1) << n;
    u32 win = 0;
    for (u32 i = 1; i < p; ++i) {
        win = ((win << 1) | u32(t(i) == 1)) & mask;
        if (i >= n && !seen[win]) {
            seen[win] = 1;
            if (--remaining == 0) return true;
        }
    }
    return false;
}

namespace {

using CacheMap = std::map<u32, u32>;

CacheMap load_cache(const std::string& path) {
    CacheMap m;
    std::ifstream in(path);
    u32 n, p;
    while (in >> n >> p) m[n] = p;
    return m;
}

void store_cache(const std::string& path, const CacheMap& m) {
    std::ofstream out(path, std::ios::trunc);
    for (auto& [n, p] : m) out << n << ' ' << p << '\n';
}

bool bound_holds(u32 n, u32 p) {
    // p < n^2 * 2^(2n-2); n <= 24 keeps the right side below 2^57.
    return u64(p) < u64(n) * n * (u64(1) << (2 * n - 2));
}

u32 scan_sequential(u32 n, u32 cap) {
    for (u32 p = 2; p < cap; p = next_prime(p))
        if (is_n_peralta(p, n)) return p;
    return 0;
}

u32 scan_parallel(u32 n, u32 cap, u32 workers) {
    constexpr u32 kBlock = 1u << 15;
    const u32 nblocks = (cap + kBlock - 1) / kBlock;
    std::atomic<u32> next{0};
    std::atomic<u32> best_block{nblocks};
    std::mutex mu;
    std::map<u32, u32> hits;  // block index -> least qualifying prime in it
    auto body = [&] {
        for (;;) {
            u32 b = next.fetch_add(1);
            if (b >= nblocks || b > best_block.load()) break;
            u32 lo = b * kBlock, hi = std::min(cap, lo + kBlock);
            u32 p = lo < 2 ? 2 : next_prime(lo - 1);
            for (; p < hi; p = next_prime(p)) {
                if (is_n_peralta(p, n)) {
                    std::lock_guard<std::mutex> g(mu);
                    hits[b] = p;
                    u32 cur = best_block.load();
                    while (b < cur && !best_block.compare_exchange_weak(cur, b)) {
                    }
                    break;
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (u32 i = 0; i < workers; ++i) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    // Blocks are claimed in ascending order and scanned completely, so the
    // hit in the smallest block index is the global minimum.
    return hits.empty() ? 0 : hits.begin()->second;
}

}  // namespace

PeraltaRecord peralta_prime(u32 n, const PeraltaOptions& opt) {
    if (n < 1 || n > 12) throw std::invalid_argument("peralta_prime: n must be in [1, 12]");
    CacheMap cache;
    if (!opt.cache_path.empty()) {
        cache = load_cache(opt.cache_path);
        auto it = cache.find(n);
        if (it != cache.end()) {
            // Membership is re-verified; minimality is trusted.
            if (is_prime(it->second) && is_n_peralta(it->second, n))
                return {n, it->second, bound_holds(n, it->second)};
            cache.erase(it);
        }
    }
    u32 p = (opt.workers > 1) ? scan_parallel(n, opt.cap, opt.workers)
                              : scan_sequential(n, opt.cap);
    if (p == 0)
        throw std::runtime_error("peralta_prime: no qualifying prime below cap " +
                                 std::to_string(opt.cap));
    if (!opt.cache_path.empty()) {
        cache[n] = p;
        store_cache(opt.cache_path, cache);
    }
    return {n, p, bound_holds(n, p)};
}

bool peralta_sufficient(u32 p, u32 n) {
    if (n < 1 || n > 24) throw std::invalid_argument("peralta_sufficient: n must be in [1, 24]");
    if (!is_prime(p)) throw std::invalid_argument("peralta_sufficient: p must be prime");
    i64 t = i64(p) - i64(3) * n * (i64(1) << n);
    if (t <= 0) return false;
    unsigned __int128 lhs = (unsigned __int128)(u64(t)) * u64(t);
    unsigned __int128 rhs = (unsigned __int128)(u64(n) * n) * ((u64(1) << (2 * n))) * p;
    return lhs > rhs;
}

bool acg_sufficient(u32 p, u32 n) {
    if (n < 1 || n > 24) throw std::invalid_argument("acg_sufficient: n must be in [1, 24]");
    require_odd_prime(p, "acg_sufficient");
    i64 a = (i64(n) - 3) * (i64(1) << (n - 1)) + 2;  // >= 0 for all n >= 1
    i64 b = (i64(n) + 1) * (i64(1) << (n - 1)) - 1;
    i64 t = i64(p) - b;
    if (t <= 0) return false;
    unsigned __int128 lhs = (unsigned __int128)(u64(t)) * u64(t);
    unsigned __int128 rhs = (unsigned __int128)(u64(a) * u64(a)) * p;
    return lhs > rhs;
}

std::optional<u32> offset_for_pattern(const LegendreTable& t, std::span<const signed char> pattern) {
    const u32 p = t.p();
    const u32 len = u32(pattern.size());
    if (len == 0 || len > p - 1) return std::nullopt;
    for (u32 b = 1; b + len - 1 <= p - 1; ++b) {
        bool ok = true;
        for (u32 j = 0; j < len; ++j) {
            if (pattern[j] != 0 && t(b + j) != pattern[j]) {
                ok = false;
                break;
            }
        }
        if (ok) return b;
    }
    return std::nullopt;
}

}  // namespace qrpsm
