#include "qrpsm/paley.hpp"

#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qrpsm/psm.hpp"  // BudgetError

namespace qrpsm {

namespace {

/// True when some vertex z outside the window realizes the wanted classes:
/// legendre(z - (s+k)) = +1 on in-set bits of mask, -1 elsewhere. A vertex
/// inside the window hits class 0 at its own position and never qualifies,
/// so z ranges over all of Z_p.
bool window_partition_ok(const LegendreTable& t, u32 p, u32 n, u32 s, u32 mask) {
    for (u32 z = 0; z < p; ++z) {
        bool ok = true;
        u32 i = s;
        for (u32 k = 0; k < n; ++k) {
            int want = (mask >> k) & 1 ? 1 : -1;
            if (t(submod(z, i, p)) != want) {
                ok = false;
                break;
            }
            i = i + 1 == p ? 0 : i + 1;
        }
        if (ok) return true;
    }
    return false;
}

void require_star_args(u32 p, u32 n, const char* where) {
    require_odd_prime(p, where);
    if (n == 0 || n >= 31 || p <= n)
        throw std::invalid_argument(std::string(where) + ": need 0 < n < p");
}

}  // namespace

PaleyStructure::PaleyStructure(u32 p)
    : p_((require_odd_prime(p, "paley"), p)), graph_(p % 4 == 1), table_(p) {}

std::string PaleyStructure::export_edges() const {
    std::ostringstream os;
    if (graph_) {
        for (u32 x = 0; x < p_; ++x)
            for (u32 y = x + 1; y < p_; ++y)
                if (adjacent(x, y)) os << x << ' ' << y << '\n';
    } else {
        for (u32 x = 0; x < p_; ++x)
            for (u32 y = 0; y < p_; ++y)
                if (x != y && arc(x, y)) os << x << '>' << y << '\n';
    }
    return os.str();
}

StarPropertyReport has_star_property_full(u32 p, u32 n, u32 workers) {
    require_star_args(p, n, "star property");
    LegendreTable t(p);
    StarPropertyReport rep;
    rep.p = p;
    rep.n = n;
    const u32 masks = u32(1) << n;

    auto scan_window = [&](u32 s) -> u32 {
        for (u32 mask = 0; mask < masks; ++mask)
            if (!window_partition_ok(t, p, n, s, mask)) return mask;
        return masks;  // all partitions extend
    };

    if (workers <= 1 || p < 64) {
        for (u32 s = 0; s < p; ++s) {
            u32 bad = scan_window(s);
            if (bad < masks) {
                rep.holds = false;
                rep.fail_start = s;
                rep.fail_mask = bad;
                return rep;
            }
        }
        return rep;
    }

    std::atomic<u32> next{0};
    std::atomic<u32> fail_s{p};
    std::atomic<u32> fail_m{0};
    auto work = [&] {
        for (;;) {
            u32 s = next.fetch_add(1);
            if (s >= p || fail_s.load() != p) return;
            u32 bad = scan_window(s);
            if (bad < masks) {
                // remember the smallest failing window for determinism
                u32 cur = fail_s.load();
                while (s < cur && !fail_s.compare_exchange_weak(cur, s)) {
                }
                if (fail_s.load() == s) fail_m.store(bad);
            }
        }
    };
    std::vector<std::thread> pool;
    for (u32 w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (fail_s.load() != p) {
        // rescan every window up to the recorded one so the witness is the
        // lexicographically least regardless of scheduling
        for (u32 s = 0; s <= fail_s.load(); ++s) {
            u32 bad = scan_window(s);
            if (bad < masks) {
                rep.holds = false;
                rep.fail_start = s;
                rep.fail_mask = bad;
                return rep;
            }
        }
    }
    return rep;
}

bool has_star_property_reduced(u32 p, u32 n) {
    require_star_args(p, n, "star property");
    LegendreTable t(p);
    const u32 masks = u32(1) << n;
    for (u32 mask = 0; mask < masks; ++mask)
        if (!window_partition_ok(t, p, n, 1, mask)) return false;
    return true;
}

MValues m_values(u32 n, u32 max_p) {
    if (n == 0 || n > 16) throw std::invalid_argument("m_values: need 1 <= n <= 16");
    MValues mv;
    for (u32 p = 3; p < max_p; p += 2) {
        if (!is_prime(p) || p <= n) continue;
        if (p % 4 == 1 && mv.m_graph == 0 && has_star_property_reduced(p, n)) mv.m_graph = p;
        if (p % 4 == 3 && mv.m_tournament == 0 && has_star_property_reduced(p, n))
            mv.m_tournament = p;
        if (mv.m_graph && mv.m_tournament) {
            mv.m = std::min(mv.m_graph, mv.m_tournament);
            return mv;
        }
    }
    throw BudgetError("m_values: no qualifying prime below the cap");
}

bool thm_ec_spotcheck(u32 n, u32 sample) {
    if (n == 0 || n > 4) throw std::invalid_argument("thm_ec_spotcheck: need 1 <= n <= 4");
    u64 bound = u64(n) * n * (u64(1) << (2 * n - 2));
    u32 found = 0;
    for (u64 p = bound + 1;; ++p) {
        if (p == 2 || !is_prime(p)) continue;  // the property is defined on odd primes
        if (!has_star_property_reduced(u32(p), n)) return false;
        if (++found == sample) return true;
    }
}

}  // namespace qrpsm
