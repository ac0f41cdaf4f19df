#include "qrpsm/numtheory.hpp"

namespace qrpsm {

u32 powmod(u32 a, u64 e, u32 p) {
    u64 base = a % p;
    u64 acc = 1 % p;
    while (e) {
        if (e & 1) acc = acc * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return u32(acc);
}

u32 invmod(u32 a, u32 p) {
    if (a % p == 0) throw std::invalid_argument("invmod: zero has no inverse");
    return powmod(a % p, p - 2, p);  // Fermat; p prime
}

namespace {

u64 mulmod64(u64 a, u64 b, u64 m) { return u64((unsigned __int128)(a) * b % m); }

u64 powmod64(u64 a, u64 e, u64 m) {
    u64 acc = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) acc = mulmod64(acc, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return acc;
}

}  // namespace

bool is_prime(u64 n) noexcept {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These twelve bases decide primality for every n < 3.3 * 10^24.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

u32 next_prime(u32 n) {
    u64 c = u64(n) + 1;
    while (!is_prime(c)) ++c;
    if (c > 0xFFFFFFFFull) throw std::overflow_error("next_prime: exceeds 32 bits");
    return u32(c);
}

void require_odd_prime(u32 p, const char* where) {
    if (p < 3 || (p & 1) == 0 || !is_prime(p))
        throw std::invalid_argument(std::string(where) + ": modulus " + std::to_string(p) +
                                    " is not an odd prime");
}

int legendre(i64 a, u32 p) {
    require_odd_prime(p, "legendre");
    u32 r = reduce(a, p);
    if (r == 0) return 0;
    u32 e = powmod(r, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

LegendreTable::LegendreTable(u32 p) : p_(p), least_nonresidue_(0), table_(p, -1) {
    require_odd_prime(p, "LegendreTable");
    table_[0] = 0;
    for (u64 x = 1; x < p; ++x) table_[u32(x * x % p)] = 1;
    for (u32 a = 2; a < p; ++a) {
        if (table_[a] == -1) {
            least_nonresidue_ = a;
            break;
        }
    }
}

std::string qr_sequence(u32 p) {
    if (p == 2) return "1";
    LegendreTable t(p);
    std::string s;
    s.reserve(p - 1);
    for (u32 i = 1; i < p; ++i) s.push_back(t(i) == 1 ? '1' : '0');
    return s;
}

std::vector<u32> residue_set(u32 p) {
    require_odd_prime(p, "residue_set");
    LegendreTable t(p);
    std::vector<u32> r;
    r.reserve((p - 1) / 2);
    for (u32 a = 1; a < p; ++a)
        if (t(a) == 1) r.push_back(a);
    return r;
}

}  // namespace qrpsm
