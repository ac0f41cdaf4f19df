#include "qrpsm/tables.hpp"

#include <sstream>

#include "qrpsm/lqr.hpp"
#include "qrpsm/truth_table.hpp"

namespace qrpsm {

namespace {

TruthTable family(const char* name, u32 n) {
    std::string s = name;
    if (s == "AND") return TruthTable::and_fn(n);
    if (s == "XOR") return TruthTable::xor_fn(n);
    if (s == "EQ") return TruthTable::eq_fn(n);
    return TruthTable::maj_fn(n);
}

std::string vector_str(const LqrProtocol& P) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < P.a.size(); ++i) os << (i ? "," : "") << P.a[i];
    os << "]_" << P.p;
    return os.str();
}

void diff_section(std::ostringstream& out, const char* title, const std::string& got,
                  const std::string& want, bool& clean) {
    std::istringstream g(got), w(want);
    std::string gl, wl;
    for (;;) {
        bool hg = bool(std::getline(g, gl));
        bool hw = bool(std::getline(w, wl));
        if (!hg && !hw) return;
        if (!hg) gl = "<missing>";
        if (!hw) wl = "<missing>";
        if (gl != wl) {
            out << title << ": computed \"" << gl << "\" reference \"" << wl << "\"\n";
            clean = false;
        }
    }
}

std::string render_qr_section() {
    std::ostringstream os;
    os << "# quadratic residue strings\n";
    for (u32 p : {2, 3, 5, 7, 11, 13, 17, 19}) os << "p=" << p << ' ' << qr_sequence(p) << '\n';
    return os.str();
}

std::string render_peralta_section(u32 workers, const PeraltaOptions& opt) {
    PeraltaOptions po = opt;
    po.workers = workers;
    std::ostringstream os;
    os << "# pattern-complete primes\n";
    for (u32 n = 1; n <= 8; ++n) os << "n=" << n << ' ' << peralta_prime(n, po).p << '\n';
    return os.str();
}

std::string render_lqr_section(u32 workers) {
    std::ostringstream os;
    os << "# universal linear moduli\n";
    for (u32 n = 1; n <= 4; ++n) os << "n=" << n << ' ' << lqr_prime(n, 1000, workers).p << '\n';
    return os.str();
}

std::string render_catalog_section() {
    std::ostringstream os;
    os << "# protocol catalog verification\n";
    for (const CatalogEntry& e : protocol_catalog()) {
        LqrProtocol P{e.p, e.a};
        FastVerdict v = fast_verify_lqr(P, family(e.name, e.n));
        os << "n=" << e.n << ' ' << e.name << ' ' << vector_str(P) << ' ';
        if (v.ok)
            os << "PASS\n";
        else
            os << "FAIL x=" << v.counterexample_x << '\n';
    }
    return os.str();
}

}  // namespace

const std::vector<CatalogEntry>& protocol_catalog() {
    static const std::vector<CatalogEntry> cat = {
        {2, "AND", 5, {2, 1, 1}},
        {2, "XOR", 5, {2, 2, 4}},
        {2, "EQ", 5, {1, 1, 2}},
        {2, "MAJ", 5, {2, 2, 2}},
        {3, "AND", 11, {6, 1, 1, 1}},
        {3, "XOR", 7, {6, 3, 3, 3}},
        {3, "EQ", 5, {1, 1, 1, 1}},
        {3, "MAJ", 7, {3, 3, 3, 2}},
        {4, "AND", 13, {5, 1, 1, 1, 1}},
        {4, "XOR", 17, {12, 1, 1, 1, 7}},
        {4, "EQ", 11, {5, 1, 1, 1, 1}},
        {4, "MAJ", 11, {6, 2, 2, 2, 2}},
        {5, "AND", 41, {11, 1, 1, 1, 1, 1}},
        {5, "XOR", 19, {14, 2, 2, 2, 2, 2}},
        {5, "EQ", 13, {4, 1, 1, 1, 1, 1}},
        {5, "MAJ", 11, {6, 2, 2, 2, 2, 2}},
        {6, "AND", 53, {18, 1, 1, 1, 1, 1, 1}},
        {6, "XOR", 41, {15, 1, 1, 1, 1, 1, 6}},
        {6, "EQ", 41, {10, 1, 1, 1, 1, 1, 1}},
        {6, "MAJ", 31, {21, 3, 3, 3, 3, 3, 3}},
        {7, "AND", 83, {52, 1, 1, 1, 1, 1, 1, 1}},
        {7, "XOR", 79, {35, 1, 1, 1, 1, 1, 1, 1}},
        {7, "EQ", 53, {17, 1, 1, 1, 1, 1, 1, 1}},
        {7, "MAJ", 31, {21, 3, 3, 3, 3, 3, 3, 2}},
    };
    return cat;
}

std::string render_tables(u32 workers, const PeraltaOptions& opt) {
    std::string out = render_qr_section();
    out += '\n';
    out += render_peralta_section(workers, opt);
    out += '\n';
    out += render_lqr_section(workers);
    out += '\n';
    out += render_catalog_section();
    return out;
}

std::string reference_tables() {
    std::string out =
        "# quadratic residue strings\n"
        "p=2 1\n"
        "p=3 10\n"
        "p=5 1001\n"
        "p=7 110100\n"
        "p=11 1011100010\n"
        "p=13 101100001101\n"
        "p=17 1101000110001011\n"
        "p=19 100111101010000110\n"
        "\n"
        "# pattern-complete primes\n"
        "n=1 3\n"
        "n=2 7\n"
        "n=3 11\n"
        "n=4 37\n"
        "n=5 67\n"
        "n=6 181\n"
        "n=7 367\n"
        "n=8 1091\n"
        "\n"
        "# universal linear moduli\n"
        "n=1 3\n"
        "n=2 7\n"
        "n=3 11\n"
        "n=4 37\n"
        "\n"
        "# protocol catalog verification\n";
    for (const CatalogEntry& e : protocol_catalog()) {
        LqrProtocol P{e.p, e.a};
        out += "n=" + std::to_string(e.n) + ' ' + e.name + ' ' + vector_str(P) + " PASS\n";
    }
    return out;
}

TablesOutcome regenerate_tables(u32 workers, const PeraltaOptions& opt) {
    TablesOutcome o;
    std::string got = render_tables(workers, opt);
    std::string want = reference_tables();

    // split both by the blank lines separating sections
    auto split = [](const std::string& s) {
        std::vector<std::string> parts(1);
        std::istringstream is(s);
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty())
                parts.emplace_back();
            else
                parts.back() += line + '\n';
        }
        return parts;
    };
    auto gs = split(got), ws = split(want);
    static const char* titles[] = {"quadratic residue strings", "pattern-complete primes",
                                   "universal linear moduli", "protocol catalog verification"};
    std::ostringstream diff;
    bool clean = true;
    for (size_t i = 0; i < gs.size() && i < ws.size() && i < 4; ++i)
        diff_section(diff, titles[i], gs[i], ws[i], clean);

    o.text = got + "\n# reference diff\n" + (clean ? std::string("clean\n") : diff.str());
    o.clean = clean;
    return o;
}

}  // namespace qrpsm
