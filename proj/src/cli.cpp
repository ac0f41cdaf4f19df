#include "qrpsm/cli.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrpsm/compile.hpp"
#include "qrpsm/dre.hpp"
#include "qrpsm/funcspec.hpp"
#include "qrpsm/lqr.hpp"
#include "qrpsm/paley.hpp"
#include "qrpsm/peralta.hpp"
#include "qrpsm/psm.hpp"
#include "qrpsm/tables.hpp"

namespace qrpsm {

namespace {

enum class Fmt { human, lines, json };

struct Globals {
    u32 workers = 1;
    std::string format = "lines";
    std::string cache_dir = ".";
    u64 budget = 0;  ///< 0 = per-command default
    u32 max_p = 0;   ///< 0 = per-command default
    bool sign_flip = false;
    u64 seed = 0;

    Fmt fmt() const {
        return format == "human" ? Fmt::human : format == "json" ? Fmt::json : Fmt::lines;
    }
    PeraltaOptions peralta() const {
        PeraltaOptions o;
        o.workers = workers ? workers : 1;
        if (max_p) o.cap = max_p;
        o.cache_path = cache_dir + "/peralta-cache";
        return o;
    }
};

std::vector<u32> parse_csv_u32(const std::string& s) {
    std::vector<u32> v;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        size_t used = 0;
        unsigned long val = std::stoul(tok, &used);
        if (used != tok.size() || val > 0xFFFFFFFFul)
            throw std::invalid_argument("bad integer list: " + s);
        v.push_back(u32(val));
    }
    if (v.empty()) throw std::invalid_argument("empty integer list");
    return v;
}

std::vector<i64> parse_csv_i64(const std::string& s) {
    std::vector<i64> v;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        size_t used = 0;
        long long val = std::stoll(tok, &used);
        if (used != tok.size()) throw std::invalid_argument("bad integer list: " + s);
        v.push_back(val);
    }
    if (v.empty()) throw std::invalid_argument("empty integer list");
    return v;
}

LinearEmbedding parse_embed(const std::string& e, u32 n) {
    if (e == "sym") return embed_symmetric(n);
    if (e == "any") return embed_any(n);
    if (e.rfind("weighted:", 0) == 0) {
        auto w = parse_csv_i64(e.substr(9));
        if (w.size() != n)
            throw std::invalid_argument("weighted embedding needs one weight per variable");
        return embed_weighted(w);
    }
    if (e.rfind("comp:", 0) == 0) {
        auto mk = parse_csv_u32(e.substr(5));
        if (mk.size() != 2) throw std::invalid_argument("composition embedding needs comp:M,K");
        if (mk[0] * mk[1] != n)
            throw std::invalid_argument("composition embedding covers M*K variables");
        return embed_composition(mk[0], mk[1]);
    }
    throw std::invalid_argument("unknown embedding: " + e +
                                " (expected sym | weighted:W | any | comp:M,K)");
}

// ----- protocol loading -----

struct LoadedProtocol {
    enum class Kind { comp, lqr, compiled };
    Kind kind = Kind::comp;
    LqrProtocol lqr;
    QrPsmFromDre compiled;
};

std::string load_protocol_text(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{') return arg;
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open protocol file: " + arg);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) return line;
    throw std::invalid_argument("empty protocol file: " + arg);
}

LoadedProtocol load_protocol(const std::string& arg) {
    LoadedProtocol L;
    if (arg == "COMP") {
        L.kind = LoadedProtocol::Kind::comp;
        return L;
    }
    std::string text = load_protocol_text(arg);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("protocol descriptor: ") + e.what());
    }
    if (j.is_object() && j.contains("dre")) {
        L.kind = LoadedProtocol::Kind::compiled;
        L.compiled = QrPsmFromDre::from_json(text);
    } else {
        L.kind = LoadedProtocol::Kind::lqr;
        L.lqr = parse_lqr(text);
    }
    return L;
}

std::string join_u32(const std::vector<u32>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

// ----- subcommand handlers -----

int do_peralta(const Globals& G, u32 n, std::ostream& out) {
    PeraltaRecord r = peralta_prime(n, G.peralta());
    switch (G.fmt()) {
        case Fmt::lines: out << r.n << ' ' << r.p << '\n'; break;
        case Fmt::human:
            out << "P_" << r.n << " = " << r.p << (r.bound_ok ? " (inside" : " (outside")
                << " the n^2*4^(n-1) envelope)\n";
            break;
        case Fmt::json: {
            nlohmann::json j{{"n", r.n}, {"p", r.p}, {"bound_ok", r.bound_ok}};
            out << j.dump() << '\n';
            break;
        }
    }
    return 0;
}

int do_qrseq(const Globals& G, u32 p, std::ostream& out) {
    std::string s = qr_sequence(p);
    switch (G.fmt()) {
        case Fmt::lines: out << s << '\n'; break;
        case Fmt::human: out << "S_" << p << " = " << s << '\n'; break;
        case Fmt::json: {
            nlohmann::json j{{"p", p}, {"bits", s}};
            out << j.dump() << '\n';
            break;
        }
    }
    return 0;
}

int do_lqr_prime(const Globals& G, u32 n, std::ostream& out) {
    LqrPrimeRecord r = lqr_prime(n, G.max_p ? G.max_p : 1000, G.workers);
    switch (G.fmt()) {
        case Fmt::lines: out << r.n << ' ' << r.p << '\n'; break;
        case Fmt::human:
            out << "L_" << r.n << " = " << r.p << " (" << r.vectors_scanned
                << " coefficient vectors scanned)\n";
            break;
        case Fmt::json: {
            nlohmann::json j{{"n", r.n}, {"p", r.p}, {"vectors_scanned", r.vectors_scanned}};
            out << j.dump() << '\n';
            break;
        }
    }
    return 0;
}

int emit_protocol(const Globals& G, const LqrProtocol& P, u32 bits, std::ostream& out) {
    switch (G.fmt()) {
        case Fmt::lines: out << to_json_line(P) << '\n'; break;
        case Fmt::human:
            out << to_json_line(P) << "  (" << P.players() << " players, " << bits
                << " bits total)\n";
            break;
        case Fmt::json: {
            nlohmann::json j{{"p", P.p}, {"a", P.a}, {"bits", bits}};
            out << j.dump() << '\n';
            break;
        }
    }
    return 0;
}

int do_synth(const Globals& G, const std::string& fspec, const std::string& embed,
             std::ostream& out) {
    FuncSpec fs = parse_funcspec(fspec);
    if (fs.kind != FuncSpec::Kind::Boolean)
        throw std::invalid_argument("synth needs a Boolean function spec");
    LinearEmbedding g = parse_embed(embed, fs.arity());
    SynthOptions so;
    so.peralta = G.peralta();
    SynthesisResult res = synthesize(fs.tt(), g, so);
    return emit_protocol(G, res.protocol, res.bits, out);
}

int do_minimal(const Globals& G, const std::string& fspec, std::ostream& out) {
    FuncSpec fs = parse_funcspec(fspec);
    if (fs.kind != FuncSpec::Kind::Boolean)
        throw std::invalid_argument("minimal needs a Boolean function spec");
    MinimalSearchOptions mo;
    if (G.max_p) mo.max_p = G.max_p;
    if (G.budget) mo.budget = G.budget;
    mo.workers = G.workers;
    LqrProtocol P = find_minimal_protocol(fs.tt(), mo);
    return emit_protocol(G, P, protocol_bits(P), out);
}

int report_verdict(const Globals& G, bool ok, const std::string& detail, u64 checked,
                   std::ostream& out) {
    switch (G.fmt()) {
        case Fmt::lines:
        case Fmt::human:
            out << (ok ? "PASS" : "FAIL") << (detail.empty() ? "" : " " + detail) << '\n';
            break;
        case Fmt::json: {
            nlohmann::json j{{"verdict", ok ? "PASS" : "FAIL"}, {"checked", checked}};
            if (!detail.empty()) j["detail"] = detail;
            out << j.dump() << '\n';
            break;
        }
    }
    return ok ? 0 : 1;
}

int exhaustive_verify(const Globals& G, const PsmProtocol& P, const Target& t, u64 budget,
                      std::ostream& out) {
    VerifyOptions vo;
    vo.budget = budget;
    CorrectnessResult c = verify_correctness(P, t, vo);
    if (!c.ok)
        return report_verdict(G, false, "correctness " + c.counterexample->to_line(),
                              c.pairs_checked, out);
    SecurityResult s = verify_security(P, t, vo);
    if (!s.ok) {
        std::string d = "security x=" + join_u32(s.counterexample->first) + " vs x=" +
                        join_u32(s.counterexample->second);
        return report_verdict(G, false, d, s.tuples_checked, out);
    }
    return report_verdict(G, true, "", c.pairs_checked + s.tuples_checked, out);
}

int do_verify(const Globals& G, const std::string& proto_arg, const std::string& fspec,
              const std::string& mode, std::ostream& out) {
    LoadedProtocol L = load_protocol(proto_arg);
    FuncSpec fs = parse_funcspec(fspec);
    const u64 budget = G.budget ? G.budget : 100'000'000;

    if (L.kind == LoadedProtocol::Kind::comp) {
        if (fs.kind != FuncSpec::Kind::Comparison)
            throw std::invalid_argument("the built-in protocol computes COMP");
        return exhaustive_verify(G, fkn_comparison(), Target::comparison(), budget, out);
    }
    if (fs.kind != FuncSpec::Kind::Boolean)
        throw std::invalid_argument("COMP has no descriptor protocol; use --protocol COMP");

    if (L.kind == LoadedProtocol::Kind::lqr) {
        if (fs.arity() != L.lqr.players())
            throw std::invalid_argument("function arity does not match protocol players");
        if (mode == "fast") {
            FastVerdict c = fast_verify_lqr(L.lqr, fs.tt(), G.sign_flip);
            if (!c.ok) {
                std::string d = "correctness x=" + std::to_string(c.counterexample_x) +
                                " class=" + std::to_string(c.got) +
                                " expected=" + std::to_string(c.want);
                return report_verdict(G, false, d, fs.tt().size(), out);
            }
            FastVerdict s = fast_verify_security_lqr(L.lqr, fs.tt());
            if (!s.ok)
                return report_verdict(
                    G, false, "security x=" + std::to_string(s.counterexample_x),
                    fs.tt().size(), out);
            return report_verdict(G, true, "", fs.tt().size(), out);
        }
        return exhaustive_verify(G, build_lqr(L.lqr),
                                 Target::from_truth_table(fs.tt(), G.sign_flip), budget, out);
    }

    // compiled descriptor
    if (!(fs.tt() == L.compiled.f))
        throw std::invalid_argument("descriptor was compiled for a different function");
    if (mode == "fast")
        return report_verdict(G, true, "", L.compiled.f.size(), out);
    return exhaustive_verify(
        G, L.compiled.protocol,
        Target::from_truth_table(L.compiled.f, L.compiled.flip_sign), budget, out);
}

int do_run(const Globals& G, const std::string& proto_arg, const std::string& xcsv,
           std::ostream& out) {
    LoadedProtocol L = load_protocol(proto_arg);
    const PsmProtocol* P = nullptr;
    PsmProtocol built;
    switch (L.kind) {
        case LoadedProtocol::Kind::comp: built = fkn_comparison(); P = &built; break;
        case LoadedProtocol::Kind::lqr: built = build_lqr(L.lqr); P = &built; break;
        case LoadedProtocol::Kind::compiled: P = &L.compiled.protocol; break;
    }
    std::vector<u32> x = parse_csv_u32(xcsv);
    if (x.size() != P->players()) throw std::invalid_argument("need one input per player");
    for (u32 i = 0; i < x.size(); ++i)
        if (x[i] >= P->domain_sizes[i])
            throw std::invalid_argument("input " + std::to_string(i + 1) + " out of domain");

    std::mt19937_64 rng(G.seed);
    u64 r = rng() % P->randomness_size;
    Transcript tr = execute(*P, x, r);
    switch (G.fmt()) {
        case Fmt::lines:
        case Fmt::human: out << "seed=" << G.seed << ' ' << tr.to_line() << '\n'; break;
        case Fmt::json: {
            nlohmann::json j{{"seed", G.seed}, {"x", tr.x}, {"r", tr.r}, {"m", tr.m},
                             {"out", tr.out}};
            out << j.dump() << '\n';
            break;
        }
    }
    return 0;
}

int do_dre_check(const Globals& G, const std::string& expr, u32 p, std::ostream& out) {
    Polynomial f = Polynomial::parse(expr);
    Dre D = dre_polynomial(f, p);
    DreVerifyOptions o;
    o.budget = G.budget ? G.budget : 100'000'000;
    o.workers = G.workers;
    std::string why;
    bool ok = verify_dre(D, f, o, &why);
    return report_verdict(G, ok, ok ? "" : why, 0, out);
}

int do_compile_dre(const Globals& G, const std::string& fspec, const std::string& expr,
                   bool estimate, bool exhaustive, std::ostream& out) {
    FuncSpec fs = parse_funcspec(fspec);
    if (fs.kind != FuncSpec::Kind::Boolean)
        throw std::invalid_argument("compile-dre needs a Boolean function spec");
    Polynomial g = Polynomial::parse(expr);
    CompileOptions co;
    co.peralta = G.peralta();
    co.flip_sign = G.sign_flip;

    if (estimate) {
        CostEstimate ce = estimate_cost(fs.tt(), g, co);
        switch (G.fmt()) {
            case Fmt::lines:
                out << "p=" << ce.p << " s=" << ce.s << " bits=" << ce.bits
                    << " exact=" << (ce.exact ? 1 : 0) << '\n';
                break;
            case Fmt::human:
                out << "modulus " << ce.p << ", " << ce.s << " encoding slots, " << ce.bits
                    << " bits" << (ce.exact ? "" : " (per-monomial fallback)") << '\n';
                break;
            case Fmt::json: {
                nlohmann::json j{{"p", ce.p}, {"s", ce.s}, {"bits", ce.bits},
                                 {"exact", ce.exact}};
                out << j.dump() << '\n';
                break;
            }
        }
        return 0;
    }

    QrPsmFromDre r = compile(fs.tt(), g, co);
    if (G.fmt() == Fmt::json) {
        nlohmann::json j = nlohmann::json::parse(r.to_json());
        if (exhaustive) {
            VerifyOptions vo;
            vo.budget = G.budget ? G.budget : 10'000'000'000ull;
            Target t = Target::from_truth_table(r.f, r.flip_sign);
            CorrectnessResult c = verify_correctness(r.protocol, t, vo);
            SecurityResult s;
            if (c.ok) s = verify_security(r.protocol, t, vo);
            j["verdict"] = (c.ok && s.ok) ? "PASS" : "FAIL";
            out << j.dump() << '\n';
            return (c.ok && s.ok) ? 0 : 1;
        }
        j["verdict"] = "PASS";
        out << j.dump() << '\n';
        return 0;
    }
    out << r.to_json() << '\n';
    if (exhaustive) {
        VerifyOptions vo;
        vo.budget = G.budget ? G.budget : 10'000'000'000ull;
        return exhaustive_verify(G, r.protocol,
                                 Target::from_truth_table(r.f, r.flip_sign), vo.budget, out);
    }
    return report_verdict(G, true, "", r.f.size(), out);
}

int do_paley(const Globals& G, u32 p, u32 n, bool full, std::ostream& out) {
    const char* kind = p % 4 == 1 ? "graph" : "tournament";
    if (full) {
        StarPropertyReport rep = has_star_property_full(p, n, G.workers);
        switch (G.fmt()) {
            case Fmt::lines:
            case Fmt::human:
                out << "p=" << p << " n=" << n << " kind=" << kind << " property=";
                if (rep.holds)
                    out << "holds\n";
                else
                    out << "fails start=" << rep.fail_start << " mask=" << rep.fail_mask << '\n';
                break;
            case Fmt::json: {
                nlohmann::json j{{"p", p}, {"n", n}, {"kind", kind}, {"holds", rep.holds}};
                if (!rep.holds) {
                    j["fail_start"] = rep.fail_start;
                    j["fail_mask"] = rep.fail_mask;
                }
                out << j.dump() << '\n';
                break;
            }
        }
        return rep.holds ? 0 : 1;
    }
    bool holds = has_star_property_reduced(p, n);
    switch (G.fmt()) {
        case Fmt::lines:
        case Fmt::human:
            out << "p=" << p << " n=" << n << " kind=" << kind << " property="
                << (holds ? "holds" : "fails") << '\n';
            break;
        case Fmt::json: {
            nlohmann::json j{{"p", p}, {"n", n}, {"kind", kind}, {"holds", holds}};
            out << j.dump() << '\n';
            break;
        }
    }
    return holds ? 0 : 1;
}

int do_paley_m(const Globals& G, u32 n, std::ostream& out) {
    MValues mv = m_values(n, G.max_p ? G.max_p : u32(1) << 22);
    switch (G.fmt()) {
        case Fmt::lines: out << mv.m_graph << ' ' << mv.m_tournament << ' ' << mv.m << '\n'; break;
        case Fmt::human:
            out << "m_G=" << mv.m_graph << " m_T=" << mv.m_tournament << " m=" << mv.m << '\n';
            break;
        case Fmt::json: {
            nlohmann::json j{{"m_G", mv.m_graph}, {"m_T", mv.m_tournament}, {"m", mv.m}};
            out << j.dump() << '\n';
            break;
        }
    }
    return 0;
}

int do_tables(const Globals& G, std::ostream& out) {
    TablesOutcome t = regenerate_tables(G.workers, G.peralta());
    if (G.fmt() == Fmt::json) {
        nlohmann::json j{{"clean", t.clean}, {"text", t.text}};
        out << j.dump() << '\n';
    } else {
        out << t.text;
    }
    return t.clean ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out) {
    Globals G;
    CLI::App app{"quadratic-residue PSM toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--workers", G.workers, "worker threads (default 1)");
    app.add_option("--format", G.format, "output format: human | lines | json (default lines)")
        ->check(CLI::IsMember({"human", "lines", "json"}));
    app.add_option("--cache-dir", G.cache_dir, "directory for the prime cache (default .)")
        ->envname("QRPSM_CACHE_DIR");
    app.add_option("--budget", G.budget, "enumeration budget override");
    app.add_option("--max-p", G.max_p, "largest prime considered by searches");
    app.add_flag("--sign-flip", G.sign_flip, "decide +1 on f(x)=0 instead of f(x)=1");
    app.add_option("--seed", G.seed, "randomness seed for run (default 0)");

    u32 pe_n = 0;
    auto* sub_pe = app.add_subcommand(
        "peralta", "least prime whose residue string holds every n-bit pattern; line: \"N P\"");
    sub_pe->add_option("--n", pe_n, "pattern length")->required();

    u32 qr_p = 0;
    auto* sub_qr =
        app.add_subcommand("qrseq", "residue string of a prime; line: the bitstring");
    sub_qr->add_option("--p", qr_p, "prime modulus")->required();

    u32 lp_n = 0;
    auto* sub_lp = app.add_subcommand(
        "lqr-prime", "least modulus covering every n-variable function; line: \"N L\"");
    sub_lp->add_option("--n", lp_n, "function arity (1..4)")->required();

    std::string sy_f, sy_embed;
    auto* sub_sy = app.add_subcommand(
        "synth", "protocol from a linear embedding; line: {\"p\":..,\"a\":[..]}");
    sub_sy->add_option("--f", sy_f, "function spec (AND:3, tt:0x8:3, ...)")->required();
    sub_sy->add_option("--embed", sy_embed, "sym | weighted:W | any | comp:M,K")->required();

    std::string mi_f;
    auto* sub_mi = app.add_subcommand(
        "minimal", "least-modulus protocol search; line: {\"p\":..,\"a\":[..]}");
    sub_mi->add_option("--f", mi_f, "function spec")->required();

    std::string ve_proto, ve_f, ve_mode = "fast";
    auto* sub_ve = app.add_subcommand(
        "verify", "check a protocol against a function; line: PASS | FAIL <detail>");
    sub_ve->add_option("--protocol", ve_proto, "descriptor file, inline JSON, or COMP")
        ->required();
    sub_ve->add_option("--f", ve_f, "function spec")->required();
    sub_ve->add_option("--mode", ve_mode, "fast | exhaustive (default fast)")
        ->check(CLI::IsMember({"fast", "exhaustive"}));

    std::string ru_proto, ru_x;
    auto* sub_ru = app.add_subcommand(
        "run", "one seeded execution; line: seed=S x=[..] r=[..] m=[..] out=..");
    sub_ru->add_option("--protocol", ru_proto, "descriptor file, inline JSON, or COMP")
        ->required();
    sub_ru->add_option("--x", ru_x, "comma-separated inputs, player 1 first")->required();

    std::string dc_poly;
    u32 dc_p = 0;
    auto* sub_dc = app.add_subcommand(
        "dre-check", "build and verify a polynomial encoding; line: PASS | FAIL <why>");
    sub_dc->add_option("--poly", dc_poly, "polynomial, e.g. \"x1*x2 + x3\"")->required();
    sub_dc->add_option("--p", dc_p, "odd prime modulus")->required();

    std::string cd_f, cd_poly;
    bool cd_estimate = false, cd_exhaustive = false;
    auto* sub_cd = app.add_subcommand(
        "compile-dre",
        "compile a function via a polynomial embedding; lines: descriptor, then PASS | FAIL");
    sub_cd->add_option("--f", cd_f, "function spec")->required();
    sub_cd->add_option("--poly", cd_poly, "embedding polynomial over x1..xn")->required();
    sub_cd->add_flag("--estimate", cd_estimate, "print cost only; line: p=.. s=.. bits=.. exact=..");
    sub_cd->add_flag("--exhaustive", cd_exhaustive, "full correctness + security sweep");

    u32 pa_p = 0, pa_n = 0;
    bool pa_full = false;
    auto* sub_pa = app.add_subcommand(
        "paley", "star-extension property; line: p=.. n=.. kind=.. property=..");
    sub_pa->add_option("--p", pa_p, "odd prime")->required();
    sub_pa->add_option("--n", pa_n, "window length")->required();
    sub_pa->add_flag("--full", pa_full, "check every window, report a witness on failure");

    u32 pm_n = 0;
    auto* sub_pm = app.add_subcommand(
        "paley-m", "least qualifying primes by residue class; line: \"m_G m_T m\"");
    sub_pm->add_option("--n", pm_n, "window length")->required();

    auto* sub_ta = app.add_subcommand(
        "tables", "regenerate the built-in tables and diff against the reference copies");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        int code = app.exit(e, os, os);
        out << os.str();
        return code == 0 ? 0 : 2;
    }

    try {
        if (sub_pe->parsed()) return do_peralta(G, pe_n, out);
        if (sub_qr->parsed()) return do_qrseq(G, qr_p, out);
        if (sub_lp->parsed()) return do_lqr_prime(G, lp_n, out);
        if (sub_sy->parsed()) return do_synth(G, sy_f, sy_embed, out);
        if (sub_mi->parsed()) return do_minimal(G, mi_f, out);
        if (sub_ve->parsed()) return do_verify(G, ve_proto, ve_f, ve_mode, out);
        if (sub_ru->parsed()) return do_run(G, ru_proto, ru_x, out);
        if (sub_dc->parsed()) return do_dre_check(G, dc_poly, dc_p, out);
        if (sub_cd->parsed()) return do_compile_dre(G, cd_f, cd_poly, cd_estimate, cd_exhaustive, out);
        if (sub_pa->parsed()) return do_paley(G, pa_p, pa_n, pa_full, out);
        if (sub_pm->parsed()) return do_paley_m(G, pm_n, out);
        if (sub_ta->parsed()) return do_tables(G, out);
        out << "error: no subcommand\n";
        return 2;
    } catch (const BudgetError& e) {
        out << "budget exceeded: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        out << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::logic_error& e) {
        out << "internal error: " << e.what() << '\n';
        return 2;
    } catch (const std::runtime_error& e) {
        out << "limit: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        out << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace qrpsm
