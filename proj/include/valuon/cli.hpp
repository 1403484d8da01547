#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "valuon/expression.hpp"
#include "valuon/gamma.hpp"
#include "valuon/matrix.hpp"
#include "valuon/qval.hpp"
#include "valuon/ring.hpp"
#include "valuon/rng.hpp"

namespace valuon {

namespace cli_detail {

/// One ring construction per invocation, shared by every ring subcommand.
struct RingOptions {
    std::int64_t cyclic = -1;
    std::int64_t field = 0;
    std::int64_t upper = 0;
    std::int64_t square = 0;
    std::string base;
    std::string product;
    std::string file;
};

inline void attach_ring_options(CLI::App* cmd, RingOptions& o) {
    cmd->add_option("--cyclic", o.cyclic, "integers mod n");
    cmd->add_option("--field", o.field, "finite field of order q");
    cmd->add_option("--upper-triangular", o.upper, "d x d upper-triangular matrices over --base");
    cmd->add_option("--matrix", o.square, "full d x d matrix ring over --base");
    cmd->add_option("--base", o.base, "base ring selector, z<n> or f<q>");
    cmd->add_option("--product", o.product, "direct product of two selectors, e.g. z2,z2");
    cmd->add_option("--file", o.file, "ring table file");
}

inline FiniteRing base_ring(const std::string& sel) {
    if (sel.size() > 1 && (sel[0] == 'z' || sel[0] == 'f') &&
        std::all_of(sel.begin() + 1, sel.end(),
                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        std::int64_t n = std::stoll(sel.substr(1));
        return sel[0] == 'z' ? cyclic_ring(n) : finite_field(n);
    }
    throw std::invalid_argument("unknown ring selector '" + sel + "' (expected z<n> or f<q>)");
}

inline FiniteRing resolve_ring(const RingOptions& o) {
    int chosen = (o.cyclic >= 0 ? 1 : 0) + (o.field > 0 ? 1 : 0) + (o.upper > 0 ? 1 : 0) +
                 (o.square > 0 ? 1 : 0) + (o.product.empty() ? 0 : 1) + (o.file.empty() ? 0 : 1);
    if (chosen != 1)
        throw std::invalid_argument(
            "choose exactly one of --cyclic/--field/--upper-triangular/--matrix/--product/--file");
    if (o.cyclic >= 0) return cyclic_ring(o.cyclic);
    if (o.field > 0) return finite_field(o.field);
    if (o.upper > 0 || o.square > 0) {
        if (o.base.empty()) throw std::invalid_argument("--base is required for matrix rings");
        FiniteRing b = base_ring(o.base);
        return o.upper > 0 ? upper_triangular_ring(b, static_cast<std::size_t>(o.upper))
                           : matrix_ring(b, static_cast<std::size_t>(o.square));
    }
    if (!o.product.empty()) {
        auto comma = o.product.find(',');
        if (comma == std::string::npos || o.product.find(',', comma + 1) != std::string::npos)
            throw std::invalid_argument("--product wants exactly two selectors, e.g. z2,z2");
        return product_ring(base_ring(o.product.substr(0, comma)),
                            base_ring(o.product.substr(comma + 1)));
    }
    std::ifstream in(o.file);
    if (!in) throw std::invalid_argument("cannot open '" + o.file + "'");
    return read_ring(in);
}

inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

inline std::string verdict(bool ok, const std::string& witness) {
    return ok ? "ok" : "FAIL (" + witness + ")";
}

inline void print_valuation_report(std::ostream& out, const ValuationReport& rep,
                                   const std::string& mode) {
    out << "unital: " << verdict(rep.unital, rep.unital_witness) << "\n";
    out << "multiplicative: " << verdict(rep.multiplicative, rep.multiplicative_witness) << "\n";
    out << "superadditive: " << verdict(rep.superadditive, rep.superadditive_witness) << "\n";
    out << "supermultiplicative: "
        << verdict(rep.supermultiplicative, rep.supermultiplicative_witness) << "\n";
    out << "nondegenerate: " << verdict(rep.nondegenerate, rep.nondegenerate_witness) << "\n";
    ValuationMode m = mode == "supermultiplicative" ? ValuationMode::Supermultiplicative
                                                    : ValuationMode::Multiplicative;
    out << "valuation (" << mode << "): " << (rep.is_valuation(m) ? "yes" : "no") << "\n";
}

}  // namespace cli_detail

/**
 * Command dispatch for the `valuon` tool.  Returns the process exit code:
 * 0 success, 1 domain error (invalid tables, size bounds, non-convergence),
 * 2 usage error (bad flags, parse errors, unreadable arguments).
 */
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using cli_detail::RingOptions;

    CLI::App app{"finite rings, valuation semirings, tropicalization, crease geometry"};
    app.name("valuon");
    app.require_subcommand(1);
    bool machine = false;
    app.add_flag("--machine", machine, "prefix output with a schema-version line");
    auto emit_version = [&] {
        if (machine) out << "valuon 1\n";
    };

    // ring: construct and print tables
    auto* ring_cmd = app.add_subcommand("ring", "construct a finite ring and print its tables");
    RingOptions ring_opts;
    bool ring_validate = false;
    cli_detail::attach_ring_options(ring_cmd, ring_opts);
    ring_cmd->add_flag("--validate", ring_validate, "print per-law verdicts");
    ring_cmd->callback([&] {
        FiniteRing r = cli_detail::resolve_ring(ring_opts);
        emit_version();
        write_ring(out, r);
        if (ring_validate) {
            // Constructors reject invalid tables with a counterexample, so
            // a ring that resolved is already law-checked.
            for (const char* law :
                 {"addition associative", "addition commutative", "additive identity",
                  "additive inverses", "multiplication associative", "multiplicative identity",
                  "left distributive", "right distributive"})
                out << law << ": ok\n";
        }
    });

    // gamma: universal valuation semiring tables
    auto* gamma_cmd = app.add_subcommand("gamma", "enumerate the universal valuation semiring");
    RingOptions gamma_opts;
    bool singletons = false;
    cli_detail::attach_ring_options(gamma_cmd, gamma_opts);
    gamma_cmd->add_flag("--singletons", singletons,
                        "print the multiplication table of nontrivial singleton classes");
    gamma_cmd->callback([&] {
        FiniteRing r = cli_detail::resolve_ring(gamma_opts);
        GammaSemiring g = enumerate_gamma(r);
        emit_version();
        if (!singletons) {
            write_gamma(out, g);
            return;
        }
        std::vector<Index> rows;
        for (Index a = 0; a < r.n(); ++a)
            if (a != r.zero() && a != r.one()) rows.push_back(a);
        out << "*";
        for (Index a : rows) out << " " << show_gamma(r, nu_universal(r, a));
        out << "\n";
        for (Index a : rows) {
            out << show_gamma(r, nu_universal(r, a));
            for (Index b : rows)
                out << " " << show_gamma(r, gamma_mul(r, nu_universal(r, a), nu_universal(r, b)));
            out << "\n";
        }
    });

    // val: valuation axiom checks
    auto* val_cmd = app.add_subcommand("val", "check the valuation axioms for a map");
    RingOptions val_opts;
    std::string val_target;
    std::int64_t val_padic = 0;
    bool val_gcdq = false;
    std::string val_mode = "multiplicative";
    std::size_t val_cases = 1000;
    cli_detail::attach_ring_options(val_cmd, val_opts);
    val_cmd->add_option("--target", val_target,
                        "ring-based valuation target: universal or ideal");
    val_cmd->add_option("--padic", val_padic, "check v_p on sampled rationals");
    val_cmd->add_flag("--gcdq", val_gcdq, "check |.| into the gcd semiring on sampled rationals");
    val_cmd->add_option("--mode", val_mode, "multiplicative (default) or supermultiplicative");
    val_cmd->add_option("--cases", val_cases, "sample count for the rational checks");
    val_cmd->callback([&] {
        if (val_mode != "multiplicative" && val_mode != "supermultiplicative")
            throw std::invalid_argument("--mode must be multiplicative or supermultiplicative");
        int chosen = (val_target.empty() ? 0 : 1) + (val_padic > 0 ? 1 : 0) + (val_gcdq ? 1 : 0);
        if (chosen != 1)
            throw std::invalid_argument("choose exactly one of --target/--padic/--gcdq");
        ValuationReport rep;
        if (!val_target.empty()) {
            FiniteRing r = cli_detail::resolve_ring(val_opts);
            if (val_target == "universal") {
                rep = check_valuation(r, GammaView{r},
                                      [&](Index a) { return nu_universal(r, a); });
            } else if (val_target == "ideal") {
                rep = check_valuation(r, IdealSemiring{r},
                                      [&](Index a) { return nu_ideal(r, a); });
            } else {
                throw std::invalid_argument("--target must be universal or ideal");
            }
        } else {
            std::mt19937_64 rng(seed_from_env());
            auto gen = [&] { return random_rational(rng); };
            if (val_padic > 0) {
                rep = check_valuation_sampled(
                    TropicalSemiring{},
                    [&](const Rational& q) { return nu_padic(val_padic, q); }, gen, val_cases);
            } else {
                rep = check_valuation_sampled(
                    GcdRationalSemiring{}, [](const Rational& q) { return q.abs(); }, gen,
                    val_cases);
            }
        }
        emit_version();
        cli_detail::print_valuation_report(out, rep, val_mode);
    });

    // trop: tropicalize an expression, list crease points and roots
    auto* trop_cmd = app.add_subcommand("trop", "tropicalize an expression");
    RingOptions trop_opts;
    std::string trop_expr;
    std::string trop_valuation = "universal";
    std::string trop_vars = "z";
    bool trop_full_gamma = false;
    bool trop_roots = false;
    cli_detail::attach_ring_options(trop_cmd, trop_opts);
    trop_cmd->add_option("expression", trop_expr, "expression text")->required();
    trop_cmd->add_option("--valuation", trop_valuation, "universal (default) or padic:<p>");
    trop_cmd->add_option("--vars", trop_vars, "comma-separated variable names (default z)");
    trop_cmd->add_flag("--full-gamma", trop_full_gamma,
                       "crease domain is all of the universal semiring, not just singletons");
    trop_cmd->add_flag("--roots", trop_roots, "also print the zero set and root/crease verdict");
    trop_cmd->callback([&] {
        std::vector<std::string> vars = cli_detail::split_csv(trop_vars);
        if (trop_valuation.rfind("padic:", 0) == 0) {
            std::int64_t p = std::stoll(trop_valuation.substr(6));
            if (trop_roots || trop_full_gamma)
                throw std::invalid_argument("--roots/--full-gamma need a finite ring");
            RationalExprContext qc;
            auto f = parse_expression(trop_expr, qc, vars);
            auto trop = tropicalize(qc, f, TropicalSemiring{},
                                    [&](const Rational& q) { return nu_padic(p, q); });
            emit_version();
            out << "trop: " << to_string(trop.ctx, trop.expr) << "\n";
            return;
        }
        if (trop_valuation != "universal")
            throw std::invalid_argument("--valuation must be universal or padic:<p>");
        FiniteRing r = cli_detail::resolve_ring(trop_opts);
        RingExprContext rc(r);
        auto f = parse_expression(trop_expr, rc, vars);
        GammaView gv{r};
        auto nu = [&](Index a) { return nu_universal(r, a); };
        auto trop = tropicalize(rc, f, gv, nu);
        emit_version();
        out << "trop: " << to_string(trop.ctx, trop.expr) << "\n";
        if (expr_variables(f).size() <= 1 && !trop.expr.monomials.empty()) {
            std::vector<GammaElement> domain;
            if (trop_full_gamma) {
                GammaSemiring g = enumerate_gamma(r);
                for (std::size_t i = 0; i < g.size(); ++i) domain.push_back(g.element_at(i));
            } else {
                for (Index a = 0; a < r.n(); ++a) {
                    GammaElement e = nu_universal(r, a);
                    bool seen = false;
                    for (const auto& d : domain)
                        if (d == e) {
                            seen = true;
                            break;
                        }
                    if (!seen) domain.push_back(e);
                }
            }
            auto crease = crease_points(trop.ctx, trop.expr, domain);
            out << "crease:";
            if (crease.empty()) out << " (none)";
            for (const auto& z : crease) out << " " << show_gamma(r, z);
            out << "\n";
        }
        if (trop_roots) {
            auto rts = roots(rc, f);
            out << "roots:";
            if (rts.empty()) out << " (none)";
            for (const auto& tuple : rts) {
                if (tuple.size() == 1) {
                    out << " " << r.label(tuple[0]);
                } else {
                    out << " (";
                    for (std::size_t i = 0; i < tuple.size(); ++i)
                        out << (i ? "," : "") << r.label(tuple[i]);
                    out << ")";
                }
            }
            out << "\n";
            auto rep = root_crease_check(rc, f, gv, nu);
            out << "root-crease: " << (rep.ok() ? "ok" : "FAIL (" + rep.witness + ")") << "\n";
        }
    });

    // hom: classify a tropical homomorphism by prime assignments
    auto* hom_cmd = app.add_subcommand("hom", "classify a homomorphism to tropical by its prime values");
    std::vector<std::string> hom_args;
    hom_cmd->add_option("assignment", hom_args, "prime=value pairs, e.g. 2=1 3=0");
    hom_cmd->callback([&] {
        std::map<std::int64_t, Rational> assignment;
        for (const auto& a : hom_args) {
            auto eq = a.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("assignment '" + a + "' is not of the form p=c");
            std::int64_t p = std::stoll(a.substr(0, eq));
            if (assignment.count(p))
                throw std::invalid_argument("duplicate prime " + std::to_string(p));
            assignment.emplace(p, Rational::parse(a.substr(eq + 1)));
        }
        auto cls = classify_trop_hom(assignment);
        emit_version();
        out << cls.str() << "\n";
    });

    // star: least fixed point of X = AX + I on a matrix file
    auto* star_cmd = app.add_subcommand("star", "solve X = AX + I over a matrix file");
    std::string star_file;
    star_cmd->add_option("file", star_file, "matrix file")->required();
    star_cmd->callback([&] {
        std::ifstream in(star_file);
        if (!in) throw std::invalid_argument("cannot open '" + star_file + "'");
        MatrixFile mf = read_matrix(in);
        emit_version();
        if (mf.semiring == "tropical") {
            TropicalSemiring s;
            TropMatrix x = least_fixed_point(s, matrix_from_file(s, mf));
            write_matrix(out, matrix_to_file(x, "tropical"));
        } else if (mf.semiring == "minmax") {
            MinMaxSemiring s;
            MinMaxMatrix x = least_fixed_point(s, matrix_from_file(s, mf));
            write_matrix(out, matrix_to_file(x, "minmax"));
            UltrametricCandidate cand;
            cand.n = mf.n;
            cand.d = mf.entries;
            bool metric = true;
            try {
                validate_metric(cand);
            } catch (const std::domain_error&) {
                metric = false;
            }
            if (metric) {
                auto before = is_ultrametric(cand);
                out << "ultrametric input: "
                    << (before.ultrametric ? "yes" : "no (" + before.witness + ")") << "\n";
                auto after = is_ultrametric(minimax_closure(cand));
                out << "ultrametric closed: "
                    << (after.ultrametric ? "yes" : "no (" + after.witness + ")") << "\n";
            }
        } else {
            throw std::domain_error("star: unsupported semiring '" + mf.semiring + "'");
        }
    });

    // ab: abelianization correspondence sizes and verdict
    auto* ab_cmd = app.add_subcommand("ab", "compare both abelianizations of the valuation semiring");
    RingOptions ab_opts;
    cli_detail::attach_ring_options(ab_cmd, ab_opts);
    ab_cmd->callback([&] {
        FiniteRing r = cli_detail::resolve_ring(ab_opts);
        AbCorrespondence c = abelianization_correspondence(r);
        emit_version();
        out << c.commuting.size() << " " << c.gamma_ab.size()
            << " isomorphic: " << (c.isomorphic() ? "yes" : "no") << "\n";
        if (!c.isomorphic() && !c.witness.empty()) out << "witness: " << c.witness << "\n";
    });

    // cong: congruence closure on a semiring file
    auto* cong_cmd = app.add_subcommand("cong", "congruence closure of pairs on a semiring file");
    std::string cong_file;
    std::vector<std::string> cong_pairs;
    bool cong_quotient = false;
    cong_cmd->add_option("file", cong_file, "semiring table file")->required();
    cong_cmd->add_option("--pair", cong_pairs, "identified pair i,j (repeatable)");
    cong_cmd->add_flag("--quotient", cong_quotient, "also print the quotient semiring");
    cong_cmd->callback([&] {
        std::ifstream in(cong_file);
        if (!in) throw std::invalid_argument("cannot open '" + cong_file + "'");
        FiniteSemiring s = read_semiring(in);
        std::vector<std::pair<Index, Index>> pairs;
        for (const auto& p : cong_pairs) {
            auto comma = p.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("--pair wants i,j with indices");
            long i = std::stol(p.substr(0, comma));
            long j = std::stol(p.substr(comma + 1));
            if (i < 0 || j < 0 || i >= static_cast<long>(s.n) || j >= static_cast<long>(s.n))
                throw std::invalid_argument("--pair index out of range for n=" +
                                            std::to_string(s.n));
            pairs.emplace_back(static_cast<Index>(i), static_cast<Index>(j));
        }
        FiniteCongruence c = congruence_closure(s, pairs);
        emit_version();
        write_congruence(out, c);
        if (cong_quotient) write_semiring(out, quotient_semiring(s, c));
    });

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
        return 0;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace valuon
