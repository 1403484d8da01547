#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "valuon/finite_semiring.hpp"
#include "valuon/index_set.hpp"
#include "valuon/rational.hpp"
#include "valuon/ring.hpp"
#include "valuon/semiring.hpp"

namespace valuon {

/**
 * Element of the universal valuation semiring of a finite ring, in
 * canonical form: the additive subgroup (integer span) of the generators.
 * Two formal sums of generators are identified exactly when their spans
 * coincide, so the subgroup is a complete invariant.
 */
struct GammaElement {
    std::uint64_t ring_id = 0;
    IndexSet elems;

    friend bool operator==(const GammaElement& a, const GammaElement& b) {
        return a.ring_id == b.ring_id && a.elems == b.elems;
    }
    friend bool operator!=(const GammaElement& a, const GammaElement& b) { return !(a == b); }
};

namespace detail {
inline void require_same_ring(const FiniteRing& r, const GammaElement& g, const char* what) {
    if (g.ring_id != r.id())
        throw std::domain_error(std::string(what) + ": element belongs to a different ring instance");
}
}  // namespace detail

/// The universal valuation itself: a ring element to the span it generates.
inline GammaElement nu_universal(const FiniteRing& r, Index a) {
    if (a >= r.n()) throw std::domain_error("nu_universal: element out of range");
    return {r.id(), zspan(r, IndexSet::single(a))};
}

inline IndexSet subgroup_join(const FiniteRing& r, const IndexSet& a, const IndexSet& b) {
    return zspan(r, set_union(a, b));
}

inline IndexSet subgroup_product(const FiniteRing& r, const IndexSet& a, const IndexSet& b) {
    IndexSet products;
    for (Index x : a)
        for (Index y : b) products.insert(r.mul(x, y));
    return zspan(r, products);
}

inline GammaElement gamma_add(const FiniteRing& r, const GammaElement& a, const GammaElement& b) {
    detail::require_same_ring(r, a, "gamma_add");
    detail::require_same_ring(r, b, "gamma_add");
    return {r.id(), subgroup_join(r, a.elems, b.elems)};
}

inline GammaElement gamma_mul(const FiniteRing& r, const GammaElement& a, const GammaElement& b) {
    detail::require_same_ring(r, a, "gamma_mul");
    detail::require_same_ring(r, b, "gamma_mul");
    return {r.id(), subgroup_product(r, a.elems, b.elems)};
}

/// Class of a formal sum of generators x_g, g in gens; gens = {} gives 0.
inline GammaElement hat_gamma_add_class(const FiniteRing& r, const IndexSet& gens) {
    for (Index g : gens)
        if (g >= r.n()) throw std::domain_error("hat_gamma_add_class: generator out of range");
    return {r.id(), zspan(r, gens)};
}

/**
 * Greedy minimal-index generating set: repeatedly adjoin the smallest
 * uncovered member.  Deterministic, and for the display format it picks
 * the same generators a human reading the tables would.
 */
inline std::vector<Index> span_generators(const FiniteRing& r, const IndexSet& sub) {
    std::vector<Index> gens;
    IndexSet covered = IndexSet::single(r.zero());
    while (covered != sub) {
        std::optional<Index> pick;
        for (Index e : sub)
            if (!covered.contains(e)) {
                pick = e;
                break;
            }
        if (!pick) throw std::domain_error("span_generators: set is not an additive subgroup");
        gens.push_back(*pick);
        covered = zspan(r, IndexSet(std::vector<Index>(gens)));
    }
    return gens;
}

namespace detail {

inline bool plain_label(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c))) return false;
    return true;
}

inline std::string x_token(const FiniteRing& r, Index g) {
    std::string lab = r.label(g);
    return plain_label(lab) ? "x_" + lab : "x_{" + lab + "}";
}

}  // namespace detail

/**
 * Display form: "0" and "1" for the two identities, "x_<label>" for other
 * single-generator spans, "[x_a+x_b+...]" otherwise.  Labels that are not
 * plain alphanumeric words are brace-wrapped (x_{i+j}), keeping the output
 * unambiguous for parse_gamma.
 */
inline std::string show_gamma(const FiniteRing& r, const IndexSet& sub) {
    if (sub == IndexSet::single(r.zero())) return "0";
    if (sub == zspan(r, IndexSet::single(r.one()))) return "1";
    std::vector<Index> gens = span_generators(r, sub);
    std::string body;
    for (std::size_t t = 0; t < gens.size(); ++t) {
        if (t) body += "+";
        body += detail::x_token(r, gens[t]);
    }
    return gens.size() == 1 ? body : "[" + body + "]";
}

inline std::string show_gamma(const FiniteRing& r, const GammaElement& g) {
    detail::require_same_ring(r, g, "show_gamma");
    return show_gamma(r, g.elems);
}

/**
 * Inverse of show_gamma.  Accepts "0", "1", a single x-token, or a
 * bracketed '+'-joined list of x-tokens; each token names a ring element
 * by label, by brace-wrapped label, or by raw index as "#<k>".
 */
inline IndexSet parse_gamma(const FiniteRing& r, const std::string& text) {
    auto syntax = [&](const std::string& why) {
        return std::invalid_argument("parse_gamma: " + why + " in '" + text + "'");
    };
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s == "0") return IndexSet::single(r.zero());
    if (s == "1") return zspan(r, IndexSet::single(r.one()));
    if (!s.empty() && s.front() == '[') {
        if (s.back() != ']') throw syntax("unbalanced brackets");
        s = s.substr(1, s.size() - 2);
    }
    if (s.empty()) throw syntax("empty element");
    std::vector<std::string> parts;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '{') ++depth;
        if (c == '}') --depth;
        if (c == '+' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    IndexSet gens;
    for (const std::string& part : parts) {
        if (part.rfind("x_", 0) != 0) throw syntax("expected x_<element>, got '" + part + "'");
        std::string name = part.substr(2);
        if (name.size() >= 2 && name.front() == '{' && name.back() == '}')
            name = name.substr(1, name.size() - 2);
        if (name.empty()) throw syntax("empty element name");
        if (name.front() == '#') {
            Index idx = static_cast<Index>(std::stoul(name.substr(1)));
            if (idx >= r.n()) throw syntax("index out of range");
            gens.insert(idx);
            continue;
        }
        if (auto idx = r.index_of_label(name)) {
            gens.insert(*idx);
            continue;
        }
        if (detail::plain_label(name) && std::isdigit(static_cast<unsigned char>(name.front()))) {
            std::size_t pos = 0;
            unsigned long v = std::stoul(name, &pos);
            if (pos == name.size() && v < r.n()) {
                gens.insert(static_cast<Index>(v));
                continue;
            }
        }
        throw syntax("unknown element '" + name + "'");
    }
    return zspan(r, gens);
}

/**
 * On-the-fly view of the universal valuation semiring: operations recompute
 * spans instead of using precomputed tables.  Satisfies the Semiring
 * concept, so the generic law and valuation checkers apply directly.
 */
struct GammaView {
    FiniteRing R;

    using Value = GammaElement;

    Value add(const Value& a, const Value& b) const { return gamma_add(R, a, b); }
    Value mul(const Value& a, const Value& b) const { return gamma_mul(R, a, b); }
    Value zero() const { return {R.id(), IndexSet::single(R.zero())}; }
    Value one() const { return {R.id(), zspan(R, IndexSet::single(R.one()))}; }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    std::string show(const Value& a) const { return show_gamma(R, a.elems); }

    Value literal(std::int64_t k) const { return k == 0 ? zero() : one(); }
    std::optional<Value> try_label(const std::string& name) const {
        try {
            return Value{R.id(), parse_gamma(R, name)};
        } catch (const std::invalid_argument&) {
            return std::nullopt;
        }
    }
};

/// Subgroup display order: smaller subgroups first, then lexicographic.
inline bool subgroup_order(const IndexSet& a, const IndexSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

/**
 * Fully enumerated universal valuation semiring: every additive subgroup
 * of the ring, ordered by subgroup_order, with complete operation tables.
 * The table construction revalidates every semiring law.
 */
struct GammaSemiring {
    FiniteRing ring;  // n() == 0 when the table was loaded from a file
    std::size_t ring_n = 0;
    std::vector<IndexSet> subgroups;
    FiniteSemiring table;

    std::size_t size() const { return subgroups.size(); }

    Index index_of(const IndexSet& sub) const {
        auto it = std::lower_bound(subgroups.begin(), subgroups.end(), sub, subgroup_order);
        if (it == subgroups.end() || !(*it == sub))
            throw std::domain_error("GammaSemiring: subset is not a subgroup of this ring");
        return static_cast<Index>(it - subgroups.begin());
    }

    Index index_of(const GammaElement& g) const {
        if (ring.n() == 0 || g.ring_id != ring.id())
            throw std::domain_error("GammaSemiring: element belongs to a different ring instance");
        return index_of(g.elems);
    }

    GammaElement element_at(Index i) const {
        if (i >= subgroups.size()) throw std::domain_error("GammaSemiring: index out of range");
        return {ring.id(), subgroups[i]};
    }

    std::string show(Index i) const {
        if (i >= subgroups.size()) throw std::domain_error("GammaSemiring: index out of range");
        return ring.n() ? show_gamma(ring, subgroups[i]) : "g" + std::to_string(i);
    }
};

/**
 * Collects all additive subgroups by closing singleton spans under join,
 * then builds the span-of-union / span-of-Minkowski-product tables.
 * Every subgroup is the join of the singleton spans of its members, so
 * the worklist reaches all of them.
 */
inline GammaSemiring enumerate_gamma(const FiniteRing& r) {
    if (r.n() == 0) throw std::domain_error("enumerate_gamma: empty ring");
    if (r.n() > 256) throw std::domain_error("enumerate_gamma: carrier larger than 256 elements");

    std::vector<IndexSet> all;
    std::map<IndexSet, char> seen;
    auto add_sub = [&](IndexSet s) {
        if (seen.emplace(s, 1).second) {
            all.push_back(std::move(s));
            if (all.size() > 4096) throw std::domain_error("enumerate_gamma: more than 4096 subgroups");
        }
    };
    add_sub(IndexSet::single(r.zero()));
    for (Index a = 0; a < r.n(); ++a) add_sub(zspan(r, IndexSet::single(a)));
    for (std::size_t i = 0; i < all.size(); ++i) {
        const IndexSet base = all[i];
        for (Index a = 0; a < r.n(); ++a) {
            if (base.contains(a)) continue;
            IndexSet gens = base;
            gens.insert(a);
            add_sub(zspan(r, gens));
        }
    }
    std::sort(all.begin(), all.end(), subgroup_order);

    auto idx_of = [&](const IndexSet& s) {
        auto it = std::lower_bound(all.begin(), all.end(), s, subgroup_order);
        if (it == all.end() || !(*it == s))
            throw std::domain_error("enumerate_gamma: operation left the subgroup family");
        return static_cast<Index>(it - all.begin());
    };
    const std::size_t k = all.size();
    std::vector<std::vector<Index>> add(k, std::vector<Index>(k));
    std::vector<std::vector<Index>> mul(k, std::vector<Index>(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            add[i][j] = idx_of(subgroup_join(r, all[i], all[j]));
            mul[i][j] = idx_of(subgroup_product(r, all[i], all[j]));
        }
    Index zero = idx_of(IndexSet::single(r.zero()));
    Index one = idx_of(zspan(r, IndexSet::single(r.one())));

    GammaSemiring g;
    g.ring = r;
    g.ring_n = r.n();
    g.subgroups = std::move(all);
    g.table = semiring_from_tables(k, std::move(add), std::move(mul), zero, one);
    return g;
}

/**
 * Table file: one "g<k>:" line per subgroup (sorted ring-element indices),
 * then "add:" and "mul:" blocks of index rows.  The identities are not
 * stored; they are recovered from the tables on read.
 */
inline void write_gamma(std::ostream& out, const GammaSemiring& g) {
    for (std::size_t i = 0; i < g.subgroups.size(); ++i) {
        out << "g" << i << ":";
        for (Index e : g.subgroups[i]) out << " " << e;
        out << "\n";
    }
    const std::size_t k = g.size();
    out << "add:\n";
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) out << (j ? " " : "") << g.table.add_table[i][j];
        out << "\n";
    }
    out << "mul:\n";
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) out << (j ? " " : "") << g.table.mul_table[i][j];
        out << "\n";
    }
}

inline GammaSemiring read_gamma(std::istream& in) {
    std::string line;
    std::vector<IndexSet> subs;
    while (std::getline(in, line)) {
        if (line == "add:") break;
        std::istringstream row(line);
        std::string tag;
        row >> tag;
        if (tag != "g" + std::to_string(subs.size()) + ":")
            throw std::domain_error("read_gamma: expected g" + std::to_string(subs.size()) + ": line");
        std::vector<Index> elems;
        unsigned v;
        while (row >> v) elems.push_back(static_cast<Index>(v));
        if (elems.empty()) throw std::domain_error("read_gamma: empty subgroup line");
        IndexSet s(elems);
        if (s.indices() != elems) throw std::domain_error("read_gamma: subgroup line not sorted");
        subs.push_back(std::move(s));
    }
    const std::size_t k = subs.size();
    if (k == 0 || line != "add:") throw std::domain_error("read_gamma: missing subgroup list or add block");
    for (std::size_t i = 0; i + 1 < k; ++i)
        if (!subgroup_order(subs[i], subs[i + 1])) throw std::domain_error("read_gamma: subgroups out of order");

    auto block = [&](const char* what) {
        std::vector<std::vector<Index>> t(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (!std::getline(in, line)) throw std::domain_error(std::string("read_gamma: truncated ") + what);
            std::istringstream row(line);
            unsigned v;
            while (row >> v) t[i].push_back(static_cast<Index>(v));
        }
        return t;
    };
    auto add = block("add block");
    if (!std::getline(in, line) || line != "mul:") throw std::domain_error("read_gamma: missing mul block");
    auto mul = block("mul block");

    validate_tables_shape(k, add, "read_gamma");
    validate_tables_shape(k, mul, "read_gamma");
    std::optional<Index> zero, one;
    for (Index e = 0; e < k; ++e) {
        bool is_zero = true, is_one = true;
        for (Index j = 0; j < k; ++j) {
            if (add[e][j] != j) is_zero = false;
            if (mul[e][j] != j || mul[j][e] != j) is_one = false;
        }
        if (is_zero) zero = e;
        if (is_one) one = e;
    }
    if (!zero || !one) throw std::domain_error("read_gamma: tables have no identity");

    GammaSemiring g;
    g.subgroups = std::move(subs);
    g.ring_n = 0;
    for (const IndexSet& s : g.subgroups)
        for (Index e : s) g.ring_n = std::max<std::size_t>(g.ring_n, e + 1);
    g.table = semiring_from_tables(k, std::move(add), std::move(mul), *zero, *one);
    return g;
}

enum class ValuationMode { Multiplicative, Supermultiplicative };

/**
 * Per-axiom verdicts for a candidate valuation.  Superadditivity and the
 * supermultiplicative variant are tested in equational form: x >= y is
 * y + x = y under the natural order.
 */
struct ValuationReport {
    bool unital = true;
    bool multiplicative = true;
    bool superadditive = true;
    bool supermultiplicative = true;
    bool nondegenerate = true;
    std::string unital_witness;
    std::string multiplicative_witness;
    std::string superadditive_witness;
    std::string supermultiplicative_witness;
    std::string nondegenerate_witness;

    bool is_valuation(ValuationMode mode) const {
        bool m = mode == ValuationMode::Multiplicative ? multiplicative : supermultiplicative;
        return unital && m && superadditive;
    }
};

namespace detail {

inline void val_fail(bool& flag, std::string& witness, const std::string& msg) {
    if (flag) {
        flag = false;
        witness = msg;
    }
}

template <Semiring S>
void val_check_pair(ValuationReport& rep, const S& s, const std::string& la, const std::string& lb,
                    const typename S::Value& na, const typename S::Value& nb,
                    const typename S::Value& nab, const typename S::Value& nsum) {
    auto prod = s.mul(na, nb);
    if (!s.eq(nab, prod))
        val_fail(rep.multiplicative, rep.multiplicative_witness,
                 "nu(ab) != nu(a)nu(b) at (" + la + "," + lb + "): " + s.show(nab) + " vs " +
                     s.show(prod));
    if (!s.eq(s.add(prod, nab), prod))
        val_fail(rep.supermultiplicative, rep.supermultiplicative_witness,
                 "nu(ab) >= nu(a)nu(b) fails at (" + la + "," + lb + "): " + s.show(nab) + " vs " +
                     s.show(prod));
    auto meet = s.add(na, nb);
    if (!s.eq(s.add(meet, nsum), meet))
        val_fail(rep.superadditive, rep.superadditive_witness,
                 "nu(a+b) >= nu(a)+nu(b) fails at (" + la + "," + lb + "): " + s.show(nsum) +
                     " vs " + s.show(meet));
}

}  // namespace detail

/// Exhaustive valuation-axiom sweep of nu : R -> S over a finite ring.
template <Semiring S, typename F>
ValuationReport check_valuation(const FiniteRing& r, const S& s, F&& nu) {
    ValuationReport rep;
    std::vector<typename S::Value> v;
    v.reserve(r.n());
    for (Index a = 0; a < r.n(); ++a) v.push_back(nu(a));

    if (!s.eq(v[r.zero()], s.zero()))
        detail::val_fail(rep.unital, rep.unital_witness, "nu(0) != 0");
    if (!s.eq(v[r.one()], s.one()))
        detail::val_fail(rep.unital, rep.unital_witness, "nu(1) != 1");
    if (!s.eq(v[r.neg(r.one())], s.one()))
        detail::val_fail(rep.unital, rep.unital_witness, "nu(-1) != 1");
    for (Index a = 0; a < r.n(); ++a) {
        if (a != r.zero() && s.eq(v[a], s.zero()))
            detail::val_fail(rep.nondegenerate, rep.nondegenerate_witness,
                             "nu(" + r.label(a) + ") = 0 but " + r.label(a) + " != 0");
        for (Index b = 0; b < r.n(); ++b)
            detail::val_check_pair(rep, s, r.label(a), r.label(b), v[a], v[b], v[r.mul(a, b)],
                                   v[r.add(a, b)]);
    }
    return rep;
}

/// Sampled valuation-axiom check of nu : Q -> S on random rational pairs.
template <Semiring S, typename F, typename Gen>
ValuationReport check_valuation_sampled(const S& s, F&& nu, Gen&& gen, std::size_t cases = 1000) {
    ValuationReport rep;
    if (!s.eq(nu(Rational(0)), s.zero()))
        detail::val_fail(rep.unital, rep.unital_witness, "nu(0) != 0");
    if (!s.eq(nu(Rational(1)), s.one()))
        detail::val_fail(rep.unital, rep.unital_witness, "nu(1) != 1");
    if (!s.eq(nu(Rational(-1)), s.one()))
        detail::val_fail(rep.unital, rep.unital_witness, "nu(-1) != 1");
    for (std::size_t i = 0; i < cases; ++i) {
        Rational a = gen();
        Rational b = gen();
        if (!a.is_zero() && s.eq(nu(a), s.zero()))
            detail::val_fail(rep.nondegenerate, rep.nondegenerate_witness,
                             "nu(" + a.str() + ") = 0 but " + a.str() + " != 0");
        detail::val_check_pair(rep, s, a.str(), b.str(), nu(a), nu(b), nu(a * b), nu(a + b));
    }
    return rep;
}

/// Whether nu(a)+nu(b), nu(a+b)+nu(a) and nu(a+b)+nu(b) all coincide.
template <Semiring S, typename F>
bool meet_of_sum_check(const FiniteRing& r, const S& s, F&& nu, Index a, Index b) {
    auto va = nu(a);
    auto vb = nu(b);
    auto vs = nu(r.add(a, b));
    auto meet = s.add(va, vb);
    return s.eq(meet, s.add(vs, va)) && s.eq(meet, s.add(vs, vb));
}

template <Semiring S, typename F>
bool meet_of_sum_check(const S& s, F&& nu, const Rational& a, const Rational& b) {
    auto va = nu(a);
    auto vb = nu(b);
    auto vs = nu(a + b);
    auto meet = s.add(va, vb);
    return s.eq(meet, s.add(vs, va)) && s.eq(meet, s.add(vs, vb));
}

/**
 * Universality: any valuation nu : R -> S factors through the universal
 * semiring as [A] -> sum over A of nu(a).  Verifies that this factoring
 * map is a semiring homomorphism on the full enumerated table.
 */
template <Semiring S, typename F>
HomReport check_factoring_hom(const GammaSemiring& g, const S& s, F&& nu) {
    std::vector<typename S::Value> image;
    image.reserve(g.size());
    for (const IndexSet& sub : g.subgroups) {
        typename S::Value acc = s.zero();
        for (Index a : sub) acc = s.add(acc, nu(a));
        image.push_back(acc);
    }
    return check_homomorphism(g.table, s, [&](Index i) { return image[i]; },
                              carrier_elements(g.table));
}

/// Induced map on universal semirings: a subgroup to the span of its image.
struct GammaFunctorMap {
    std::vector<Index> map;
    HomReport report;
};

inline GammaFunctorMap gamma_functor_map(const GammaSemiring& src, const GammaSemiring& dst,
                                         const RingHom& h) {
    if (src.ring.n() == 0 || dst.ring.n() == 0)
        throw std::domain_error("gamma_functor_map: tables lack their parent rings");
    if (h.src_id != src.ring.id() || h.dst_id != dst.ring.id())
        throw std::domain_error("gamma_functor_map: homomorphism does not connect these rings");
    GammaFunctorMap out;
    out.map.reserve(src.size());
    for (const IndexSet& sub : src.subgroups) {
        IndexSet image;
        for (Index a : sub) image.insert(h(a));
        out.map.push_back(dst.index_of(zspan(dst.ring, image)));
    }
    out.report = check_homomorphism(src.table, dst.table, [&](Index i) { return out.map[i]; },
                                    carrier_elements(src.table));
    return out;
}

/**
 * The two ways to abelianize: quotient the universal semiring by the
 * congruence AB ~ BA, or take the universal semiring of the abelianized
 * ring.  Builds both and verifies the canonical map between them is a
 * semiring isomorphism.
 */
struct AbCorrespondence {
    FiniteRing ab_ring;
    RingHom projection;
    GammaSemiring gamma_r;
    GammaSemiring gamma_ab;
    FiniteCongruence commuting;
    FiniteSemiring ab_of_gamma;
    std::vector<Index> map;  // congruence class -> subgroup index in gamma_ab
    bool well_defined = true;
    bool bijective = true;
    HomReport hom;
    std::string witness;

    bool isomorphic() const { return well_defined && bijective && hom.ok(); }
};

inline AbCorrespondence abelianization_correspondence(const FiniteRing& r) {
    AbCorrespondence out;
    out.gamma_r = enumerate_gamma(r);
    const FiniteSemiring& t = out.gamma_r.table;

    std::vector<std::pair<Index, Index>> pairs;
    pairs.reserve(t.n * t.n);
    for (Index i = 0; i < t.n; ++i)
        for (Index j = 0; j < t.n; ++j) pairs.emplace_back(t.mul(i, j), t.mul(j, i));
    out.commuting = congruence_closure(t, pairs);
    out.ab_of_gamma = quotient_semiring(t, out.commuting);

    auto [ab, pi] = abelianize_ring(r);
    out.ab_ring = std::move(ab);
    out.projection = std::move(pi);
    out.gamma_ab = enumerate_gamma(out.ab_ring);

    out.map.assign(out.commuting.size(), 0);
    for (std::size_t c = 0; c < out.commuting.size(); ++c) {
        std::optional<Index> target;
        for (Index member : out.commuting.classes[c]) {
            IndexSet image;
            for (Index a : out.gamma_r.subgroups[member]) image.insert(out.projection(a));
            Index gi = out.gamma_ab.index_of(zspan(out.ab_ring, image));
            if (!target) {
                target = gi;
            } else if (*target != gi) {
                out.well_defined = false;
                if (out.witness.empty())
                    out.witness = "class " + std::to_string(c) + " maps to both g" +
                                  std::to_string(*target) + " and g" + std::to_string(gi);
            }
        }
        out.map[c] = *target;
    }

    if (out.commuting.size() != out.gamma_ab.size()) {
        out.bijective = false;
        if (out.witness.empty())
            out.witness = "side sizes differ: " + std::to_string(out.commuting.size()) + " vs " +
                          std::to_string(out.gamma_ab.size());
    } else {
        std::vector<Index> sorted = out.map;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            out.bijective = false;
            if (out.witness.empty()) out.witness = "canonical map is not injective";
        }
    }
    out.hom = check_homomorphism(out.ab_of_gamma, out.gamma_ab.table,
                                 [&](Index c) { return out.map[c]; },
                                 carrier_elements(out.ab_of_gamma));
    if (!out.hom.ok() && out.witness.empty()) out.witness = out.hom.witness;
    return out;
}

}  // namespace valuon
