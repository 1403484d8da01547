#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "valuon/expression.hpp"
#include "valuon/gamma.hpp"
#include "valuon/qval.hpp"
#include "valuon/ring.hpp"
#include "valuon/rng.hpp"
#include "valuon/tropical.hpp"

using namespace valuon;

namespace {

FiniteRing r8() { return upper_triangular_ring(cyclic_ring(2), 2); }

template <ExprContext C>
bool expr_eq(const C& ctx, const Expression<C>& a, const Expression<C>& b) {
    if (a.monomials.size() != b.monomials.size()) return false;
    for (std::size_t i = 0; i < a.monomials.size(); ++i)
        if (!monomial_eq(ctx, a.monomials[i], b.monomials[i])) return false;
    return true;
}

template <ExprContext C>
void check_round_trip(const C& ctx, const std::string& src, const std::vector<std::string>& vars,
                      const std::string& expect, bool commutative = false) {
    Expression<C> e = parse_expression(src, ctx, vars, commutative);
    std::string shown = to_string(ctx, e);
    CHECK(shown == expect);
    Expression<C> back = parse_expression(shown, ctx, vars, commutative);
    CHECK(expr_eq(ctx, e, back));
}

// Wraps the subset semiring on a fixed point count with carrier
// enumeration so the exhaustive law checker applies.
struct EnumeratedZeroSets {
    ZeroSetSemiring s;

    using Value = IndexSet;
    Value add(const Value& a, const Value& b) const { return s.add(a, b); }
    Value mul(const Value& a, const Value& b) const { return s.mul(a, b); }
    Value zero() const { return s.zero(); }
    Value one() const { return s.one(); }
    bool eq(const Value& a, const Value& b) const { return s.eq(a, b); }
    std::string show(const Value& a) const { return s.show(a); }

    std::size_t size() const { return std::size_t{1} << s.points; }
    Value element(std::size_t mask) const {
        IndexSet out;
        for (std::size_t i = 0; i < s.points; ++i)
            if (mask & (std::size_t{1} << i)) out.insert(static_cast<Index>(i));
        return out;
    }
};

}  // namespace

TEST_CASE("parsing and printing round-trip") {
    RingExprContext r{r8()};
    check_round_trip(r, "(j+k)*z^2 + z*k + j", {"z"}, "(j+k)*z^2 + z*k + j");
    check_round_trip(r, "(j + k)z^2 + z*k + j", {"z"}, "(j+k)*z^2 + z*k + j");
    check_round_trip(r, "i*z + k*z", {"z"}, "i*z + k*z");
    check_round_trip(r, "#6*z", {"z"}, "(j+k)*z");

    RationalExprContext q;
    check_round_trip(q, "x^3*12*x - 2*x + x*2", {"x"}, "x^3*12*x - 2*x + x*2");
    check_round_trip(q, "-x", {"x"}, "-x");
    check_round_trip(q, "x*x - 2", {"x"}, "x^2 - 2");
    check_round_trip(q, "3x^2", {"x"}, "3*x^2");
    check_round_trip(q, "(2-2)*x + 5", {"x"}, "5");

    SemiringExprContext<TropicalSemiring> t{TropicalSemiring{}};
    check_round_trip(t, "2*z^2 + z*1 + inf", {"z"}, "2*z^2 + z*1");
    check_round_trip(t, "-3*z", {"z"}, "-3*z");

    RingExprContext z4{cyclic_ring(4)};
    check_round_trip(z4, "(1+1)*z", {"z"}, "2*z");
    check_round_trip(z4, "z^2 + 3", {"z"}, "z^2 + 3");
    check_round_trip(z4, "-z", {"z"}, "3*z");
    RingExprContext z2{cyclic_ring(2)};
    check_round_trip(z2, "(1+1)*z", {"z"}, "0");
    CHECK(to_string(z2, expr_zero(z2)) == "0");
}

TEST_CASE("parse errors carry positions") {
    RingExprContext r{r8()};
    CHECK_THROWS_WITH(parse_expression("z + q", r, {"z"}),
                      Catch::Matchers::StartsWith("parse error at 4"));
    CHECK_THROWS_AS(parse_expression("z + ", r, {"z"}), std::invalid_argument);
    CHECK_THROWS_AS(parse_expression("x_{i+j", r, {"z"}), std::invalid_argument);
    CHECK_THROWS_AS(parse_expression("(z + j", r, {"z"}), std::invalid_argument);
    CHECK_THROWS_AS(parse_expression("z^1000", r, {"z"}), std::invalid_argument);

    SemiringExprContext<TropicalSemiring> t{TropicalSemiring{}};
    CHECK_THROWS_AS(parse_expression("1 - z", t, {"z"}), std::invalid_argument);
    CHECK(parse_expression("-3", t, {}).monomials.size() == 1);
}

TEST_CASE("evaluation over the upper-triangular ring") {
    FiniteRing r = r8();
    RingExprContext ctx{r};
    Expression<RingExprContext> f = parse_expression("(j+k)*z^2 + z*k + j", ctx, {"z"});

    auto at = [&](Index z) { return evaluate(ctx, f, {{"z", z}}); };
    CHECK(at(5) == r.zero());  // 1
    CHECK(at(2) == r.zero());  // j
    CHECK(at(3) == r.zero());  // k
    CHECK(at(4) == r.zero());  // i+j
    CHECK(at(1) == 2);         // f(i) = j
    CHECK(at(0) == 2);         // f(0) = j

    std::vector<std::vector<Index>> rts = roots(ctx, f);
    REQUIRE(rts.size() == 4);
    std::vector<Index> flat;
    for (const auto& t : rts) flat.push_back(t.at(0));
    CHECK(flat == std::vector<Index>{2, 3, 4, 5});

    CHECK_THROWS_AS(evaluate(ctx, f, {}), std::invalid_argument);
}

TEST_CASE("commutative mode merges reordered words") {
    RingExprContext z5{cyclic_ring(5)};
    Expression<RingExprContext> c = parse_expression("z*w + w*z", z5, {"z", "w"}, true);
    CHECK(to_string(z5, c) == "2*w*z");
    Expression<RingExprContext> n = parse_expression("z*w + w*z", z5, {"z", "w"}, false);
    CHECK(n.monomials.size() == 2);
    for (Index a = 0; a < 5; ++a)
        for (Index b = 0; b < 5; ++b) {
            std::map<std::string, Index> at{{"z", a}, {"w", b}};
            CHECK(evaluate(z5, c, at) == evaluate(z5, n, at));
        }
    CHECK_THROWS_AS(expr_add(z5, c, n), std::domain_error);
}

TEST_CASE("coefficient-wise images keep the word structure") {
    FiniteRing r = r8();
    RingExprContext ctx{r};
    Expression<RingExprContext> f = parse_expression("(j+k)*z^2 + z*k + j", ctx, {"z"});

    GammaView gv{r};
    auto trop = tropicalize(ctx, f, gv, [&](Index a) { return nu_universal(r, a); });
    CHECK_FALSE(trop.degenerate);
    CHECK(to_string(trop.ctx, trop.expr) == "x_{j+k}*z^2 + z*x_k + x_j");

    RationalExprContext q;
    Expression<RationalExprContext> g = parse_expression("x^3*12*x - 2*x + x*2", q, {"x"});
    TropicalSemiring ts;
    auto trop2 = tropicalize(q, g, ts, [](const Rational& c) { return nu_padic(2, c); });
    CHECK_FALSE(trop2.degenerate);
    CHECK(to_string(trop2.ctx, trop2.expr) == "x^3*2*x + 1*x + x*1");

    auto dead = tropicalize(ctx, f, ts, [](Index) { return TropicalValue::infinity(); });
    CHECK(dead.degenerate);
    CHECK(dead.expr.monomials.empty());
}

TEST_CASE("crease points of the worked example") {
    FiniteRing r = r8();
    RingExprContext rctx{r};
    GammaView gv{r};
    Expression<RingExprContext> f = parse_expression("(j+k)*z^2 + z*k + j", rctx, {"z"});
    auto trop = tropicalize(rctx, f, gv, [&](Index a) { return nu_universal(r, a); });

    auto report_at = [&](const GammaElement& z) {
        return is_crease_point(trop.ctx, trop.expr, {{"z", z}});
    };

    // verdict for z = [x_a], every a in ring order
    std::vector<bool> expect = {false, false, true, true, true, true, false, false};
    for (Index a = 0; a < r.n(); ++a) {
        auto rep = report_at(nu_universal(r, a));
        INFO("z = x_" << r.label(a));
        CHECK(rep.crease == expect[a]);
    }

    // at z = [x_{i+j+k}] only the constant term is deletable-sensitive
    auto rep = report_at(nu_universal(r, 7));
    REQUIRE(rep.deletion_sums.size() == 3);
    CHECK(gv.eq(rep.deletion_sums[2], nu_universal(r, 6)));
    CHECK(gv.eq(rep.total, hat_gamma_add_class(r, IndexSet({2, 6}))));

    // enumerating over the singleton values recovers the crease list
    std::vector<GammaElement> domain;
    for (Index a = 0; a < r.n(); ++a) domain.push_back(nu_universal(r, a));
    auto crease = crease_points(trop.ctx, trop.expr, domain);
    REQUIRE(crease.size() == 4);
    CHECK(crease[0] == nu_universal(r, 2));
    CHECK(crease[1] == nu_universal(r, 3));
    CHECK(crease[2] == nu_universal(r, 4));
    CHECK(crease[3] == nu_universal(r, 5));

    // over the whole class semiring the span of {x_i, x_j, x_k} is a crease
    // point even though no singleton inside it is one
    GammaElement full = hat_gamma_add_class(r, IndexSet({1, 2, 3}));
    CHECK(full.elems.size() == 8);
    CHECK(report_at(full).crease);

    CHECK_THROWS_AS(is_crease_point(trop.ctx, expr_zero(trop.ctx), {}), std::domain_error);
}

TEST_CASE("on a total order a crease is a twice-attained minimum") {
    TropicalSemiring ts;
    SemiringExprContext<TropicalSemiring> ctx{ts};
    std::mt19937_64 gen(seed_from_env());
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> deg(0, 3);
    for (int trial = 0; trial < 300; ++trial) {
        Expression<SemiringExprContext<TropicalSemiring>> f;
        int terms = 1 + static_cast<int>(gen() % 3);
        for (int t = 0; t < terms; ++t) {
            Monomial<TropicalValue> m;
            m.word.emplace_back(TropicalValue(coef(gen)));
            for (int d = deg(gen); d > 0; --d) m.word.emplace_back(std::string("z"));
            f.monomials.push_back(std::move(m));
        }
        expr_normalize(ctx, f);
        if (f.monomials.empty()) continue;
        auto rep = is_crease_point(ctx, f, {{"z", TropicalValue(coef(gen))}});
        CHECK(rep.crease == (rep.min_multiplicity >= 2));
    }
}

TEST_CASE("roots land on crease points of the image") {
    // one coefficient per distinct variable word: the canonical shape the
    // statement is about (duplicate words would be summed by the ring but
    // deduplicated by the idempotent image)
    std::mt19937_64 gen(seed_from_env());
    for (const FiniteRing& r : {r8(), cyclic_ring(4)}) {
        RingExprContext rctx{r};
        GammaView gv{r};
        auto nu = [&](Index a) { return nu_universal(r, a); };
        std::vector<std::string> pool = {"z", "w"};
        for (int trial = 0; trial < 250; ++trial) {
            std::size_t nvars = 1 + gen() % 2;
            std::vector<std::vector<std::string>> words;
            std::size_t terms = 1 + gen() % 3;
            for (std::size_t t = 0; t < terms; ++t) {
                std::vector<std::string> w;
                for (std::size_t d = gen() % 4; d > 0; --d) w.push_back(pool[gen() % nvars]);
                if (std::find(words.begin(), words.end(), w) == words.end())
                    words.push_back(std::move(w));
            }
            Expression<RingExprContext> f;
            for (const auto& w : words) {
                Monomial<Index> m;
                m.word.emplace_back(static_cast<Index>(gen() % r.n()));
                for (const auto& v : w) m.word.emplace_back(v);
                f.monomials.push_back(std::move(m));
            }
            expr_normalize(rctx, f);
            RootCreaseReport rep = root_crease_check(rctx, f, gv, nu);
            INFO(to_string(rctx, f) << ": " << rep.witness);
            CHECK(rep.ok());
        }
    }
}

TEST_CASE("images of values dominate the image polynomial") {
    FiniteRing r = r8();
    RingExprContext rctx{r};
    GammaView gv{r};
    auto nu = [&](Index a) { return nu_universal(r, a); };
    std::mt19937_64 gen(seed_from_env());
    for (int trial = 0; trial < 200; ++trial) {
        Expression<RingExprContext> f;
        std::size_t terms = 1 + gen() % 3;
        for (std::size_t t = 0; t < terms; ++t) {
            Monomial<Index> m;
            m.word.emplace_back(static_cast<Index>(gen() % r.n()));
            for (std::size_t d = gen() % 3; d > 0; --d) m.word.emplace_back(std::string("z"));
            f.monomials.push_back(std::move(m));
        }
        expr_normalize(rctx, f);
        auto trop = tropicalize(rctx, f, gv, nu);
        if (trop.expr.monomials.empty()) continue;
        for (Index a = 0; a < r.n(); ++a) {
            GammaElement tv = evaluate(trop.ctx, trop.expr, {{"z", nu(a)}});
            GammaElement fv = nu(evaluate(rctx, f, {{"z", a}}));
            CHECK(gv.eq(gv.add(tv, fv), tv));
        }
    }
}

TEST_CASE("solution sets form an idempotent semiring") {
    EnumeratedZeroSets zs{ZeroSetSemiring{4}};
    LawReport laws = check_semiring_laws(zs);
    INFO(laws.witness);
    CHECK(laws.ok());
    CHECK(check_idempotent(zs));
    for (std::size_t i = 0; i < zs.size(); ++i)
        for (std::size_t j = 0; j < zs.size(); ++j) {
            IndexSet a = zs.element(i), b = zs.element(j);
            bool subset = std::includes(b.begin(), b.end(), a.begin(), a.end());
            CHECK(leq(zs, a, b) == subset);
        }
}

TEST_CASE("solution sets behave like a valuation on expressions") {
    ZeroSetSemiring zs{5};
    FiniteRing z5 = cyclic_ring(5);
    RingExprContext ctx{z5};
    std::mt19937_64 gen(seed_from_env());
    auto random_expr = [&]() {
        Expression<RingExprContext> f;
        std::size_t terms = 1 + gen() % 3;
        for (std::size_t t = 0; t < terms; ++t) {
            Monomial<Index> m;
            m.word.emplace_back(static_cast<Index>(gen() % 5));
            for (std::size_t d = gen() % 3; d > 0; --d) m.word.emplace_back(std::string("z"));
            f.monomials.push_back(std::move(m));
        }
        expr_normalize(ctx, f);
        return f;
    };
    auto nu = [&](const Expression<RingExprContext>& f) { return zero_set(ctx, f, {"z"}); };
    for (int trial = 0; trial < 500; ++trial) {
        auto f = random_expr();
        auto g = random_expr();
        // over a field, a product vanishes exactly where a factor does
        CHECK(nu(expr_mul(ctx, f, g)) == zs.mul(nu(f), nu(g)));
        // a sum vanishes wherever both summands do
        IndexSet meet = zs.add(nu(f), nu(g));
        CHECK(zs.add(meet, nu(expr_add(ctx, f, g))) == meet);
    }

    // zero divisors break multiplicativity but not the inequality
    FiniteRing z6 = cyclic_ring(6);
    RingExprContext c6{z6};
    auto two = expr_constant(c6, Index{2});
    auto three = expr_constant(c6, Index{3});
    ZeroSetSemiring zs6{6};
    auto nu6 = [&](const Expression<RingExprContext>& f) { return zero_set(c6, f, {"z"}); };
    IndexSet prod = nu6(expr_mul(c6, two, three));
    IndexSet expected = zs6.mul(nu6(two), nu6(three));
    CHECK(prod != expected);
    CHECK(zs6.add(expected, prod) == expected);

    CHECK_THROWS_AS(zero_set(ctx, parse_expression("z*w", ctx, {"z", "w"}), {"z"}),
                    std::domain_error);
}

TEST_CASE("root tuples decode the assignment odometer") {
    FiniteRing z4 = cyclic_ring(4);
    RingExprContext ctx{z4};
    Expression<RingExprContext> f = parse_expression("z*w", ctx, {"z", "w"});
    auto rts = roots(ctx, f);
    CHECK(rts.size() == 8);
    CHECK(std::find(rts.begin(), rts.end(), std::vector<Index>{2, 2}) != rts.end());
    CHECK(std::find(rts.begin(), rts.end(), std::vector<Index>{1, 2}) == rts.end());

    Expression<RingExprContext> just_z = parse_expression("z", ctx, {"z"});
    IndexSet with_w = zero_set(ctx, just_z, {"z", "w"});
    CHECK(with_w == IndexSet({0, 1, 2, 3}));

    std::vector<std::string> many(8, "v");
    for (std::size_t i = 0; i < many.size(); ++i) many[i] += std::to_string(i);
    CHECK_THROWS_AS(zero_set(ctx, expr_variable(ctx, "v0"), many, 1000), std::domain_error);
}
