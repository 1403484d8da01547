#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>
#include <sstream>

#include "valuon/matrix.hpp"
#include "valuon/rng.hpp"
#include "valuon/semiring.hpp"

using namespace valuon;

namespace {

TropMatrix trop_mat(std::size_t n, std::initializer_list<TropicalValue> xs) {
    TropMatrix m(n, TropicalValue::infinity());
    std::copy(xs.begin(), xs.end(), m.a.begin());
    return m;
}

UltrametricCandidate candidate(std::size_t n, std::initializer_list<TropicalValue> xs) {
    UltrametricCandidate d(n);
    std::copy(xs.begin(), xs.end(), d.d.begin());
    return d;
}

const TropicalValue kInf = TropicalValue::infinity();

// Reference answer for the closure: enumerate every simple path and take
// the least over paths of the largest edge.  Exponential, so kept to n <= 6.
TropicalValue bottleneck_by_path_enumeration(const UltrametricCandidate& d, std::size_t src,
                                             std::size_t dst) {
    std::vector<char> used(d.n, 0);
    TropicalValue best = TropicalValue::infinity();
    std::function<void(std::size_t, TropicalValue)> dfs = [&](std::size_t at, TropicalValue worst) {
        if (at == dst) {
            best = trop_min(best, worst);
            return;
        }
        for (std::size_t nx = 0; nx < d.n; ++nx) {
            if (used[nx] || nx == at) continue;
            used[nx] = 1;
            dfs(nx, trop_max(worst, d.at(at, nx)));
            used[nx] = 0;
        }
    };
    used[src] = 1;
    dfs(src, TropicalValue(0));
    return best;
}

UltrametricCandidate random_candidate(std::mt19937_64& gen, std::size_t n) {
    UltrametricCandidate d(n);
    std::uniform_int_distribution<int> w(0, 5);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            TropicalValue v = (gen() % 8 == 0) ? kInf : TropicalValue(w(gen));
            d.at(i, j) = v;
            d.at(j, i) = v;
        }
    return d;
}

bool same_candidate(const UltrametricCandidate& a, const UltrametricCandidate& b) {
    if (a.n != b.n) return false;
    for (std::size_t i = 0; i < a.d.size(); ++i)
        if (a.d[i] != b.d[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("matrix arithmetic over the tropical semiring") {
    TropicalSemiring s;
    TropMatrix a = trop_mat(2, {TropicalValue(0), TropicalValue(1), kInf, TropicalValue(0)});
    CHECK(mat_eq(s, mat_mul(s, mat_identity(s, 2), a), a));
    CHECK(mat_eq(s, mat_mul(s, a, mat_identity(s, 2)), a));
    TropMatrix sq = mat_mul(s, a, a);
    CHECK(sq.at(0, 1) == TropicalValue(1));
    CHECK(sq.at(0, 0) == TropicalValue(0));
    CHECK(sq.at(1, 0).is_inf());
    CHECK_THROWS_AS(mat_mul(s, a, mat_identity(s, 3)), std::domain_error);
}

TEST_CASE("square matrices over a finite idempotent semiring form one") {
    MatrixSemiring<BooleanSemiring> ms{BooleanSemiring{}, 2};
    REQUIRE(ms.size() == 16);
    LawReport rep = check_semiring_laws(ms);
    INFO(rep.witness);
    CHECK(rep.ok());
    CHECK(check_idempotent(ms));
}

TEST_CASE("sampled laws for tropical matrices") {
    TropicalSemiring s;
    MatrixSemiring<TropicalSemiring> ms{s, 3};
    std::mt19937_64 gen(seed_from_env());
    std::uniform_int_distribution<int> w(-6, 6);
    auto sample = [&]() {
        TropMatrix m(3, kInf);
        for (auto& e : m.a)
            if (gen() % 4) e = TropicalValue(w(gen));
        return m;
    };
    LawReport rep = check_semiring_laws_sampled(ms, sample, 200);
    INFO(rep.witness);
    CHECK(rep.ok());
}

TEST_CASE("least fixed point of X = AX + I") {
    TropicalSemiring s;
    TropMatrix none(3, kInf);
    CHECK(mat_eq(s, least_fixed_point(s, none), mat_identity(s, 3)));

    MinMaxSemiring mm;
    MinMaxMatrix w(3, TropicalValue(0));
    w.at(0, 1) = w.at(1, 0) = TropicalValue(1);
    w.at(1, 2) = w.at(2, 1) = TropicalValue(2);
    w.at(0, 2) = w.at(2, 0) = TropicalValue(5);
    MinMaxMatrix star = least_fixed_point(mm, w);
    CHECK(star.at(0, 2) == TropicalValue(2));
    CHECK(star.at(0, 1) == TropicalValue(1));
    CHECK(star.at(0, 0) == TropicalValue(0));

    std::mt19937_64 gen(seed_from_env());
    std::uniform_int_distribution<int> pos(0, 9);
    for (int trial = 0; trial < 50; ++trial) {
        TropMatrix a(4, kInf);
        for (auto& e : a.a)
            if (gen() % 3) e = TropicalValue(pos(gen));
        TropMatrix x = least_fixed_point(s, a);
        CHECK(mat_eq(s, x, mat_add(s, mat_mul(s, a, x), mat_identity(s, 4))));
    }

    TropMatrix neg(2, kInf);
    neg.at(0, 1) = TropicalValue(-1);
    CHECK_THROWS_AS(least_fixed_point(s, neg), std::domain_error);
}

TEST_CASE("closure agrees with path enumeration") {
    std::mt19937_64 gen(seed_from_env());
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + gen() % 5;
        UltrametricCandidate d = random_candidate(gen, n);
        UltrametricCandidate closed = minimax_closure(d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) {
                    CHECK(closed.at(i, j) == TropicalValue(0));
                    continue;
                }
                CHECK(closed.at(i, j) == bottleneck_by_path_enumeration(d, i, j));
            }
    }
}

TEST_CASE("ultrametric verdicts and witnesses") {
    UltrametricCandidate two = candidate(2, {TropicalValue(0), TropicalValue(7),
                                             TropicalValue(7), TropicalValue(0)});
    CHECK(is_ultrametric(two).ultrametric);

    UltrametricCandidate good = candidate(3, {TropicalValue(0), TropicalValue(1), TropicalValue(2),
                                              TropicalValue(1), TropicalValue(0), TropicalValue(2),
                                              TropicalValue(2), TropicalValue(2), TropicalValue(0)});
    CHECK(is_ultrametric(good).ultrametric);

    UltrametricCandidate bad = candidate(3, {TropicalValue(0), TropicalValue(1), TropicalValue(3),
                                             TropicalValue(1), TropicalValue(0), TropicalValue(2),
                                             TropicalValue(3), TropicalValue(2), TropicalValue(0)});
    UltrametricReport rep = is_ultrametric(bad);
    CHECK_FALSE(rep.ultrametric);
    CHECK(rep.witness == "(0,1,2): 3 > max(1,2)");

    UltrametricCandidate negative(2);
    negative.at(0, 1) = negative.at(1, 0) = TropicalValue(-1);
    CHECK_THROWS_AS(is_ultrametric(negative), std::domain_error);

    UltrametricCandidate diag(2);
    diag.at(0, 0) = TropicalValue(1);
    CHECK_THROWS_AS(is_ultrametric(diag), std::domain_error);

    UltrametricCandidate asym(2);
    asym.at(0, 1) = TropicalValue(1);
    asym.at(1, 0) = TropicalValue(2);
    CHECK_THROWS_AS(is_ultrametric(asym), std::domain_error);
}

TEST_CASE("a candidate is ultrametric exactly when closure fixes it") {
    std::mt19937_64 gen(seed_from_env());
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 2 + gen() % 7;
        UltrametricCandidate d = random_candidate(gen, n);
        UltrametricCandidate closed = minimax_closure(d);
        CHECK(is_ultrametric(d).ultrametric == same_candidate(d, closed));
        CHECK(is_ultrametric(closed).ultrametric);
        CHECK(same_candidate(closed, minimax_closure(closed)));
    }
}

TEST_CASE("rational matrices with exact arithmetic") {
    QMatrix g(2);
    g.at(0, 0) = Rational(1);
    g.at(0, 1) = Rational(1, 2);
    g.at(1, 1) = Rational(1);
    QMatrix sq = qmat_mul(g, g);
    CHECK(sq.at(0, 1) == Rational(1));
    CHECK(sq == qmat_mul(g, g));
    CHECK(qmat_neg(qmat_neg(g)) == g);
    CHECK(qmat_add(g, qmat_neg(g)) == QMatrix(2));
    CHECK_THROWS_AS(qmat_mul(g, QMatrix(3)), std::domain_error);

    QMatrix m(2);
    m.at(0, 0) = Rational(4, 3);
    m.at(1, 0) = Rational(1);
    m.at(1, 1) = Rational(6);
    TropMatrix v = padic_matrix(2, m);
    CHECK(v.at(0, 0) == TropicalValue(2));
    CHECK(v.at(0, 1).is_inf());
    CHECK(v.at(1, 0) == TropicalValue(0));
    CHECK(v.at(1, 1) == TropicalValue(1));
}

TEST_CASE("entrywise exponents of a representation") {
    RationalRep scalar;
    scalar.n = 1;
    scalar.p = 2;
    QMatrix c(1);
    c.at(0, 0) = Rational(4, 3);
    scalar.generators.emplace_back("c", c);
    RepValuation sv = rep_to_valuation(scalar);
    REQUIRE(sv.images.size() == 1);
    CHECK(sv.images[0].second.at(0, 0) == TropicalValue(2));
    CHECK(sv.report.is_valuation(ValuationMode::Multiplicative));

    RationalRep rep;
    rep.n = 2;
    rep.p = 2;
    QMatrix g(2);
    g.at(0, 0) = Rational(1);
    g.at(0, 1) = Rational(1, 2);
    g.at(1, 1) = Rational(1);
    rep.generators.emplace_back("g", g);
    RepValuation rv = rep_to_valuation(rep);
    REQUIRE(rv.images.size() == 1);
    const TropMatrix& vg = rv.images[0].second;
    CHECK(vg.at(0, 0) == TropicalValue(0));
    CHECK(vg.at(0, 1) == TropicalValue(-1));
    CHECK(vg.at(1, 0).is_inf());
    CHECK(vg.at(1, 1) == TropicalValue(0));
    TropMatrix vgg = padic_matrix(2, qmat_mul(g, g));
    CHECK(vgg.at(0, 1) == TropicalValue(0));
    CHECK(rv.report.is_valuation(ValuationMode::Supermultiplicative));
    CHECK_FALSE(rv.report.multiplicative);
    CHECK(rv.report.superadditive);
    CHECK(rv.report.nondegenerate);

    RationalRep zero;
    zero.n = 2;
    zero.p = 3;
    zero.generators.emplace_back("z", QMatrix(2));
    RepValuation zv = rep_to_valuation(zero);
    CHECK(zv.images[0].second.at(0, 0).is_inf());
    CHECK(zv.report.is_valuation(ValuationMode::Supermultiplicative));

    RationalRep bad;
    bad.n = 2;
    bad.generators.emplace_back("g", QMatrix(1));
    CHECK_THROWS_AS(rep_to_valuation(bad), std::domain_error);
    RationalRep empty;
    CHECK_THROWS_AS(rep_to_valuation(empty), std::domain_error);
}

TEST_CASE("matrix files round-trip exactly") {
    MatrixFile f{"tropical", 2, {TropicalValue(0), TropicalValue(Rational(3, 2)), kInf,
                                 TropicalValue(-1)}};
    std::stringstream buf;
    write_matrix(buf, f);
    MatrixFile back = read_matrix(buf);
    CHECK(back.semiring == "tropical");
    CHECK(back.n == 2);
    REQUIRE(back.entries.size() == 4);
    CHECK(back.entries[1] == TropicalValue(Rational(3, 2)));
    CHECK(back.entries[2].is_inf());
    CHECK(back.entries[3] == TropicalValue(-1));

    TropicalSemiring trop;
    TropMatrix m = matrix_from_file(trop, back);
    CHECK(m.at(0, 1) == TropicalValue(Rational(3, 2)));
    MatrixFile again = matrix_to_file(m, "tropical");
    CHECK(again.entries == back.entries);

    MinMaxSemiring mm;
    CHECK_THROWS_AS(matrix_from_file(mm, back), std::domain_error);

    auto reject = [](const std::string& text) {
        std::stringstream in(text);
        CHECK_THROWS_AS(read_matrix(in), std::domain_error);
    };
    reject("table n=2 semiring=tropical\n0 0\n0 0\n");
    reject("matrix m=2 semiring=tropical\n0 0\n0 0\n");
    reject("matrix n=2 semiring=tropical\n0 0\n0\n");
    reject("matrix n=0 semiring=tropical\n");
    reject("matrix n=65 semiring=tropical\n");
    reject("matrix n=2\n0 0\n0 0\n");
}
