#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <vector>

#include "valuon/ring.hpp"
#include "valuon/semiring.hpp"

using namespace valuon;

namespace {

FiniteRing r8() { return upper_triangular_ring(cyclic_ring(2), 2); }

struct IdealFamily {
    IdealSemiring s;
    std::vector<IndexSet> ideals;

    using Value = IndexSet;
    Value add(const Value& a, const Value& b) const { return s.add(a, b); }
    Value mul(const Value& a, const Value& b) const { return s.mul(a, b); }
    Value zero() const { return s.zero(); }
    Value one() const { return s.one(); }
    bool eq(const Value& a, const Value& b) const { return s.eq(a, b); }
    std::string show(const Value& a) const { return s.show(a); }
    std::size_t size() const { return ideals.size(); }
    Value element(std::size_t i) const { return ideals[i]; }
};

IdealFamily all_ideals(const FiniteRing& r) {
    IdealFamily fam{IdealSemiring{r}, {}};
    std::size_t n = r.n();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<Index> members;
        for (Index i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) members.push_back(i);
        IndexSet set(std::move(members));
        if (is_two_sided_ideal(r, set)) fam.ideals.push_back(set);
    }
    return fam;
}

}  // namespace

TEST_CASE("cyclic rings") {
    FiniteRing z1 = cyclic_ring(1);
    CHECK(z1.n() == 1);
    CHECK(z1.zero() == z1.one());

    FiniteRing z6 = cyclic_ring(6);
    CHECK(z6.n() == 6);
    CHECK(z6.is_commutative());
    CHECK(z6.add(4, 5) == 3);
    CHECK(z6.mul(4, 5) == 2);
    CHECK(z6.neg(2) == 4);
    CHECK(z6.sub(1, 5) == 2);
    CHECK(z6.label(4) == "4");
    CHECK(z6.index_of_label("5") == Index{5});
    CHECK_FALSE(z6.index_of_label("6").has_value());
}

TEST_CASE("invalid tables are rejected with a witness") {
    // addition not commutative
    CHECK_THROWS_AS(ring_from_tables(2, {{0, 1}, {0, 1}}, {{0, 0}, {0, 1}}, 0, 1),
                    std::domain_error);
    // no additive inverse
    CHECK_THROWS_AS(ring_from_tables(2, {{0, 1}, {1, 1}}, {{0, 0}, {0, 1}}, 0, 1),
                    std::domain_error);
    // wrong identity index
    CHECK_THROWS_AS(ring_from_tables(2, {{0, 1}, {1, 0}}, {{0, 0}, {0, 1}}, 0, 0),
                    std::domain_error);
    CHECK_THROWS_AS(cyclic_ring(0), std::domain_error);
    CHECK_THROWS_AS(cyclic_ring(321), std::domain_error);
}

TEST_CASE("finite fields have the right multiplicative structure") {
    FiniteRing f4 = finite_field(4);
    REQUIRE(f4.n() == 4);
    CHECK(f4.is_commutative());
    CHECK(f4.label(2) == "w");
    CHECK(f4.label(3) == "w+1");
    for (Index a = 0; a < 4; ++a) CHECK(f4.add(a, a) == f4.zero());
    for (Index a = 1; a < 4; ++a) {
        Index cube = f4.mul(a, f4.mul(a, a));
        CHECK(cube == f4.one());
    }

    for (std::size_t q : {8, 9, 16}) {
        FiniteRing f = finite_field(q);
        REQUIRE(f.n() == q);
        for (Index a = 0; a < f.n(); ++a) {
            // Frobenius fixed points: a^q = a
            Index p = f.one();
            for (std::size_t i = 0; i < q; ++i) p = f.mul(p, a);
            CHECK(p == a);
        }
    }

    FiniteRing f25 = finite_field(5, 2, {2, 0, 1});
    CHECK(f25.n() == 25);
    CHECK(f25.is_commutative());

    CHECK_THROWS_AS(finite_field(6), std::domain_error);
    CHECK_THROWS_AS(finite_field(1), std::domain_error);
    // x^2 + 1 is reducible over F_2
    CHECK_THROWS_AS(finite_field(2, 2, {1, 0, 1}), std::domain_error);
}

TEST_CASE("upper-triangular 2x2 over F_2") {
    FiniteRing r = r8();
    REQUIRE(r.n() == 8);
    CHECK_FALSE(r.is_commutative());
    CHECK(r.label(1) == "i");
    CHECK(r.label(2) == "j");
    CHECK(r.label(3) == "k");
    CHECK(r.label(4) == "i+j");
    CHECK(r.label(5) == "1");
    CHECK(r.label(6) == "j+k");
    CHECK(r.label(7) == "i+j+k");
    Index i = 1, j = 2, k = 3;
    CHECK(r.add(i, k) == r.one());
    CHECK(r.mul(i, j) == j);
    CHECK(r.mul(j, k) == j);
    CHECK(r.mul(i, k) == r.zero());
    CHECK(r.mul(k, i) == r.zero());
    CHECK(r.mul(j, j) == r.zero());
    CHECK(r.mul(i, i) == i);

    FiniteRing m4 = matrix_ring(cyclic_ring(2), 2);
    CHECK(m4.n() == 16);
    CHECK_FALSE(m4.is_commutative());
}

TEST_CASE("product rings work componentwise") {
    FiniteRing p = product_ring(cyclic_ring(2), cyclic_ring(3));
    REQUIRE(p.n() == 6);
    CHECK(p.is_commutative());
    CHECK(p.label(0) == "{0,0}");
    auto a = p.index_of_label("{1,2}");
    auto b = p.index_of_label("{1,1}");
    REQUIRE(a);
    REQUIRE(b);
    CHECK(p.label(p.add(*a, *b)) == "{0,0}");
    CHECK(p.label(p.mul(*a, *b)) == "{1,2}");
}

TEST_CASE("zspan closes under addition and negation") {
    FiniteRing r = r8();
    CHECK(zspan(r, IndexSet()) == IndexSet::single(0));
    CHECK(zspan(r, IndexSet({5, 7})) == IndexSet({0, 2, 5, 7}));
    CHECK(zspan(r, IndexSet({1, 2, 3})).size() == 8);
    CHECK(zspan(r, IndexSet({5, 4, 6})) == zspan(r, IndexSet({5, 4})));

    FiniteRing z6 = cyclic_ring(6);
    CHECK(zspan(z6, IndexSet::single(2)) == IndexSet({0, 2, 4}));
    CHECK(zspan(z6, IndexSet::single(5)) == IndexSet({0, 1, 2, 3, 4, 5}));
}

TEST_CASE("ideals of the upper-triangular ring") {
    FiniteRing r = r8();
    CHECK(two_sided_ideal(r, IndexSet::single(2)) == IndexSet({0, 2}));
    CHECK(two_sided_ideal(r, IndexSet::single(1)) == IndexSet({0, 1, 2, 4}));
    CHECK(two_sided_ideal(r, IndexSet::single(5)).size() == 8);
    CHECK(is_two_sided_ideal(r, IndexSet({0, 2})));
    CHECK_FALSE(is_two_sided_ideal(r, IndexSet({0, 1})));
    CHECK(nu_ideal(r, 2) == IndexSet({0, 2}));

    IdealFamily fam = all_ideals(r);
    LawReport rep = check_semiring_laws(fam);
    INFO(rep.witness);
    CHECK(rep.ok());
    CHECK(check_idempotent(fam));
}

TEST_CASE("quotient by the strictly-upper ideal abelianizes") {
    FiniteRing r = r8();
    auto [q, pi] = quotient_ring(r, IndexSet({0, 2}));
    CHECK(q.n() == 4);
    CHECK(q.is_commutative());
    CHECK(check_ring_hom(r, q, pi).ok());

    auto [ab, proj] = abelianize_ring(r);
    CHECK(ab.n() == 4);
    CHECK(ab.is_commutative());
    CHECK(check_ring_hom(r, ab, proj).ok());

    // commutative rings abelianize to themselves
    FiniteRing z6 = cyclic_ring(6);
    auto [ab6, p6] = abelianize_ring(z6);
    CHECK(ab6.n() == 6);
    CHECK(check_ring_hom(z6, ab6, p6).ok());
}

TEST_CASE("ring hom checks catch violations") {
    FiniteRing z4 = cyclic_ring(4);
    FiniteRing z2 = cyclic_ring(2);
    RingHom mod2{z4.id(), z2.id(), {0, 1, 0, 1}};
    CHECK(check_ring_hom(z4, z2, mod2).ok());

    RingHom broken{z4.id(), z2.id(), {0, 0, 0, 0}};
    RingHomReport rep = check_ring_hom(z4, z2, broken);
    CHECK_FALSE(rep.ok());
    CHECK_FALSE(rep.one_ok);

    CHECK(apply_ring_hom(mod2, 3) == 1);
}

TEST_CASE("mul_monoid extracts the multiplicative structure") {
    FiniteRing r = r8();
    FiniteMonoid m = mul_monoid(r);
    CHECK(m.n == 8);
    CHECK(m.one == r.one());
    CHECK(m.mul[1][3] == r.mul(1, 3));
}

TEST_CASE("ring file format round-trips") {
    FiniteRing r = r8();
    std::stringstream buf;
    write_ring(buf, r);
    FiniteRing back = read_ring(buf);
    CHECK(back == r);
    CHECK(back.label(7) == "i+j+k");

    std::stringstream bad("ring n=2\nzero=0\none=1\nadd: 0 1\nadd: 1 1\nmul: 0 0\nmul: 0 1\n");
    CHECK_THROWS_AS(read_ring(bad), std::domain_error);
}
