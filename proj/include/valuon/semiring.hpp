#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <vector>

namespace valuon {

/**
 * Idempotent semiring instance: (S, +, *, 0, 1) with a + a = a.
 *
 * The natural order is a <= b iff a + b = a.  Under this convention the
 * additive identity 0 is the unique top element and a finite sum is the
 * greatest lower bound of its summands, so inf_of really computes an
 * infimum.
 *
 * Instances are plain value types; operations take elements by const
 * reference and never mutate the instance.
 */
template <typename S>
concept Semiring = requires(const S& s, const typename S::Value& a, const typename S::Value& b) {
    typename S::Value;
    { s.add(a, b) } -> std::same_as<typename S::Value>;
    { s.mul(a, b) } -> std::same_as<typename S::Value>;
    { s.zero() } -> std::same_as<typename S::Value>;
    { s.one() } -> std::same_as<typename S::Value>;
    { s.eq(a, b) } -> std::same_as<bool>;
    { s.show(a) } -> std::same_as<std::string>;
};

/// Finite carriers can additionally enumerate every element.
template <typename S>
concept FiniteCarrier = Semiring<S> && requires(const S& s, std::size_t i) {
    { s.size() } -> std::convertible_to<std::size_t>;
    { s.element(i) } -> std::same_as<typename S::Value>;
};

template <Semiring S>
bool leq(const S& s, const typename S::Value& a, const typename S::Value& b) {
    return s.eq(s.add(a, b), a);
}

/// Greatest lower bound of a finite family; the empty family yields 0 (top).
template <Semiring S>
typename S::Value inf_of(const S& s, const std::vector<typename S::Value>& xs) {
    typename S::Value acc = s.zero();
    for (const auto& x : xs) acc = s.add(acc, x);
    return acc;
}

template <FiniteCarrier S>
std::vector<typename S::Value> carrier_elements(const S& s) {
    std::vector<typename S::Value> out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s.element(i));
    return out;
}

template <Semiring S>
bool check_idempotent(const S& s, const std::vector<typename S::Value>& samples) {
    for (const auto& a : samples)
        if (!s.eq(s.add(a, a), a)) return false;
    return true;
}

template <FiniteCarrier S>
bool check_idempotent(const S& s) {
    return check_idempotent(s, carrier_elements(s));
}

/// Outcome of a semiring-law sweep; `witness` names the first violation.
struct LawReport {
    bool add_assoc = true;
    bool add_comm = true;
    bool add_zero = true;
    bool add_idem = true;
    bool mul_assoc = true;
    bool mul_one = true;
    bool dist_left = true;
    bool dist_right = true;
    bool annihilate = true;
    std::string witness;

    bool ok() const {
        return add_assoc && add_comm && add_zero && add_idem && mul_assoc && mul_one &&
               dist_left && dist_right && annihilate;
    }
};

namespace detail {

template <Semiring S>
void check_law_triple(const S& s, LawReport& r, const typename S::Value& a,
                      const typename S::Value& b, const typename S::Value& c) {
    auto note = [&](bool& flag, const char* law) {
        if (flag) {
            flag = false;
            if (r.witness.empty())
                r.witness = std::string(law) + " at a=" + s.show(a) + " b=" + s.show(b) +
                            " c=" + s.show(c);
        }
    };
    if (!s.eq(s.add(s.add(a, b), c), s.add(a, s.add(b, c)))) note(r.add_assoc, "add-assoc");
    if (!s.eq(s.add(a, b), s.add(b, a))) note(r.add_comm, "add-comm");
    if (!s.eq(s.add(a, s.zero()), a)) note(r.add_zero, "add-zero");
    if (!s.eq(s.add(a, a), a)) note(r.add_idem, "add-idem");
    if (!s.eq(s.mul(s.mul(a, b), c), s.mul(a, s.mul(b, c)))) note(r.mul_assoc, "mul-assoc");
    if (!s.eq(s.mul(a, s.one()), a) || !s.eq(s.mul(s.one(), a), a)) note(r.mul_one, "mul-one");
    if (!s.eq(s.mul(a, s.add(b, c)), s.add(s.mul(a, b), s.mul(a, c)))) note(r.dist_left, "dist-left");
    if (!s.eq(s.mul(s.add(a, b), c), s.add(s.mul(a, c), s.mul(b, c)))) note(r.dist_right, "dist-right");
    if (!s.eq(s.mul(a, s.zero()), s.zero()) || !s.eq(s.mul(s.zero(), a), s.zero()))
        note(r.annihilate, "annihilate");
}

}  // namespace detail

/// Exhaustive law check over all triples of a finite carrier.
template <FiniteCarrier S>
LawReport check_semiring_laws(const S& s) {
    LawReport r;
    const auto xs = carrier_elements(s);
    for (const auto& a : xs)
        for (const auto& b : xs)
            for (const auto& c : xs) detail::check_law_triple(s, r, a, b, c);
    return r;
}

/// Sampled law check: `cases` random triples drawn from `gen`.
template <Semiring S, typename Gen>
LawReport check_semiring_laws_sampled(const S& s, Gen&& gen, std::size_t cases = 1000) {
    LawReport r;
    for (std::size_t i = 0; i < cases; ++i) {
        auto a = gen();
        auto b = gen();
        auto c = gen();
        detail::check_law_triple(s, r, a, b, c);
    }
    return r;
}

/// Verifies that a + b is the greatest lower bound of {a, b} on the whole
/// carrier: x <= a and x <= b together hold iff x <= a + b.
template <FiniteCarrier S>
bool check_glb(const S& s) {
    const auto xs = carrier_elements(s);
    for (const auto& a : xs)
        for (const auto& b : xs) {
            auto m = s.add(a, b);
            for (const auto& x : xs) {
                bool below_both = leq(s, x, a) && leq(s, x, b);
                if (below_both != leq(s, x, m)) return false;
            }
        }
    return true;
}

/// Result of a homomorphism check; `witness` names the first violation.
struct HomReport {
    bool zero_ok = true;
    bool one_ok = true;
    bool add_ok = true;
    bool mul_ok = true;
    bool order_ok = true;
    std::string witness;

    bool ok() const { return zero_ok && one_ok && add_ok && mul_ok && order_ok; }
};

/**
 * Checks that f : S -> T preserves 0, 1, + and * on all pairs of the given
 * samples, and (as an independent sweep) that it preserves the natural
 * order.  Pass the full carrier for an exhaustive verdict.
 */
template <Semiring S, Semiring T, typename F>
HomReport check_homomorphism(const S& s, const T& t, F&& f,
                             const std::vector<typename S::Value>& samples) {
    HomReport r;
    auto note = [&](bool& flag, const std::string& msg) {
        if (flag) {
            flag = false;
            if (r.witness.empty()) r.witness = msg;
        }
    };
    if (!t.eq(f(s.zero()), t.zero())) note(r.zero_ok, "f(0) != 0");
    if (!t.eq(f(s.one()), t.one())) note(r.one_ok, "f(1) != 1");
    for (const auto& a : samples) {
        for (const auto& b : samples) {
            if (!t.eq(f(s.add(a, b)), t.add(f(a), f(b))))
                note(r.add_ok, "f(a+b) != f(a)+f(b) at a=" + s.show(a) + " b=" + s.show(b));
            if (!t.eq(f(s.mul(a, b)), t.mul(f(a), f(b))))
                note(r.mul_ok, "f(ab) != f(a)f(b) at a=" + s.show(a) + " b=" + s.show(b));
            if (leq(s, a, b) && !leq(t, f(a), f(b)))
                note(r.order_ok, "order not preserved at a=" + s.show(a) + " b=" + s.show(b));
        }
    }
    return r;
}

/**
 * Two-element semiring {0, 1} with + = or and * = and.  In the natural
 * order 1 < 0: the multiplicative identity sits at the bottom and the
 * additive identity on top, matching the idempotent convention.
 */
struct BooleanSemiring {
    using Value = bool;

    Value add(Value a, Value b) const { return a || b; }
    Value mul(Value a, Value b) const { return a && b; }
    Value zero() const { return false; }
    Value one() const { return true; }
    bool eq(Value a, Value b) const { return a == b; }
    std::string show(Value a) const { return a ? "1" : "0"; }

    std::size_t size() const { return 2; }
    Value element(std::size_t i) const { return i == 1; }

    Value literal(std::int64_t k) const { return k != 0; }
};

}  // namespace valuon
