#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "valuon/rational.hpp"
#include "valuon/semiring.hpp"
#include "valuon/tropical.hpp"

namespace valuon {

/// p-adic valuation of q as a tropical number; nu_p(0) = inf.
inline TropicalValue nu_padic(std::int64_t p, const Rational& q) {
    if (!is_prime(p)) throw std::invalid_argument("nu_padic: " + std::to_string(p) + " is not prime");
    if (q.is_zero()) return TropicalValue::infinity();
    std::int64_t e = 0;
    for (std::int64_t n = q.num() < 0 ? -q.num() : q.num(); n % p == 0; n /= p) ++e;
    for (std::int64_t d = q.den(); d % p == 0; d /= p) --e;
    return TropicalValue(Rational(e));
}

/**
 * Finite-support exponent vector indexed by primes, with an absorbing
 * infinity.  Models the valuation semiring of Q: a nonzero rational maps
 * to its prime exponents, addition is pointwise min (gcd on the rational
 * side) and multiplication is pointwise sum.  Zero exponents are never
 * stored, so equality is plain map equality.
 */
class PadicVector {
public:
    PadicVector() : inf_(false) {}  // the empty vector, i.e. the image of 1

    static PadicVector infinity() {
        PadicVector v;
        v.inf_ = true;
        return v;
    }

    static PadicVector unit(std::int64_t p, std::int64_t e = 1) {
        if (!is_prime(p)) throw std::invalid_argument("PadicVector: " + std::to_string(p) + " is not prime");
        PadicVector v;
        if (e != 0) v.e_[p] = e;
        return v;
    }

    bool is_inf() const { return inf_; }
    const std::map<std::int64_t, std::int64_t>& exponents() const { return e_; }

    std::int64_t exponent(std::int64_t p) const {
        auto it = e_.find(p);
        return it == e_.end() ? 0 : it->second;
    }

    void set_exponent(std::int64_t p, std::int64_t e) {
        if (inf_) throw std::domain_error("PadicVector: cannot set exponent on infinity");
        if (e == 0)
            e_.erase(p);
        else
            e_[p] = e;
    }

    friend PadicVector pointwise_min(const PadicVector& a, const PadicVector& b) {
        if (a.inf_) return b;
        if (b.inf_) return a;
        PadicVector out;
        for (const auto& [p, e] : a.e_) {
            std::int64_t m = std::min(e, b.exponent(p));
            if (m != 0) out.e_[p] = m;
        }
        for (const auto& [p, e] : b.e_) {
            if (a.e_.count(p)) continue;
            std::int64_t m = std::min<std::int64_t>(e, 0);
            if (m != 0) out.e_[p] = m;
        }
        return out;
    }

    friend PadicVector pointwise_sum(const PadicVector& a, const PadicVector& b) {
        if (a.inf_ || b.inf_) return infinity();
        PadicVector out = a;
        for (const auto& [p, e] : b.e_) out.set_exponent(p, out.exponent(p) + e);
        return out;
    }

    friend bool operator==(const PadicVector& a, const PadicVector& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.e_ == b.e_;
    }
    friend bool operator!=(const PadicVector& a, const PadicVector& b) { return !(a == b); }

    std::string str() const {
        if (inf_) return "inf";
        if (e_.empty()) return "[]";
        std::string s = "[";
        bool first = true;
        for (const auto& [p, e] : e_) {
            if (!first) s += " ";
            first = false;
            s += std::to_string(p) + ":" + std::to_string(e);
        }
        return s + "]";
    }

private:
    bool inf_;
    std::map<std::int64_t, std::int64_t> e_;
};

struct PadicVectorSemiring {
    using Value = PadicVector;

    Value add(const Value& a, const Value& b) const { return pointwise_min(a, b); }
    Value mul(const Value& a, const Value& b) const { return pointwise_sum(a, b); }
    Value zero() const { return PadicVector::infinity(); }
    Value one() const { return PadicVector(); }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    std::string show(const Value& a) const { return a.str(); }

    Value literal(std::int64_t k) const;  // defined after factor_rational
};

/// gcd semiring on nonnegative rationals: (Q>=0, gcd, *, 0, 1).
struct GcdRationalSemiring {
    using Value = Rational;

    Value add(const Value& a, const Value& b) const { return rational_gcd(a, b); }
    Value mul(const Value& a, const Value& b) const {
        if (a.is_negative() || b.is_negative())
            throw std::domain_error("GcdRationalSemiring: negative element");
        return a * b;
    }
    Value zero() const { return Rational(0); }
    Value one() const { return Rational(1); }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    std::string show(const Value& a) const { return a.str(); }

    Value literal(std::int64_t k) const {
        if (k < 0) throw std::domain_error("GcdRationalSemiring: negative literal");
        return Rational(k);
    }
};

/**
 * Prime exponent vector of a rational, by trial division.  Numerator and
 * denominator magnitudes above 10^12 are rejected; below that bound trial
 * division up to the square root settles every factor.
 */
inline PadicVector factor_rational(const Rational& q) {
    if (q.is_zero()) return PadicVector::infinity();
    PadicVector out;
    auto accumulate = [&out](std::int64_t n, std::int64_t sign) {
        if (n > 1000000000000LL)
            throw std::domain_error("factor_rational: magnitude exceeds factorization bound");
        for (std::int64_t p = 2; p * p <= n; ++p) {
            if (n % p) continue;
            std::int64_t e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.set_exponent(p, out.exponent(p) + sign * e);
        }
        if (n > 1) out.set_exponent(n, out.exponent(n) + sign);
    };
    accumulate(q.num() < 0 ? -q.num() : q.num(), +1);
    accumulate(q.den(), -1);
    return out;
}

inline PadicVector PadicVectorSemiring::literal(std::int64_t k) const {
    return factor_rational(Rational(k));
}

/**
 * Canonical image of a rational in its universal valuation semiring:
 * the magnitude |q| together with the prime exponent view.  The two
 * fields always describe the same class.
 */
struct GammaQElement {
    Rational magnitude;  // nonnegative
    PadicVector vec;

    friend bool operator==(const GammaQElement& a, const GammaQElement& b) {
        return a.magnitude == b.magnitude;
    }
    std::string str() const { return magnitude.str(); }
};

inline GammaQElement nu_gammaQ(const Rational& q) {
    return GammaQElement{q.abs(), factor_rational(q)};
}

struct GammaQSemiring {
    using Value = GammaQElement;

    Value add(const Value& a, const Value& b) const {
        return Value{rational_gcd(a.magnitude, b.magnitude), pointwise_min(a.vec, b.vec)};
    }
    Value mul(const Value& a, const Value& b) const {
        return Value{a.magnitude * b.magnitude, pointwise_sum(a.vec, b.vec)};
    }
    Value zero() const { return Value{Rational(0), PadicVector::infinity()}; }
    Value one() const { return Value{Rational(1), PadicVector()}; }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    std::string show(const Value& a) const { return a.str(); }

    Value literal(std::int64_t k) const { return nu_gammaQ(Rational(k)); }
};

/// Projection onto the p-component; a semiring homomorphism to tropical.
inline TropicalValue padic_projection(std::int64_t p, const PadicVector& v) {
    if (v.is_inf()) return TropicalValue::infinity();
    return TropicalValue(Rational(v.exponent(p)));
}

/**
 * Classification of a semiring homomorphism out of the valuation semiring
 * of Q into tropical, determined by its values on the prime unit vectors.
 */
struct HomClassification {
    enum class Kind { Trivial, PAdic, Invalid };

    Kind kind = Kind::Trivial;
    std::int64_t prime = 0;  // PAdic
    Rational scale;          // PAdic
    std::string witness;     // Invalid: the violated min-identity

    std::string str() const {
        switch (kind) {
            case Kind::Trivial: return "trivial";
            case Kind::PAdic: return "p-adic p=" + std::to_string(prime) + " scale=" + scale.str();
            case Kind::Invalid: return "invalid: " + witness;
        }
        return "";
    }
};

/**
 * Classifies the map sending the unit vector of each prime p to the given
 * rational.  Unlisted primes are sent to 0.  Since distinct primes p, q
 * satisfy 1_p + 1_q = 0 (their gcd is 1), any two positive values violate
 * min(c_p, c_q) = 0; a negative value violates min(c_p, 0) = 0 via
 * 1_p + 1 = 1.  What remains is the trivial map or a single rescaled
 * p-adic valuation.
 */
inline HomClassification classify_trop_hom(const std::map<std::int64_t, Rational>& assignment) {
    for (const auto& [p, c] : assignment) {
        (void)c;
        if (!is_prime(p))
            throw std::invalid_argument("classify_trop_hom: key " + std::to_string(p) + " is not prime");
    }
    HomClassification out;
    for (const auto& [p, c] : assignment) {
        if (c.is_negative()) {
            out.kind = HomClassification::Kind::Invalid;
            out.witness = "min(c_" + std::to_string(p) + ",0) must be 0";
            return out;
        }
    }
    std::int64_t positive = 0;
    for (const auto& [p, c] : assignment) {
        if (c.is_zero()) continue;
        if (positive != 0) {
            out.kind = HomClassification::Kind::Invalid;
            out.witness = "min(c_" + std::to_string(positive) + ",c_" + std::to_string(p) + ") must be 0";
            return out;
        }
        positive = p;
        out.scale = c;
    }
    if (positive == 0) {
        out.kind = HomClassification::Kind::Trivial;
    } else {
        out.kind = HomClassification::Kind::PAdic;
        out.prime = positive;
    }
    return out;
}

/// Value of the assignment-induced map on a rational: sum of c_p * v_p(q).
inline TropicalValue apply_trop_assignment(const std::map<std::int64_t, Rational>& assignment,
                                           const Rational& q) {
    if (q.is_zero()) return TropicalValue::infinity();
    Rational acc(0);
    for (const auto& [p, c] : assignment) {
        TropicalValue vp = nu_padic(p, q);
        acc = acc + c * vp.value();
    }
    return TropicalValue(acc);
}

}  // namespace valuon
