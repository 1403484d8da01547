#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace valuon {

inline bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

/**
 * Exact rational number on 64-bit numerator/denominator.
 *
 * Always stored reduced with a positive denominator.  Intermediate
 * products go through 128-bit arithmetic; results that do not fit in
 * 64 bits after reduction throw std::overflow_error instead of
 * silently wrapping.
 */
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        *this = reduce(n, d);
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }

    Rational operator-() const { return from_reduced(-num_, den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        I128 n = I128(a.num_) * b.den_ + I128(b.num_) * a.den_;
        return reduce(n, I128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return reduce(I128(a.num_) * b.num_, I128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
        return reduce(I128(a.num_) * b.den_, I128(a.den_) * b.num_);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return I128(a.num_) * b.den_ < I128(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a == b || a < b; }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Accepts "n" or "n/d" with an optional leading sign.
    static Rational parse(const std::string& s) {
        std::size_t slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rational(parse_int(s));
            return Rational(parse_int(s.substr(0, slash)), parse_int(s.substr(slash + 1)));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        }
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    using I128 = __int128;

    std::int64_t num_;
    std::int64_t den_;

    static Rational from_reduced(std::int64_t n, std::int64_t d) {
        Rational r;
        r.num_ = n;
        r.den_ = d;
        return r;
    }

    static Rational reduce(I128 n, I128 d) {
        if (d < 0) { n = -n; d = -d; }
        I128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("Rational: value exceeds 64-bit range");
        return from_reduced(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
    }

    static I128 gcd128(I128 a, I128 b) {
        while (b != 0) { I128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    static std::int64_t parse_int(const std::string& s) {
        if (s.empty()) throw std::invalid_argument(s);
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    }
};

/// gcd on nonnegative rationals: gcd(a/b, c/d) = gcd(ad, cb) / bd, reduced.
/// gcd(x, 0) = x, so 0 is the additive identity of the gcd semiring.
inline Rational rational_gcd(const Rational& a, const Rational& b) {
    if (a.is_negative() || b.is_negative())
        throw std::domain_error("rational_gcd: arguments must be nonnegative");
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    auto igcd = [](__int128 x, __int128 y) {
        while (y != 0) { __int128 t = x % y; x = y; y = t; }
        return x;
    };
    __int128 ad = static_cast<__int128>(a.num()) * b.den();
    __int128 cb = static_cast<__int128>(b.num()) * a.den();
    __int128 g = igcd(ad, cb);
    __int128 bd = static_cast<__int128>(a.den()) * b.den();
    __int128 r = igcd(g, bd);
    g /= r;
    bd /= r;
    if (g > INT64_MAX || bd > INT64_MAX)
        throw std::overflow_error("rational_gcd: value exceeds 64-bit range");
    return Rational(static_cast<std::int64_t>(g), static_cast<std::int64_t>(bd));
}

}  // namespace valuon
