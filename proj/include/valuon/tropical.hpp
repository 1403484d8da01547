#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "valuon/rational.hpp"
#include "valuon/semiring.hpp"

namespace valuon {

/**
 * A tropical number: an exact rational or +infinity.
 *
 * Default-constructed values are infinite, i.e. the additive identity of
 * the (min, +) semiring.
 */
class TropicalValue {
public:
    TropicalValue() : inf_(true) {}
    TropicalValue(Rational v) : inf_(false), v_(v) {}
    TropicalValue(std::int64_t v) : inf_(false), v_(v) {}

    static TropicalValue infinity() { return TropicalValue(); }

    bool is_inf() const { return inf_; }
    const Rational& value() const {
        if (inf_) throw std::domain_error("TropicalValue: infinity has no finite value");
        return v_;
    }

    friend bool operator==(const TropicalValue& a, const TropicalValue& b) {
        if (a.inf_ || b.inf_) return a.inf_ == b.inf_;
        return a.v_ == b.v_;
    }
    friend bool operator!=(const TropicalValue& a, const TropicalValue& b) { return !(a == b); }
    /// Numeric order with infinity greatest.
    friend bool operator<(const TropicalValue& a, const TropicalValue& b) {
        if (a.inf_) return false;
        if (b.inf_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator<=(const TropicalValue& a, const TropicalValue& b) { return a == b || a < b; }

    std::string str() const { return inf_ ? "inf" : v_.str(); }

    static TropicalValue parse(const std::string& s) {
        if (s == "inf") return infinity();
        return TropicalValue(Rational::parse(s));
    }

private:
    bool inf_;
    Rational v_;
};

inline TropicalValue trop_min(const TropicalValue& a, const TropicalValue& b) { return a < b ? a : b; }
inline TropicalValue trop_max(const TropicalValue& a, const TropicalValue& b) { return a < b ? b : a; }

/// (Q u {inf}, min, +, inf, 0): the tropical semiring with exact entries.
struct TropicalSemiring {
    using Value = TropicalValue;

    Value add(const Value& a, const Value& b) const { return trop_min(a, b); }
    Value mul(const Value& a, const Value& b) const {
        if (a.is_inf() || b.is_inf()) return Value::infinity();
        return Value(a.value() + b.value());
    }
    Value zero() const { return Value::infinity(); }
    Value one() const { return Value(Rational(0)); }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    std::string show(const Value& a) const { return a.str(); }

    /// Numeric literals denote tropical values directly, not n-fold sums of 1.
    Value literal(std::int64_t k) const { return Value(Rational(k)); }
    std::optional<Value> try_label(const std::string& s) const {
        if (s == "inf") return Value::infinity();
        return std::nullopt;
    }
};

/**
 * ([0, inf], min, max, inf, 0): bottleneck composition.  max has identity
 * 0 only on nonnegative carriers, so elements are validated on use.
 */
struct MinMaxSemiring {
    using Value = TropicalValue;

    static void require_valid(const Value& v) {
        if (!v.is_inf() && v.value().is_negative())
            throw std::domain_error("MinMaxSemiring: negative entry " + v.str());
    }

    Value add(const Value& a, const Value& b) const { return trop_min(a, b); }
    Value mul(const Value& a, const Value& b) const { return trop_max(a, b); }
    Value zero() const { return Value::infinity(); }
    Value one() const { return Value(Rational(0)); }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    std::string show(const Value& a) const { return a.str(); }

    Value literal(std::int64_t k) const {
        if (k < 0) throw std::domain_error("MinMaxSemiring: negative literal");
        return Value(Rational(k));
    }
    std::optional<Value> try_label(const std::string& s) const {
        if (s == "inf") return Value::infinity();
        return std::nullopt;
    }
};

}  // namespace valuon
