#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "valuon/index_set.hpp"
#include "valuon/semiring.hpp"

namespace valuon {

/// Finite monoid given by an explicit multiplication table.
struct FiniteMonoid {
    std::size_t n = 0;
    std::vector<std::vector<Index>> mul;
    Index one = 0;
};

inline FiniteMonoid monoid_from_tables(std::size_t n, std::vector<std::vector<Index>> mul, Index one) {
    FiniteMonoid m{n, std::move(mul), one};
    if (m.mul.size() != n) throw std::domain_error("monoid_from_tables: bad table shape");
    for (const auto& row : m.mul) {
        if (row.size() != n) throw std::domain_error("monoid_from_tables: bad table shape");
        for (Index x : row)
            if (x >= n) throw std::domain_error("monoid_from_tables: entry out of range");
    }
    for (Index a = 0; a < n; ++a) {
        if (m.mul[m.one][a] != a || m.mul[a][m.one] != a)
            throw std::domain_error("monoid_from_tables: identity fails at " + std::to_string(a));
        for (Index b = 0; b < n; ++b)
            for (Index c = 0; c < n; ++c)
                if (m.mul[m.mul[a][b]][c] != m.mul[a][m.mul[b][c]])
                    throw std::domain_error("monoid_from_tables: associativity fails at (" +
                                            std::to_string(a) + "," + std::to_string(b) + "," +
                                            std::to_string(c) + ")");
    }
    return m;
}

/**
 * Powerset semiring of a finite monoid: union as addition, elementwise
 * product as multiplication, empty set as 0 and {1} as 1.  The natural
 * order is reverse inclusion: A <= B iff A contains B.
 */
struct PowersetSemiring {
    FiniteMonoid m;

    using Value = IndexSet;

    Value add(const Value& a, const Value& b) const { return set_union(a, b); }
    Value mul(const Value& a, const Value& b) const {
        std::vector<char> mark(m.n, 0);
        for (Index x : a)
            for (Index y : b) mark[m.mul[x][y]] = 1;
        std::vector<Index> out;
        for (Index i = 0; i < m.n; ++i)
            if (mark[i]) out.push_back(i);
        return IndexSet(std::move(out));
    }
    Value zero() const { return IndexSet(); }
    Value one() const { return IndexSet::single(m.one); }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    std::string show(const Value& a) const { return a.str(); }

    /// 2^n elements, enumerated by bitmask; usable for n up to ~16.
    std::size_t size() const {
        if (m.n > 16) throw std::domain_error("PowersetSemiring: carrier too large to enumerate");
        return std::size_t{1} << m.n;
    }
    Value element(std::size_t mask) const {
        std::vector<Index> out;
        for (Index i = 0; i < m.n; ++i)
            if (mask & (std::size_t{1} << i)) out.push_back(i);
        return IndexSet(std::move(out));
    }

    Value literal(std::int64_t k) const { return k == 0 ? zero() : one(); }
};

/// Reads "monoid n=<N>", "one=<i>", then N "mul:" rows.
inline FiniteMonoid read_monoid(std::istream& in) {
    std::string line;
    auto next = [&](const char* what) {
        if (!std::getline(in, line)) throw std::domain_error(std::string("read_monoid: missing ") + what);
        return line;
    };
    std::size_t n = 0;
    {
        std::istringstream h(next("header"));
        std::string tag, field;
        h >> tag >> field;
        if (tag != "monoid" || field.rfind("n=", 0) != 0)
            throw std::domain_error("read_monoid: bad header");
        n = std::stoul(field.substr(2));
    }
    Index one = 0;
    {
        std::string l = next("one");
        if (l.rfind("one=", 0) != 0) throw std::domain_error("read_monoid: missing one=");
        one = static_cast<Index>(std::stoul(l.substr(4)));
    }
    std::vector<std::vector<Index>> mul(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::istringstream row(next("mul row"));
        std::string tag;
        row >> tag;
        if (tag != "mul:") throw std::domain_error("read_monoid: expected mul: row");
        unsigned v;
        while (row >> v) mul[i].push_back(static_cast<Index>(v));
    }
    return monoid_from_tables(n, std::move(mul), one);
}

inline void write_monoid(std::ostream& out, const FiniteMonoid& m) {
    out << "monoid n=" << m.n << "\n";
    out << "one=" << m.one << "\n";
    for (std::size_t i = 0; i < m.n; ++i) {
        out << "mul:";
        for (Index v : m.mul[i]) out << " " << v;
        out << "\n";
    }
}

}  // namespace valuon
