#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "valuon/index_set.hpp"
#include "valuon/semiring.hpp"

namespace valuon {

/**
 * Finite semiring given by explicit addition and multiplication tables.
 * Elements are their carrier indices.  Tables produced by this library
 * (quotients, subgroup semirings) are valid by construction; tables read
 * from files are validated against all semiring laws.
 */
struct FiniteSemiring {
    std::size_t n = 0;
    std::vector<std::vector<Index>> add_table;
    std::vector<std::vector<Index>> mul_table;
    Index zero_i = 0;
    Index one_i = 0;

    using Value = Index;

    Value add(Value a, Value b) const { return add_table[a][b]; }
    Value mul(Value a, Value b) const { return mul_table[a][b]; }
    Value zero() const { return zero_i; }
    Value one() const { return one_i; }
    bool eq(Value a, Value b) const { return a == b; }
    std::string show(Value a) const { return std::to_string(a); }

    std::size_t size() const { return n; }
    Value element(std::size_t i) const { return static_cast<Index>(i); }

    Value literal(std::int64_t k) const {
        // a + a = a, so any nonzero integer multiple of 1 collapses to 1.
        return k == 0 ? zero_i : one_i;
    }

    friend bool operator==(const FiniteSemiring& a, const FiniteSemiring& b) {
        return a.n == b.n && a.zero_i == b.zero_i && a.one_i == b.one_i &&
               a.add_table == b.add_table && a.mul_table == b.mul_table;
    }
};

inline void validate_tables_shape(std::size_t n, const std::vector<std::vector<Index>>& t,
                                  const char* what) {
    if (t.size() != n) throw std::domain_error(std::string(what) + ": bad table shape");
    for (const auto& row : t) {
        if (row.size() != n) throw std::domain_error(std::string(what) + ": bad table shape");
        for (Index x : row)
            if (x >= n) throw std::domain_error(std::string(what) + ": entry out of range");
    }
}

/// Builds a finite semiring from raw tables, checking every law.
inline FiniteSemiring semiring_from_tables(std::size_t n, std::vector<std::vector<Index>> add,
                                           std::vector<std::vector<Index>> mul, Index zero, Index one) {
    if (n == 0 || n > 4096) throw std::domain_error("semiring_from_tables: carrier size out of range");
    validate_tables_shape(n, add, "semiring_from_tables");
    validate_tables_shape(n, mul, "semiring_from_tables");
    if (zero >= n || one >= n) throw std::domain_error("semiring_from_tables: zero/one out of range");
    FiniteSemiring s{n, std::move(add), std::move(mul), zero, one};
    LawReport r = check_semiring_laws(s);
    if (!r.ok()) throw std::domain_error("semiring_from_tables: law violation: " + r.witness);
    return s;
}

/**
 * Partition of a finite carrier into congruence classes.  Classes are
 * sorted internally and ordered by their least element; the least element
 * acts as the class representative.
 */
struct FiniteCongruence {
    std::vector<std::vector<Index>> classes;
    std::vector<Index> class_of;

    std::size_t size() const { return classes.size(); }

    friend bool operator==(const FiniteCongruence& a, const FiniteCongruence& b) {
        return a.classes == b.classes;
    }
};

inline FiniteCongruence partition_from_class_of(std::size_t n, const std::vector<Index>& raw) {
    // Normalizes an arbitrary labeling into representative-ordered classes.
    std::vector<std::vector<Index>> buckets(n);
    for (std::size_t i = 0; i < n; ++i) buckets[raw[i]].push_back(static_cast<Index>(i));
    FiniteCongruence c;
    c.class_of.assign(n, 0);
    std::vector<std::pair<Index, std::vector<Index>>> nonempty;
    for (auto& b : buckets)
        if (!b.empty()) nonempty.emplace_back(b.front(), std::move(b));
    std::sort(nonempty.begin(), nonempty.end());
    for (auto& [min_elt, cls] : nonempty) {
        (void)min_elt;
        for (Index x : cls) c.class_of[x] = static_cast<Index>(c.classes.size());
        c.classes.push_back(std::move(cls));
    }
    return c;
}

/**
 * Smallest congruence containing the given pairs: the union-find closure
 * under the context rules a ~ b implies a+c ~ b+c, ac ~ bc and ca ~ cb,
 * iterated to a fixed point.
 */
inline FiniteCongruence congruence_closure(const FiniteSemiring& s,
                                           const std::vector<std::pair<Index, Index>>& pairs) {
    std::vector<Index> parent(s.n);
    for (std::size_t i = 0; i < s.n; ++i) parent[i] = static_cast<Index>(i);
    auto find = [&](Index x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](Index a, Index b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[b] = a;
        return true;
    };
    for (auto [a, b] : pairs) {
        if (a >= s.n || b >= s.n) throw std::domain_error("congruence_closure: pair out of range");
        unite(a, b);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (Index a = 0; a < s.n; ++a) {
            Index r = find(a);
            if (r == a) continue;
            for (Index c = 0; c < s.n; ++c) {
                changed |= unite(s.add(a, c), s.add(r, c));
                changed |= unite(s.mul(a, c), s.mul(r, c));
                changed |= unite(s.mul(c, a), s.mul(c, r));
            }
        }
    }
    std::vector<Index> labels(s.n);
    for (std::size_t i = 0; i < s.n; ++i) labels[i] = find(static_cast<Index>(i));
    return partition_from_class_of(s.n, labels);
}

/**
 * Quotient by a partition.  Tables are induced through representatives
 * and checked to be independent of the choice; a partition that fails
 * the check is not a congruence and is rejected.
 */
inline FiniteSemiring quotient_semiring(const FiniteSemiring& s, const FiniteCongruence& c) {
    if (c.class_of.size() != s.n) throw std::domain_error("quotient_semiring: partition size mismatch");
    std::size_t m = c.size();
    std::vector<std::vector<Index>> add(m, std::vector<Index>(m));
    std::vector<std::vector<Index>> mul(m, std::vector<Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            Index ri = c.classes[i][0], rj = c.classes[j][0];
            add[i][j] = c.class_of[s.add(ri, rj)];
            mul[i][j] = c.class_of[s.mul(ri, rj)];
        }
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (Index a : c.classes[i])
                for (Index b : c.classes[j]) {
                    if (c.class_of[s.add(a, b)] != add[i][j] || c.class_of[s.mul(a, b)] != mul[i][j])
                        throw std::domain_error("quotient_semiring: partition is not a congruence at (" +
                                                std::to_string(a) + "," + std::to_string(b) + ")");
                }
    FiniteSemiring q{m, std::move(add), std::move(mul), c.class_of[s.zero_i], c.class_of[s.one_i]};
    return q;
}

/// Reads "semiring n=<N>", "zero=<i>", "one=<i>", N add: rows, N mul: rows.
inline FiniteSemiring read_semiring(std::istream& in) {
    std::string line;
    auto next = [&](const char* what) {
        if (!std::getline(in, line))
            throw std::domain_error(std::string("read_semiring: missing ") + what);
        return line;
    };
    std::size_t n = 0;
    {
        std::istringstream h(next("header"));
        std::string tag, field;
        h >> tag >> field;
        if (tag != "semiring" || field.rfind("n=", 0) != 0)
            throw std::domain_error("read_semiring: bad header");
        n = std::stoul(field.substr(2));
    }
    auto scalar = [&](const char* key) {
        std::string l = next(key);
        std::string prefix = std::string(key) + "=";
        if (l.rfind(prefix, 0) != 0)
            throw std::domain_error(std::string("read_semiring: missing ") + prefix);
        return static_cast<Index>(std::stoul(l.substr(prefix.size())));
    };
    Index zero = scalar("zero");
    Index one = scalar("one");
    auto rows = [&](const char* tag_want) {
        std::vector<std::vector<Index>> t(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::istringstream row(next(tag_want));
            std::string tag;
            row >> tag;
            if (tag != tag_want) throw std::domain_error("read_semiring: expected " + std::string(tag_want));
            unsigned v;
            while (row >> v) t[i].push_back(static_cast<Index>(v));
        }
        return t;
    };
    auto add = rows("add:");
    auto mul = rows("mul:");
    return semiring_from_tables(n, std::move(add), std::move(mul), zero, one);
}

inline void write_semiring(std::ostream& out, const FiniteSemiring& s) {
    out << "semiring n=" << s.n << "\n";
    out << "zero=" << s.zero_i << "\n";
    out << "one=" << s.one_i << "\n";
    for (std::size_t i = 0; i < s.n; ++i) {
        out << "add:";
        for (Index v : s.add_table[i]) out << " " << v;
        out << "\n";
    }
    for (std::size_t i = 0; i < s.n; ++i) {
        out << "mul:";
        for (Index v : s.mul_table[i]) out << " " << v;
        out << "\n";
    }
}

inline void write_congruence(std::ostream& out, const FiniteCongruence& c) {
    out << "congruence n=" << c.class_of.size() << " classes=" << c.size() << "\n";
    for (const auto& cls : c.classes) {
        out << "class:";
        for (Index x : cls) out << " " << x;
        out << "\n";
    }
}

inline FiniteCongruence read_congruence(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::domain_error("read_congruence: missing header");
    std::istringstream h(line);
    std::string tag, nf, cf;
    h >> tag >> nf >> cf;
    if (tag != "congruence" || nf.rfind("n=", 0) != 0 || cf.rfind("classes=", 0) != 0)
        throw std::domain_error("read_congruence: bad header");
    std::size_t n = std::stoul(nf.substr(2));
    std::size_t k = std::stoul(cf.substr(8));
    std::vector<Index> labels(n, static_cast<Index>(n));
    for (std::size_t i = 0; i < k; ++i) {
        if (!std::getline(in, line)) throw std::domain_error("read_congruence: missing class row");
        std::istringstream row(line);
        std::string t;
        row >> t;
        if (t != "class:") throw std::domain_error("read_congruence: expected class: row");
        unsigned v;
        Index rep = static_cast<Index>(n);
        while (row >> v) {
            if (v >= n) throw std::domain_error("read_congruence: index out of range");
            if (rep == n) rep = static_cast<Index>(v);
            labels[v] = rep;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == n) throw std::domain_error("read_congruence: element missing from partition");
    return partition_from_class_of(n, labels);
}

}  // namespace valuon
