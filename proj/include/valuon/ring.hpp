#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "valuon/finite_semiring.hpp"
#include "valuon/index_set.hpp"
#include "valuon/powerset.hpp"
#include "valuon/rational.hpp"
#include "valuon/semiring.hpp"

namespace valuon {

namespace detail {
inline std::uint64_t next_ring_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}
}  // namespace detail

/**
 * Finite unital ring given by explicit tables.  Construction validates
 * every ring axiom exhaustively (associativity, commutative addition,
 * identities, additive inverses, distributivity), so a constructed value
 * is always a ring; carriers are capped at 320 elements to keep the
 * cubic sweep cheap.
 *
 * Each ring value carries an instance id.  Derived objects (subgroups,
 * Gamma elements) remember the id of their parent and operations check it,
 * so elements cannot silently cross between instances.
 */
class FiniteRing {
public:
    FiniteRing() = default;

    std::size_t n() const { return n_; }
    Index add(Index a, Index b) const { return add_[a][b]; }
    Index mul(Index a, Index b) const { return mul_[a][b]; }
    Index neg(Index a) const { return neg_[a]; }
    Index sub(Index a, Index b) const { return add_[a][neg_[b]]; }
    Index zero() const { return zero_; }
    Index one() const { return one_; }
    std::uint64_t id() const { return id_; }

    bool has_labels() const { return !labels_.empty(); }
    std::string label(Index i) const {
        if (labels_.empty()) return std::to_string(i);
        return labels_[i];
    }
    std::optional<Index> index_of_label(const std::string& s) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == s) return static_cast<Index>(i);
        return std::nullopt;
    }

    bool is_commutative() const {
        for (Index a = 0; a < n_; ++a)
            for (Index b = 0; b < n_; ++b)
                if (mul_[a][b] != mul_[b][a]) return false;
        return true;
    }

    const std::vector<std::vector<Index>>& add_table() const { return add_; }
    const std::vector<std::vector<Index>>& mul_table() const { return mul_; }

    /// Structural equality; the instance id is deliberately ignored.
    friend bool operator==(const FiniteRing& a, const FiniteRing& b) {
        return a.n_ == b.n_ && a.zero_ == b.zero_ && a.one_ == b.one_ && a.add_ == b.add_ &&
               a.mul_ == b.mul_ && a.labels_ == b.labels_;
    }

    friend FiniteRing ring_from_tables(std::size_t, std::vector<std::vector<Index>>,
                                       std::vector<std::vector<Index>>, Index, Index,
                                       std::vector<std::string>);

private:
    std::size_t n_ = 0;
    std::vector<std::vector<Index>> add_;
    std::vector<std::vector<Index>> mul_;
    std::vector<Index> neg_;
    Index zero_ = 0;
    Index one_ = 0;
    std::vector<std::string> labels_;
    std::uint64_t id_ = 0;
};

/**
 * The only way to build a FiniteRing.  Negation is derived from the
 * addition table; labels are optional (indices are shown when absent).
 */
inline FiniteRing ring_from_tables(std::size_t n, std::vector<std::vector<Index>> add,
                                   std::vector<std::vector<Index>> mul, Index zero, Index one,
                                   std::vector<std::string> labels = {}) {
    if (n == 0 || n > 320) throw std::domain_error("ring_from_tables: carrier size out of range");
    validate_tables_shape(n, add, "ring_from_tables(add)");
    validate_tables_shape(n, mul, "ring_from_tables(mul)");
    if (zero >= n || one >= n) throw std::domain_error("ring_from_tables: zero/one out of range");
    if (!labels.empty() && labels.size() != n)
        throw std::domain_error("ring_from_tables: label count mismatch");

    auto fail = [](const std::string& what) { throw std::domain_error("ring_from_tables: " + what); };
    std::vector<Index> neg(n, 0);
    for (Index a = 0; a < n; ++a) {
        if (add[a][zero] != a) fail("additive identity fails at " + std::to_string(a));
        if (mul[a][one] != a || mul[one][a] != a)
            fail("multiplicative identity fails at " + std::to_string(a));
        bool found = false;
        for (Index b = 0; b < n; ++b) {
            if (add[a][b] == zero) {
                neg[a] = b;
                found = true;
                break;
            }
        }
        if (!found) fail("no additive inverse for " + std::to_string(a));
    }
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) {
            if (add[a][b] != add[b][a])
                fail("addition not commutative at (" + std::to_string(a) + "," + std::to_string(b) + ")");
            for (Index c = 0; c < n; ++c) {
                if (add[add[a][b]][c] != add[a][add[b][c]])
                    fail("addition not associative at (" + std::to_string(a) + "," + std::to_string(b) +
                         "," + std::to_string(c) + ")");
                if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
                    fail("multiplication not associative at (" + std::to_string(a) + "," +
                         std::to_string(b) + "," + std::to_string(c) + ")");
                if (mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]])
                    fail("left distributivity fails at (" + std::to_string(a) + "," + std::to_string(b) +
                         "," + std::to_string(c) + ")");
                if (mul[add[a][b]][c] != add[mul[a][c]][mul[b][c]])
                    fail("right distributivity fails at (" + std::to_string(a) + "," +
                         std::to_string(b) + "," + std::to_string(c) + ")");
            }
        }

    FiniteRing r;
    r.n_ = n;
    r.add_ = std::move(add);
    r.mul_ = std::move(mul);
    r.neg_ = std::move(neg);
    r.zero_ = zero;
    r.one_ = one;
    r.labels_ = std::move(labels);
    r.id_ = detail::next_ring_id();
    return r;
}

/// Z/n with the obvious tables.  cyclic_ring(1) is the zero ring.
inline FiniteRing cyclic_ring(std::size_t n) {
    if (n == 0 || n > 320) throw std::domain_error("cyclic_ring: size out of range");
    std::vector<std::vector<Index>> add(n, std::vector<Index>(n));
    std::vector<std::vector<Index>> mul(n, std::vector<Index>(n));
    std::vector<std::string> labels(n);
    for (std::size_t a = 0; a < n; ++a) {
        labels[a] = std::to_string(a);
        for (std::size_t b = 0; b < n; ++b) {
            add[a][b] = static_cast<Index>((a + b) % n);
            mul[a][b] = static_cast<Index>((a * b) % n);
        }
    }
    return ring_from_tables(n, std::move(add), std::move(mul), 0, n == 1 ? 0 : 1, std::move(labels));
}

namespace detail {

// Polynomials over Z/p as little-endian coefficient vectors.
inline std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& m, int p) {
    // m is monic of degree k; reduces a in place.
    int k = static_cast<int>(m.size()) - 1;
    for (int d = static_cast<int>(a.size()) - 1; d >= k; --d) {
        int c = a[d] % p;
        if (c == 0) continue;
        for (int i = 0; i <= k; ++i) {
            int idx = d - k + i;
            a[idx] = ((a[idx] - c * m[i]) % p + p * p) % p;
        }
    }
    a.resize(k);
    for (int& c : a) c %= p;
    return a;
}

inline std::vector<int> poly_mul_mod(const std::vector<int>& a, const std::vector<int>& b,
                                     const std::vector<int>& m, int p) {
    std::vector<int> prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    return poly_mod(std::move(prod), m, p);
}

inline bool poly_divides(const std::vector<int>& d, std::vector<int> a, int p) {
    // Whether monic d divides a over Z/p.
    int dd = static_cast<int>(d.size()) - 1;
    for (int t = static_cast<int>(a.size()) - 1; t >= dd; --t) {
        int c = a[t] % p;
        if (c == 0) continue;
        for (int i = 0; i <= dd; ++i) a[t - dd + i] = ((a[t - dd + i] - c * d[i]) % p + p * p) % p;
    }
    for (int c : a)
        if (c % p != 0) return false;
    return true;
}

inline bool poly_irreducible(const std::vector<int>& m, int p) {
    int k = static_cast<int>(m.size()) - 1;
    for (int deg = 1; deg <= k / 2; ++deg) {
        // All monic candidates of this degree.
        std::vector<int> cand(deg + 1, 0);
        cand[deg] = 1;
        std::int64_t total = 1;
        for (int i = 0; i < deg; ++i) total *= p;
        for (std::int64_t code = 0; code < total; ++code) {
            std::int64_t c = code;
            for (int i = 0; i < deg; ++i) {
                cand[i] = static_cast<int>(c % p);
                c /= p;
            }
            if (poly_divides(cand, m, p)) return false;
        }
    }
    return true;
}

inline std::string field_label(const std::vector<int>& digits) {
    std::string s;
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
        int c = digits[i];
        if (c == 0) continue;
        if (!s.empty()) s += "+";
        if (i == 0) {
            s += std::to_string(c);
        } else {
            if (c != 1) s += std::to_string(c);
            s += "w";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

}  // namespace detail

/**
 * F_{p^k} as Z/p[w] modulo a monic irreducible polynomial, elements
 * ordered by digit value (0, 1, ..., p-1, w, w+1, ...).  The modulus is
 * checked for irreducibility by exhaustive trial division.
 */
inline FiniteRing finite_field(int p, int k, const std::vector<int>& poly) {
    if (!is_prime(p)) throw std::domain_error("finite_field: p must be prime");
    if (k < 1 || k > 8) throw std::domain_error("finite_field: degree out of range");
    if (static_cast<int>(poly.size()) != k + 1 || poly[k] != 1)
        throw std::domain_error("finite_field: modulus must be monic of degree k");
    for (int c : poly)
        if (c < 0 || c >= p) throw std::domain_error("finite_field: modulus coefficients out of range");
    if (k > 1 && !detail::poly_irreducible(poly, p))
        throw std::domain_error("finite_field: modulus is reducible");

    std::size_t q = 1;
    for (int i = 0; i < k; ++i) {
        q *= p;
        if (q > 320) throw std::domain_error("finite_field: carrier too large");
    }
    auto digits_of = [&](std::size_t v) {
        std::vector<int> d(k);
        for (int i = 0; i < k; ++i) {
            d[i] = static_cast<int>(v % p);
            v /= p;
        }
        return d;
    };
    auto value_of = [&](const std::vector<int>& d) {
        std::size_t v = 0;
        for (int i = k - 1; i >= 0; --i) v = v * p + d[i] % p;
        return v;
    };
    std::vector<std::vector<Index>> add(q, std::vector<Index>(q));
    std::vector<std::vector<Index>> mul(q, std::vector<Index>(q));
    std::vector<std::string> labels(q);
    for (std::size_t a = 0; a < q; ++a) {
        auto da = digits_of(a);
        labels[a] = detail::field_label(da);
        for (std::size_t b = 0; b < q; ++b) {
            auto db = digits_of(b);
            std::vector<int> sum(k);
            for (int i = 0; i < k; ++i) sum[i] = (da[i] + db[i]) % p;
            add[a][b] = static_cast<Index>(value_of(sum));
            mul[a][b] = static_cast<Index>(value_of(detail::poly_mul_mod(da, db, poly, p)));
        }
    }
    return ring_from_tables(q, std::move(add), std::move(mul), 0, 1, std::move(labels));
}

/// Field of order q = p^k using a stock irreducible modulus (q <= 16).
inline FiniteRing finite_field(std::size_t q) {
    static const std::map<std::size_t, std::pair<std::pair<int, int>, std::vector<int>>> stock = {
        {4, {{2, 2}, {1, 1, 1}}},         // w^2 + w + 1
        {8, {{2, 3}, {1, 1, 0, 1}}},      // w^3 + w + 1
        {9, {{3, 2}, {1, 0, 1}}},         // w^2 + 1
        {16, {{2, 4}, {1, 1, 0, 0, 1}}},  // w^4 + w + 1
    };
    if (is_prime(static_cast<std::int64_t>(q)))
        return finite_field(static_cast<int>(q), 1, {0, 1});
    auto it = stock.find(q);
    if (it == stock.end())
        throw std::domain_error("finite_field: no stock modulus for order " + std::to_string(q));
    return finite_field(it->second.first.first, it->second.first.second, it->second.second);
}

namespace detail {

struct MatrixShape {
    std::size_t dim;
    std::vector<std::pair<int, int>> positions;  // row-major, upper-triangular subset or all
};

// Elements are coefficient tuples over the base, one slot per position.
// Enumeration order: by support size, then support pattern, then values.
// For 2x2 upper-triangular over Z/2 this puts the three unit matrices
// right after zero and names them i, j, k.
inline FiniteRing structured_matrix_ring(const FiniteRing& base, const MatrixShape& shape,
                                         const char* what) {
    const std::size_t slots = shape.positions.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < slots; ++i) {
        total *= base.n();
        if (total > 320) throw std::domain_error(std::string(what) + ": carrier too large");
    }
    std::vector<std::vector<Index>> tuples;
    tuples.reserve(total);
    std::vector<Index> cur(slots, 0);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = 0; i < slots; ++i) {
            cur[i] = static_cast<Index>(c % base.n());
            c /= base.n();
        }
        tuples.push_back(cur);
    }
    auto sort_key = [&](const std::vector<Index>& t) {
        std::vector<Index> support;
        for (std::size_t i = 0; i < slots; ++i)
            if (t[i] != base.zero()) support.push_back(static_cast<Index>(i));
        return std::make_tuple(support.size(), support, t);
    };
    std::sort(tuples.begin(), tuples.end(),
              [&](const auto& a, const auto& b) { return sort_key(a) < sort_key(b); });
    std::map<std::vector<Index>, Index> index_of;
    for (std::size_t i = 0; i < tuples.size(); ++i) index_of[tuples[i]] = static_cast<Index>(i);

    std::map<std::pair<int, int>, std::size_t> slot_of;
    for (std::size_t i = 0; i < slots; ++i) slot_of[shape.positions[i]] = i;
    auto entry = [&](const std::vector<Index>& t, int r, int c) {
        auto it = slot_of.find({r, c});
        return it == slot_of.end() ? base.zero() : t[it->second];
    };

    auto add_tuples = [&](const std::vector<Index>& a, const std::vector<Index>& b) {
        std::vector<Index> out(slots);
        for (std::size_t i = 0; i < slots; ++i) out[i] = base.add(a[i], b[i]);
        return out;
    };
    auto mul_tuples = [&](const std::vector<Index>& a, const std::vector<Index>& b) {
        std::vector<Index> out(slots, base.zero());
        for (std::size_t i = 0; i < slots; ++i) {
            auto [r, c] = shape.positions[i];
            Index acc = base.zero();
            for (std::size_t k = 0; k < shape.dim; ++k)
                acc = base.add(acc, base.mul(entry(a, r, static_cast<int>(k)),
                                             entry(b, static_cast<int>(k), c)));
            out[i] = acc;
        }
        return out;
    };

    const std::size_t n = tuples.size();
    std::vector<std::vector<Index>> add(n, std::vector<Index>(n));
    std::vector<std::vector<Index>> mul(n, std::vector<Index>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            auto s = add_tuples(tuples[a], tuples[b]);
            auto p = mul_tuples(tuples[a], tuples[b]);
            auto is = index_of.find(s);
            auto ip = index_of.find(p);
            if (is == index_of.end() || ip == index_of.end())
                throw std::domain_error(std::string(what) + ": closure failure");
            add[a][b] = is->second;
            mul[a][b] = ip->second;
        }

    // Unit slot names i, j, k, ... in position order.
    auto slot_name = [&](std::size_t i) -> std::string {
        if (slots <= 6) return std::string(1, static_cast<char>('i' + i));
        auto [r, c] = shape.positions[i];
        return "e" + std::to_string(r) + "_" + std::to_string(c);
    };
    auto coeff_term = [&](Index coeff, std::size_t slot) -> std::string {
        std::string lab = base.label(coeff);
        if (lab == "1") return slot_name(slot);
        bool simple = true;
        for (char ch : lab)
            if (!std::isalnum(static_cast<unsigned char>(ch))) simple = false;
        return (simple ? lab : "(" + lab + ")") + slot_name(slot);
    };
    std::vector<std::string> labels(n);
    std::vector<Index> id_tuple(slots, base.zero());
    for (std::size_t i = 0; i < slots; ++i) {
        auto [r, c] = shape.positions[i];
        if (r == c) id_tuple[i] = base.one();
    }
    for (std::size_t a = 0; a < n; ++a) {
        std::string s;
        for (std::size_t i = 0; i < slots; ++i) {
            if (tuples[a][i] == base.zero()) continue;
            if (!s.empty()) s += "+";
            s += coeff_term(tuples[a][i], i);
        }
        labels[a] = s.empty() ? "0" : s;
    }
    Index zero = index_of.at(std::vector<Index>(slots, base.zero()));
    Index one = index_of.at(id_tuple);
    labels[one] = "1";
    return ring_from_tables(n, std::move(add), std::move(mul), zero, one, std::move(labels));
}

}  // namespace detail

/// Full matrix ring M_d(base).
inline FiniteRing matrix_ring(const FiniteRing& base, std::size_t d) {
    if (d == 0 || d > 4) throw std::domain_error("matrix_ring: dimension out of range");
    detail::MatrixShape shape{d, {}};
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) shape.positions.emplace_back(static_cast<int>(r), static_cast<int>(c));
    return detail::structured_matrix_ring(base, shape, "matrix_ring");
}

/// Upper-triangular d x d matrices over the base ring.
inline FiniteRing upper_triangular_ring(const FiniteRing& base, std::size_t d) {
    if (d == 0 || d > 4) throw std::domain_error("upper_triangular_ring: dimension out of range");
    detail::MatrixShape shape{d, {}};
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = r; c < d; ++c) shape.positions.emplace_back(static_cast<int>(r), static_cast<int>(c));
    return detail::structured_matrix_ring(base, shape, "upper_triangular_ring");
}

/// Direct product with pairs ordered lexicographically.
inline FiniteRing product_ring(const FiniteRing& r1, const FiniteRing& r2) {
    std::size_t n = r1.n() * r2.n();
    if (n > 320) throw std::domain_error("product_ring: carrier too large");
    auto pack = [&](Index a, Index b) { return static_cast<Index>(a * r2.n() + b); };
    std::vector<std::vector<Index>> add(n, std::vector<Index>(n));
    std::vector<std::vector<Index>> mul(n, std::vector<Index>(n));
    std::vector<std::string> labels(n);
    for (Index a1 = 0; a1 < r1.n(); ++a1)
        for (Index a2 = 0; a2 < r2.n(); ++a2) {
            Index a = pack(a1, a2);
            labels[a] = "{" + r1.label(a1) + "," + r2.label(a2) + "}";
            for (Index b1 = 0; b1 < r1.n(); ++b1)
                for (Index b2 = 0; b2 < r2.n(); ++b2) {
                    Index b = pack(b1, b2);
                    add[a][b] = pack(r1.add(a1, b1), r2.add(a2, b2));
                    mul[a][b] = pack(r1.mul(a1, b1), r2.mul(a2, b2));
                }
        }
    return ring_from_tables(n, std::move(add), std::move(mul), pack(r1.zero(), r2.zero()),
                            pack(r1.one(), r2.one()), std::move(labels));
}

/// Additive subgroup generated by the given elements (integer span).
inline IndexSet zspan(const FiniteRing& r, const IndexSet& gens) {
    std::vector<char> mark(r.n(), 0);
    std::vector<Index> members;
    std::vector<Index> queue;
    auto push = [&](Index x) {
        if (!mark[x]) {
            mark[x] = 1;
            queue.push_back(x);
        }
    };
    push(r.zero());
    for (Index g : gens) {
        if (g >= r.n()) throw std::domain_error("zspan: generator out of range");
        push(g);
    }
    while (!queue.empty()) {
        Index x = queue.back();
        queue.pop_back();
        push(r.neg(x));
        for (Index y : members) push(r.add(x, y));
        members.push_back(x);
        // x + x as well: pair (x, x) is not covered by the loop above.
        push(r.add(x, x));
    }
    std::vector<Index> out;
    for (Index i = 0; i < r.n(); ++i)
        if (mark[i]) out.push_back(i);
    return IndexSet(std::move(out));
}

/// Two-sided ideal generated by the given elements.
inline IndexSet two_sided_ideal(const FiniteRing& r, const IndexSet& gens) {
    std::vector<char> mark(r.n(), 0);
    std::vector<Index> members;
    std::vector<Index> queue;
    auto push = [&](Index x) {
        if (!mark[x]) {
            mark[x] = 1;
            queue.push_back(x);
        }
    };
    push(r.zero());
    for (Index g : gens) {
        if (g >= r.n()) throw std::domain_error("two_sided_ideal: generator out of range");
        push(g);
    }
    while (!queue.empty()) {
        Index x = queue.back();
        queue.pop_back();
        push(r.neg(x));
        for (Index y : members) push(r.add(x, y));
        push(r.add(x, x));
        for (Index s = 0; s < r.n(); ++s) {
            push(r.mul(s, x));
            push(r.mul(x, s));
        }
        members.push_back(x);
    }
    std::vector<Index> out;
    for (Index i = 0; i < r.n(); ++i)
        if (mark[i]) out.push_back(i);
    return IndexSet(std::move(out));
}

inline bool is_two_sided_ideal(const FiniteRing& r, const IndexSet& s) {
    if (!s.contains(r.zero())) return false;
    for (Index a : s) {
        if (!s.contains(r.neg(a))) return false;
        for (Index b : s)
            if (!s.contains(r.add(a, b))) return false;
        for (Index x = 0; x < r.n(); ++x)
            if (!s.contains(r.mul(x, a)) || !s.contains(r.mul(a, x))) return false;
    }
    return true;
}

/// Ring homomorphism as an element map between two ring instances.
struct RingHom {
    std::uint64_t src_id = 0;
    std::uint64_t dst_id = 0;
    std::vector<Index> map;

    Index operator()(Index x) const {
        if (x >= map.size()) throw std::domain_error("RingHom: element out of range");
        return map[x];
    }
};

struct RingHomReport {
    bool zero_ok = true, one_ok = true, add_ok = true, mul_ok = true;
    std::string witness;
    bool ok() const { return zero_ok && one_ok && add_ok && mul_ok; }
};

inline RingHomReport check_ring_hom(const FiniteRing& r, const FiniteRing& s, const RingHom& h) {
    if (h.src_id != r.id() || h.dst_id != s.id())
        throw std::domain_error("check_ring_hom: instance mismatch");
    RingHomReport rep;
    auto note = [&](bool& flag, const std::string& msg) {
        if (flag) {
            flag = false;
            if (rep.witness.empty()) rep.witness = msg;
        }
    };
    if (h(r.zero()) != s.zero()) note(rep.zero_ok, "f(0) != 0");
    if (h(r.one()) != s.one()) note(rep.one_ok, "f(1) != 1");
    for (Index a = 0; a < r.n(); ++a)
        for (Index b = 0; b < r.n(); ++b) {
            if (h(r.add(a, b)) != s.add(h(a), h(b)))
                note(rep.add_ok, "additivity fails at (" + r.label(a) + "," + r.label(b) + ")");
            if (h(r.mul(a, b)) != s.mul(h(a), h(b)))
                note(rep.mul_ok, "multiplicativity fails at (" + r.label(a) + "," + r.label(b) + ")");
        }
    return rep;
}

inline Index apply_ring_hom(const RingHom& h, Index x) { return h(x); }

/**
 * Quotient by a two-sided ideal.  Classes are ordered by their least
 * member, which also provides the representative and its label.  Returns
 * the quotient together with the projection homomorphism.
 */
inline std::pair<FiniteRing, RingHom> quotient_ring(const FiniteRing& r, const IndexSet& ideal) {
    if (!is_two_sided_ideal(r, ideal))
        throw std::domain_error("quotient_ring: generating set is not a two-sided ideal");
    std::vector<Index> rep(r.n());
    for (Index x = 0; x < r.n(); ++x) {
        Index best = x;
        for (Index i : ideal) best = std::min(best, r.add(x, i));
        rep[x] = best;
    }
    std::vector<Index> reps;
    for (Index x = 0; x < r.n(); ++x)
        if (rep[x] == x) reps.push_back(x);
    std::map<Index, Index> down;
    for (std::size_t i = 0; i < reps.size(); ++i) down[reps[i]] = static_cast<Index>(i);

    std::size_t m = reps.size();
    std::vector<std::vector<Index>> add(m, std::vector<Index>(m));
    std::vector<std::vector<Index>> mul(m, std::vector<Index>(m));
    std::vector<std::string> labels(m);
    for (std::size_t i = 0; i < m; ++i) {
        labels[i] = r.label(reps[i]);
        for (std::size_t j = 0; j < m; ++j) {
            add[i][j] = down.at(rep[r.add(reps[i], reps[j])]);
            mul[i][j] = down.at(rep[r.mul(reps[i], reps[j])]);
        }
    }
    FiniteRing q = ring_from_tables(m, std::move(add), std::move(mul), down.at(rep[r.zero()]),
                                    down.at(rep[r.one()]), std::move(labels));
    RingHom pi;
    pi.src_id = r.id();
    pi.dst_id = q.id();
    pi.map.resize(r.n());
    for (Index x = 0; x < r.n(); ++x) pi.map[x] = down.at(rep[x]);
    return {std::move(q), std::move(pi)};
}

/**
 * Largest commutative quotient: kills the two-sided ideal generated by
 * all commutators ab - ba.
 */
inline std::pair<FiniteRing, RingHom> abelianize_ring(const FiniteRing& r) {
    IndexSet gens;
    for (Index a = 0; a < r.n(); ++a)
        for (Index b = 0; b < r.n(); ++b) gens.insert(r.sub(r.mul(a, b), r.mul(b, a)));
    return quotient_ring(r, two_sided_ideal(r, gens));
}

/// Multiplicative monoid of a ring, for powerset-semiring constructions.
inline FiniteMonoid mul_monoid(const FiniteRing& r) {
    FiniteMonoid m;
    m.n = r.n();
    m.mul = r.mul_table();
    m.one = r.one();
    return m;
}

inline std::string show_subset(const FiniteRing& r, const IndexSet& s) {
    std::string out = "{";
    bool first = true;
    for (Index i : s) {
        if (!first) out += ",";
        first = false;
        out += r.label(i);
    }
    return out + "}";
}

/**
 * Semiring of two-sided ideals of a ring: join as addition, span of the
 * elementwise product as multiplication, {0} as 0 and the whole ring as 1.
 * The span of a product of ideals is itself an ideal, so multiplication
 * stays inside the carrier.  nu_ideal sends an element to the ideal it
 * generates; this is unital and superadditive for every finite ring, and
 * multiplicative precisely when products of generated ideals collapse
 * (commutative rings in particular).
 */
struct IdealSemiring {
    FiniteRing R;

    using Value = IndexSet;

    Value add(const Value& a, const Value& b) const { return zspan(R, set_union(a, b)); }
    Value mul(const Value& a, const Value& b) const {
        IndexSet products;
        for (Index x : a)
            for (Index y : b) products.insert(R.mul(x, y));
        return zspan(R, products);
    }
    Value zero() const { return IndexSet::single(R.zero()); }
    Value one() const {
        std::vector<Index> all(R.n());
        for (Index i = 0; i < R.n(); ++i) all[i] = i;
        return IndexSet(std::move(all));
    }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    std::string show(const Value& a) const { return show_subset(R, a); }
};

inline IndexSet nu_ideal(const FiniteRing& r, Index a) { return two_sided_ideal(r, IndexSet::single(a)); }

/// Ring description file, format v1: header, identities, tables, labels.
inline void write_ring(std::ostream& out, const FiniteRing& r) {
    out << "ring n=" << r.n() << "\n";
    out << "zero=" << r.zero() << "\n";
    out << "one=" << r.one() << "\n";
    for (Index i = 0; i < r.n(); ++i) {
        out << "add:";
        for (Index j = 0; j < r.n(); ++j) out << " " << r.add(i, j);
        out << "\n";
    }
    for (Index i = 0; i < r.n(); ++i) {
        out << "mul:";
        for (Index j = 0; j < r.n(); ++j) out << " " << r.mul(i, j);
        out << "\n";
    }
    if (r.has_labels())
        for (Index i = 0; i < r.n(); ++i) out << "label " << i << " " << r.label(i) << "\n";
}

inline FiniteRing read_ring(std::istream& in) {
    std::string line;
    auto next = [&](const char* what) {
        if (!std::getline(in, line)) throw std::domain_error(std::string("read_ring: missing ") + what);
        return line;
    };
    std::size_t n = 0;
    {
        std::istringstream h(next("header"));
        std::string tag, field;
        h >> tag >> field;
        if (tag != "ring" || field.rfind("n=", 0) != 0) throw std::domain_error("read_ring: bad header");
        n = std::stoul(field.substr(2));
    }
    auto scalar = [&](const char* key) {
        std::string l = next(key);
        std::string prefix = std::string(key) + "=";
        if (l.rfind(prefix, 0) != 0)
            throw std::domain_error(std::string("read_ring: missing ") + prefix);
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
            if (tag != tag_want) throw std::domain_error("read_ring: expected " + std::string(tag_want));
            unsigned v;
            while (row >> v) t[i].push_back(static_cast<Index>(v));
        }
        return t;
    };
    auto add = rows("add:");
    auto mul = rows("mul:");
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tag;
        unsigned idx;
        std::string name;
        row >> tag >> idx >> name;
        if (tag != "label" || name.empty()) throw std::domain_error("read_ring: bad label line");
        if (labels.empty()) labels.resize(n);
        if (idx >= n) throw std::domain_error("read_ring: label index out of range");
        labels[idx] = name;
    }
    return ring_from_tables(n, std::move(add), std::move(mul), zero, one, std::move(labels));
}

}  // namespace valuon
