#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "valuon/gamma.hpp"
#include "valuon/qval.hpp"
#include "valuon/rational.hpp"
#include "valuon/semiring.hpp"
#include "valuon/tropical.hpp"

namespace valuon {

/// Square matrix with entries in a semiring, row-major.
template <Semiring S>
struct Matrix {
    std::size_t n = 0;
    std::vector<typename S::Value> a;

    Matrix() = default;
    Matrix(std::size_t dim, const typename S::Value& fill) : n(dim), a(dim * dim, fill) {}

    // vector reference types so that bool-valued semirings work too
    typename std::vector<typename S::Value>::reference at(std::size_t i, std::size_t j) {
        return a[i * n + j];
    }
    typename std::vector<typename S::Value>::const_reference at(std::size_t i, std::size_t j) const {
        return a[i * n + j];
    }
};

using TropMatrix = Matrix<TropicalSemiring>;
using MinMaxMatrix = Matrix<MinMaxSemiring>;

namespace detail {
template <Semiring S>
void require_same_dim(const Matrix<S>& x, const Matrix<S>& y, const char* what) {
    if (x.n != y.n)
        throw std::domain_error(std::string(what) + ": dimension mismatch " +
                                std::to_string(x.n) + " vs " + std::to_string(y.n));
}
}  // namespace detail

template <Semiring S>
Matrix<S> mat_identity(const S& s, std::size_t n) {
    Matrix<S> m(n, s.zero());
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = s.one();
    return m;
}

template <Semiring S>
Matrix<S> mat_add(const S& s, const Matrix<S>& x, const Matrix<S>& y) {
    detail::require_same_dim(x, y, "mat_add");
    Matrix<S> out = x;
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] = s.add(out.a[i], y.a[i]);
    return out;
}

template <Semiring S>
Matrix<S> mat_mul(const S& s, const Matrix<S>& x, const Matrix<S>& y) {
    detail::require_same_dim(x, y, "mat_mul");
    Matrix<S> out(x.n, s.zero());
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t k = 0; k < x.n; ++k)
            for (std::size_t j = 0; j < x.n; ++j)
                out.at(i, j) = s.add(out.at(i, j), s.mul(x.at(i, k), y.at(k, j)));
    return out;
}

template <Semiring S>
bool mat_eq(const S& s, const Matrix<S>& x, const Matrix<S>& y) {
    if (x.n != y.n) return false;
    for (std::size_t i = 0; i < x.a.size(); ++i)
        if (!s.eq(x.a[i], y.a[i])) return false;
    return true;
}

/// M_n(S): pointwise addition, row-by-column multiplication.
template <Semiring S>
struct MatrixSemiring {
    S s;
    std::size_t n = 1;

    using Value = Matrix<S>;

    Value add(const Value& x, const Value& y) const { return mat_add(s, x, y); }
    Value mul(const Value& x, const Value& y) const { return mat_mul(s, x, y); }
    Value zero() const { return Value(n, s.zero()); }
    Value one() const { return mat_identity(s, n); }
    bool eq(const Value& x, const Value& y) const { return mat_eq(s, x, y); }

    std::string show(const Value& x) const {
        std::string out = "[";
        for (std::size_t i = 0; i < x.n; ++i) {
            if (i) out += "; ";
            for (std::size_t j = 0; j < x.n; ++j) {
                if (j) out += " ";
                out += s.show(x.at(i, j));
            }
        }
        return out + "]";
    }

    std::size_t size() const
        requires FiniteCarrier<S>
    {
        std::size_t total = 1;
        for (std::size_t i = 0; i < n * n; ++i) {
            total *= s.size();
            if (total > (1u << 24)) throw std::domain_error("MatrixSemiring: carrier too large");
        }
        return total;
    }

    Value element(std::size_t k) const
        requires FiniteCarrier<S>
    {
        Value m(n, s.zero());
        for (std::size_t i = 0; i < n * n; ++i) {
            m.a[i] = s.element(k % s.size());
            k /= s.size();
        }
        return m;
    }
};

/**
 * Least solution of X = AX + I, by iterating X <- AX + I from X = I.
 * The supported instances ((min,max) on [0,inf], and min-plus with no
 * negative entries) stabilize within n steps; the result is returned only
 * once the fixed-point equation holds exactly.
 */
template <Semiring S>
Matrix<S> least_fixed_point(const S& s, const Matrix<S>& a) {
    if constexpr (std::is_same_v<S, TropicalSemiring>) {
        for (const auto& e : a.a)
            if (!e.is_inf() && e.value().is_negative())
                throw std::domain_error("least_fixed_point: negative min-plus entry " + e.str());
    }
    Matrix<S> id = mat_identity(s, a.n);
    Matrix<S> x = id;
    for (std::size_t k = 0; k <= a.n; ++k) {
        Matrix<S> next = mat_add(s, mat_mul(s, a, x), id);
        if (mat_eq(s, next, x)) return x;
        x = std::move(next);
    }
    Matrix<S> next = mat_add(s, mat_mul(s, a, x), id);
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t j = 0; j < a.n; ++j)
            if (!s.eq(x.at(i, j), next.at(i, j)))
                throw std::domain_error(
                    "least_fixed_point: no stabilization within " + std::to_string(a.n) +
                    " iterations; entry (" + std::to_string(i) + "," + std::to_string(j) +
                    ") oscillates between " + s.show(x.at(i, j)) + " and " +
                    s.show(next.at(i, j)));
    return x;  // unreachable: non-stabilization implies a differing entry
}

// -------------------------------------------------------------- ultrametrics

/// Symmetric, zero-diagonal distance table with values in [0, inf].
struct UltrametricCandidate {
    std::size_t n = 0;
    std::vector<TropicalValue> d;

    UltrametricCandidate() = default;
    explicit UltrametricCandidate(std::size_t dim)
        : n(dim), d(dim * dim, TropicalValue(Rational(0))) {}

    TropicalValue& at(std::size_t i, std::size_t j) { return d[i * n + j]; }
    const TropicalValue& at(std::size_t i, std::size_t j) const { return d[i * n + j]; }
};

inline void validate_metric(const UltrametricCandidate& d) {
    for (std::size_t i = 0; i < d.n; ++i)
        for (std::size_t j = 0; j < d.n; ++j)
            if (!d.at(i, j).is_inf() && d.at(i, j).value().is_negative())
                throw std::domain_error("metric: negative distance at (" + std::to_string(i) +
                                        "," + std::to_string(j) + ")");
    for (std::size_t i = 0; i < d.n; ++i)
        if (d.at(i, i) != TropicalValue(Rational(0)))
            throw std::domain_error("metric: nonzero diagonal at (" + std::to_string(i) + "," +
                                    std::to_string(i) + ")");
    for (std::size_t i = 0; i < d.n; ++i)
        for (std::size_t j = i + 1; j < d.n; ++j)
            if (d.at(i, j) != d.at(j, i))
                throw std::domain_error("metric: asymmetric at (" + std::to_string(i) + "," +
                                        std::to_string(j) + ")");
}

struct UltrametricReport {
    bool ultrametric = true;
    std::size_t i = 0, j = 0, k = 0;
    std::string witness;
};

/// d(i,k) <= max(d(i,j), d(j,k)) for all triples; witness names the first failure.
inline UltrametricReport is_ultrametric(const UltrametricCandidate& d) {
    validate_metric(d);
    UltrametricReport rep;
    for (std::size_t i = 0; i < d.n; ++i)
        for (std::size_t j = 0; j < d.n; ++j)
            for (std::size_t k = 0; k < d.n; ++k) {
                TropicalValue bound = trop_max(d.at(i, j), d.at(j, k));
                if (!(d.at(i, k) <= bound)) {
                    rep.ultrametric = false;
                    rep.i = i;
                    rep.j = j;
                    rep.k = k;
                    rep.witness = "(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                  std::to_string(k) + "): " + d.at(i, k).str() + " > max(" +
                                  d.at(i, j).str() + "," + d.at(j, k).str() + ")";
                    return rep;
                }
            }
    return rep;
}

/**
 * Minimax path closure: entry (i,j) becomes the least over paths i -> j of
 * the largest edge weight, i.e. the (min,max) Kleene star of the weight
 * matrix.  A candidate is ultrametric exactly when it is its own closure.
 */
inline UltrametricCandidate minimax_closure(const UltrametricCandidate& d) {
    validate_metric(d);
    MinMaxSemiring s;
    MinMaxMatrix a(d.n, s.zero());
    for (std::size_t i = 0; i < d.n * d.n; ++i) a.a[i] = d.d[i];
    MinMaxMatrix star = least_fixed_point(s, a);
    UltrametricCandidate out(d.n);
    for (std::size_t i = 0; i < d.n; ++i)
        for (std::size_t j = 0; j < d.n; ++j)
            if (i != j) out.at(i, j) = star.at(i, j);
    return out;
}

// ----------------------------------------------- representation valuations

/// Square matrix over exact rationals with ordinary arithmetic.
struct QMatrix {
    std::size_t n = 0;
    std::vector<Rational> a;

    QMatrix() = default;
    explicit QMatrix(std::size_t dim) : n(dim), a(dim * dim, Rational(0)) {}

    Rational& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    const Rational& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    friend bool operator==(const QMatrix& x, const QMatrix& y) {
        return x.n == y.n && x.a == y.a;
    }
    friend bool operator!=(const QMatrix& x, const QMatrix& y) { return !(x == y); }
};

inline QMatrix qmat_identity(std::size_t n) {
    QMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

inline QMatrix qmat_add(const QMatrix& x, const QMatrix& y) {
    if (x.n != y.n) throw std::domain_error("qmat_add: dimension mismatch");
    QMatrix out = x;
    for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] = out.a[i] + y.a[i];
    return out;
}

inline QMatrix qmat_mul(const QMatrix& x, const QMatrix& y) {
    if (x.n != y.n) throw std::domain_error("qmat_mul: dimension mismatch");
    QMatrix out(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        for (std::size_t k = 0; k < x.n; ++k)
            for (std::size_t j = 0; j < x.n; ++j)
                out.at(i, j) = out.at(i, j) + x.at(i, k) * y.at(k, j);
    return out;
}

inline QMatrix qmat_neg(const QMatrix& x) {
    QMatrix out = x;
    for (auto& e : out.a) e = -e;
    return out;
}

/// Entrywise p-adic valuation: a matrix over min-plus.
inline TropMatrix padic_matrix(std::int64_t p, const QMatrix& m) {
    TropMatrix out(m.n, TropicalValue::infinity());
    for (std::size_t i = 0; i < m.a.size(); ++i) out.a[i] = nu_padic(p, m.a[i]);
    return out;
}

/// A finitely generated matrix representation over the rationals.
struct RationalRep {
    std::size_t n = 0;
    std::int64_t p = 2;
    std::vector<std::pair<std::string, QMatrix>> generators;
};

struct RepValuation {
    std::vector<std::pair<std::string, TropMatrix>> images;
    ValuationReport report;
};

/**
 * Entrywise p-adic valuation of a matrix representation, checked as a
 * supermultiplicative valuation into M_n(min-plus) over all generator
 * words of length <= max_word: superadditivity is entrywise
 * v_p(a+b) >= min(v_p a, v_p b), supermultiplicativity is
 * nu(rs) >= nu(r)nu(s) in the matrix semiring order.  Plain
 * multiplicativity usually fails off the diagonal and is reported as such.
 */
inline RepValuation rep_to_valuation(const RationalRep& rep, std::size_t max_word = 3) {
    if (rep.n == 0 || rep.n > 16) throw std::domain_error("rep_to_valuation: bad dimension");
    for (const auto& [name, g] : rep.generators)
        if (g.n != rep.n)
            throw std::domain_error("rep_to_valuation: generator '" + name + "' is " +
                                    std::to_string(g.n) + "x" + std::to_string(g.n) +
                                    ", expected " + std::to_string(rep.n));

    TropicalSemiring trop;
    MatrixSemiring<TropicalSemiring> mt{trop, rep.n};
    auto nu = [&](const QMatrix& m) { return padic_matrix(rep.p, m); };

    RepValuation out;
    for (const auto& [name, g] : rep.generators) out.images.emplace_back(name, nu(g));

    // Distinct generator words up to the length bound, labels joined by '*'.
    std::vector<std::pair<std::string, QMatrix>> words;
    std::vector<std::pair<std::string, QMatrix>> frontier{{"", qmat_identity(rep.n)}};
    for (std::size_t len = 1; len <= max_word; ++len) {
        std::vector<std::pair<std::string, QMatrix>> next;
        for (const auto& [wname, w] : frontier)
            for (const auto& [gname, g] : rep.generators) {
                std::string name = wname.empty() ? gname : wname + "*" + gname;
                next.emplace_back(name, qmat_mul(w, g));
            }
        for (auto& [name, w] : next) {
            bool seen = false;
            for (const auto& [have, m] : words)
                if (m == w) {
                    seen = true;
                    break;
                }
            if (!seen) words.emplace_back(name, w);
            if (words.size() > 512) throw std::domain_error("rep_to_valuation: word budget exceeded");
        }
        frontier = std::move(next);
    }

    ValuationReport& r = out.report;
    QMatrix zero_q(rep.n);
    if (!mt.eq(nu(zero_q), mt.zero())) {
        r.unital = false;
        r.unital_witness = "nu(0) != 0";
    }
    if (!mt.eq(nu(qmat_identity(rep.n)), mt.one())) {
        r.unital = false;
        r.unital_witness = "nu(1) != 1";
    }
    if (!mt.eq(nu(qmat_neg(qmat_identity(rep.n))), mt.one())) {
        r.unital = false;
        r.unital_witness = "nu(-1) != 1";
    }

    for (const auto& [an, am] : words) {
        if (mt.eq(nu(am), mt.zero()) && !(am == zero_q)) {
            r.nondegenerate = false;
            r.nondegenerate_witness = an;
        }
        for (const auto& [bn, bm] : words) {
            TropMatrix va = nu(am), vb = nu(bm);
            TropMatrix vsum = nu(qmat_add(am, bm));
            TropMatrix vprod = nu(qmat_mul(am, bm));
            TropMatrix lower = mt.add(va, vb);
            if (r.superadditive && !mt.eq(mt.add(lower, vsum), lower)) {
                r.superadditive = false;
                r.superadditive_witness = "a=" + an + ", b=" + bn;
            }
            TropMatrix bound = mt.mul(va, vb);
            if (r.supermultiplicative && !mt.eq(mt.add(bound, vprod), bound)) {
                r.supermultiplicative = false;
                r.supermultiplicative_witness = "a=" + an + ", b=" + bn;
            }
            if (r.multiplicative && !mt.eq(vprod, bound)) {
                r.multiplicative = false;
                r.multiplicative_witness = "a=" + an + ", b=" + bn;
            }
        }
    }
    return out;
}

// ------------------------------------------------------------------- files

/// On-disk matrix: `matrix n=<N> semiring=<name>`, then N rows, `inf` or `p/q`.
struct MatrixFile {
    std::string semiring;
    std::size_t n = 0;
    std::vector<TropicalValue> entries;
};

inline void write_matrix(std::ostream& out, const MatrixFile& f) {
    out << "matrix n=" << f.n << " semiring=" << f.semiring << "\n";
    for (std::size_t i = 0; i < f.n; ++i) {
        for (std::size_t j = 0; j < f.n; ++j) {
            if (j) out << " ";
            out << f.entries[i * f.n + j].str();
        }
        out << "\n";
    }
}

inline MatrixFile read_matrix(std::istream& in) {
    std::string word;
    if (!(in >> word) || word != "matrix") throw std::domain_error("read_matrix: missing header");
    MatrixFile f;
    bool have_n = false;
    for (int i = 0; i < 2; ++i) {
        if (!(in >> word)) throw std::domain_error("read_matrix: truncated header");
        if (word.rfind("n=", 0) == 0) {
            f.n = static_cast<std::size_t>(std::stoul(word.substr(2)));
            have_n = true;
        } else if (word.rfind("semiring=", 0) == 0) {
            f.semiring = word.substr(9);
        } else {
            throw std::domain_error("read_matrix: unexpected header field '" + word + "'");
        }
    }
    if (!have_n || f.semiring.empty()) throw std::domain_error("read_matrix: incomplete header");
    if (f.n == 0 || f.n > 64) throw std::domain_error("read_matrix: unsupported dimension");
    for (std::size_t i = 0; i < f.n * f.n; ++i) {
        if (!(in >> word)) throw std::domain_error("read_matrix: truncated entries");
        f.entries.push_back(TropicalValue::parse(word));
    }
    return f;
}

template <Semiring S>
    requires std::same_as<typename S::Value, TropicalValue>
Matrix<S> matrix_from_file(const S&, const MatrixFile& f) {
    Matrix<S> m(f.n, TropicalValue::infinity());
    for (std::size_t i = 0; i < f.entries.size(); ++i) {
        if constexpr (requires(const TropicalValue& v) { S::require_valid(v); })
            S::require_valid(f.entries[i]);
        m.a[i] = f.entries[i];
    }
    return m;
}

template <Semiring S>
    requires std::same_as<typename S::Value, TropicalValue>
MatrixFile matrix_to_file(const Matrix<S>& m, const std::string& name) {
    return MatrixFile{name, m.n, m.a};
}

}  // namespace valuon
