#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "valuon/index_set.hpp"
#include "valuon/rational.hpp"
#include "valuon/ring.hpp"
#include "valuon/semiring.hpp"

namespace valuon {

/**
 * Coefficient structure for expressions.  Ring contexts support '-';
 * semiring contexts reject it at parse time (neg is still a member so a
 * single concept covers both, it just throws).  literal() interprets
 * integer tokens and label() resolves symbol tokens to coefficients.
 */
template <typename C>
concept ExprContext = requires(const C& c, const typename C::Value& a, const typename C::Value& b,
                               std::int64_t k, const std::string& name) {
    typename C::Value;
    { C::is_ring } -> std::convertible_to<bool>;
    { c.add(a, b) } -> std::same_as<typename C::Value>;
    { c.mul(a, b) } -> std::same_as<typename C::Value>;
    { c.neg(a) } -> std::same_as<typename C::Value>;
    { c.zero() } -> std::same_as<typename C::Value>;
    { c.one() } -> std::same_as<typename C::Value>;
    { c.eq(a, b) } -> std::same_as<bool>;
    { c.show(a) } -> std::same_as<std::string>;
    { c.literal(k) } -> std::same_as<typename C::Value>;
    { c.label(name) } -> std::same_as<std::optional<typename C::Value>>;
};

/// Expressions over a finite ring; integer literals mean k * 1_R.
struct RingExprContext {
    FiniteRing R;
    std::int64_t characteristic = 1;

    explicit RingExprContext(FiniteRing r) : R(std::move(r)) {
        Index acc = R.one();
        while (acc != R.zero()) {
            acc = R.add(acc, R.one());
            ++characteristic;
        }
    }

    using Value = Index;
    static constexpr bool is_ring = true;

    Value add(Value a, Value b) const { return R.add(a, b); }
    Value mul(Value a, Value b) const { return R.mul(a, b); }
    Value neg(Value a) const { return R.neg(a); }
    Value zero() const { return R.zero(); }
    Value one() const { return R.one(); }
    bool eq(Value a, Value b) const { return a == b; }
    std::string show(Value a) const { return R.label(a); }

    Value literal(std::int64_t k) const {
        std::int64_t m = ((k % characteristic) + characteristic) % characteristic;
        Value out = R.zero();
        for (std::int64_t i = 0; i < m; ++i) out = R.add(out, R.one());
        return out;
    }

    std::optional<Value> label(const std::string& name) const {
        if (name.size() > 1 && name.front() == '#') {
            std::size_t pos = 0;
            unsigned long v = std::stoul(name.substr(1), &pos);
            if (pos + 1 == name.size() && v < R.n()) return static_cast<Index>(v);
            return std::nullopt;
        }
        return R.index_of_label(name);
    }
};

/// Expressions with exact rational coefficients.
struct RationalExprContext {
    using Value = Rational;
    static constexpr bool is_ring = true;

    Value add(const Value& a, const Value& b) const { return a + b; }
    Value mul(const Value& a, const Value& b) const { return a * b; }
    Value neg(const Value& a) const { return -a; }
    Value zero() const { return Rational(0); }
    Value one() const { return Rational(1); }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    std::string show(const Value& a) const { return a.str(); }
    Value literal(std::int64_t k) const { return Rational(k); }
    std::optional<Value> label(const std::string&) const { return std::nullopt; }
};

/// Expressions over any idempotent semiring instance.
template <Semiring S>
struct SemiringExprContext {
    S s;

    using Value = typename S::Value;
    static constexpr bool is_ring = false;

    Value add(const Value& a, const Value& b) const { return s.add(a, b); }
    Value mul(const Value& a, const Value& b) const { return s.mul(a, b); }
    Value neg(const Value&) const {
        throw std::domain_error("expression: semiring coefficients have no negation");
    }
    Value zero() const { return s.zero(); }
    Value one() const { return s.one(); }
    bool eq(const Value& a, const Value& b) const { return s.eq(a, b); }
    std::string show(const Value& a) const { return s.show(a); }
    Value literal(std::int64_t k) const { return s.literal(k); }
    std::optional<Value> label(const std::string& name) const {
        if constexpr (requires {
                          { s.try_label(name) } -> std::same_as<std::optional<Value>>;
                      }) {
            return s.try_label(name);
        } else {
            return std::nullopt;
        }
    }
};

/// One token of a monomial word: a coefficient or a named variable.
template <typename V>
using ExprToken = std::variant<V, std::string>;

template <typename V>
struct Monomial {
    std::vector<ExprToken<V>> word;
};

/**
 * A finite formal sum of monomials.  Monomials keep their token order
 * (coefficients do not commute past variables); the commutative flag
 * selects the quotient where they do.
 */
template <ExprContext C>
struct Expression {
    using Value = typename C::Value;
    std::vector<Monomial<Value>> monomials;
    bool commutative = false;
};

namespace detail {

template <typename V>
bool is_var_token(const ExprToken<V>& t) {
    return std::holds_alternative<std::string>(t);
}

}  // namespace detail

/**
 * Monomial normal form: adjacent coefficients merged in order, identity
 * coefficients dropped (a lone constant keeps one token), a zero
 * coefficient kills the monomial.  Commutative mode instead folds all
 * coefficients to the front and sorts the variables.
 */
template <ExprContext C>
std::optional<Monomial<typename C::Value>> normalize_monomial(
    const C& ctx, std::vector<ExprToken<typename C::Value>> word, bool commutative) {
    using V = typename C::Value;
    if (commutative) {
        V coef = ctx.one();
        std::vector<std::string> vars;
        for (auto& t : word) {
            if (detail::is_var_token(t))
                vars.push_back(std::get<std::string>(t));
            else
                coef = ctx.mul(coef, std::get<V>(t));
        }
        if (ctx.eq(coef, ctx.zero())) return std::nullopt;
        std::sort(vars.begin(), vars.end());
        Monomial<V> m;
        if (!ctx.eq(coef, ctx.one()) || vars.empty()) m.word.emplace_back(std::move(coef));
        for (auto& v : vars) m.word.emplace_back(std::move(v));
        return m;
    }
    std::vector<ExprToken<V>> merged;
    for (auto& t : word) {
        if (!detail::is_var_token(t) && !merged.empty() && !detail::is_var_token(merged.back()))
            merged.back() = ctx.mul(std::get<V>(merged.back()), std::get<V>(t));
        else
            merged.push_back(std::move(t));
    }
    for (const auto& t : merged)
        if (!detail::is_var_token(t) && ctx.eq(std::get<V>(t), ctx.zero())) return std::nullopt;
    Monomial<V> m;
    for (auto& t : merged) {
        if (!detail::is_var_token(t) && ctx.eq(std::get<V>(t), ctx.one())) continue;
        m.word.push_back(std::move(t));
    }
    if (m.word.empty()) m.word.emplace_back(ctx.one());
    return m;
}

template <ExprContext C>
bool monomial_eq(const C& ctx, const Monomial<typename C::Value>& a,
                 const Monomial<typename C::Value>& b) {
    if (a.word.size() != b.word.size()) return false;
    for (std::size_t i = 0; i < a.word.size(); ++i) {
        bool va = detail::is_var_token(a.word[i]);
        if (va != detail::is_var_token(b.word[i])) return false;
        if (va) {
            if (std::get<std::string>(a.word[i]) != std::get<std::string>(b.word[i])) return false;
        } else if (!ctx.eq(std::get<typename C::Value>(a.word[i]),
                           std::get<typename C::Value>(b.word[i]))) {
            return false;
        }
    }
    return true;
}

namespace detail {

template <typename V>
std::vector<std::string> monomial_vars(const Monomial<V>& m) {
    std::vector<std::string> out;
    for (const auto& t : m.word)
        if (is_var_token(t)) out.push_back(std::get<std::string>(t));
    return out;
}

}  // namespace detail

/**
 * Expression normal form: every monomial normalized, zero monomials gone.
 * Idempotent coefficients collapse duplicate monomials; commutative mode
 * combines like variable words by coefficient addition and sorts monomials
 * by descending degree, then variable word.
 */
template <ExprContext C>
void expr_normalize(const C& ctx, Expression<C>& f) {
    using V = typename C::Value;
    std::vector<Monomial<V>> mono;
    for (auto& m : f.monomials) {
        auto n = normalize_monomial(ctx, std::move(m.word), f.commutative);
        if (n) mono.push_back(std::move(*n));
    }
    if (f.commutative) {
        std::vector<std::pair<std::vector<std::string>, V>> combined;
        for (auto& m : mono) {
            auto vars = detail::monomial_vars(m);
            V coef = detail::is_var_token(m.word.front()) ? ctx.one() : std::get<V>(m.word.front());
            auto it = std::find_if(combined.begin(), combined.end(),
                                   [&](const auto& p) { return p.first == vars; });
            if (it == combined.end())
                combined.emplace_back(std::move(vars), std::move(coef));
            else
                it->second = ctx.add(it->second, coef);
        }
        std::sort(combined.begin(), combined.end(), [](const auto& a, const auto& b) {
            if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
            return a.first < b.first;
        });
        mono.clear();
        for (auto& [vars, coef] : combined) {
            if (ctx.eq(coef, ctx.zero())) continue;
            Monomial<V> m;
            if (!ctx.eq(coef, ctx.one()) || vars.empty()) m.word.emplace_back(std::move(coef));
            for (auto& v : vars) m.word.emplace_back(std::move(v));
            mono.push_back(std::move(m));
        }
    } else if (ctx.eq(ctx.add(ctx.one(), ctx.one()), ctx.one())) {
        // Idempotent coefficients: a duplicated word adds nothing.
        std::vector<Monomial<V>> unique;
        for (auto& m : mono) {
            bool seen = false;
            for (const auto& u : unique)
                if (monomial_eq(ctx, u, m)) {
                    seen = true;
                    break;
                }
            if (!seen) unique.push_back(std::move(m));
        }
        mono = std::move(unique);
    }
    f.monomials = std::move(mono);
}

template <ExprContext C>
Expression<C> expr_zero(const C&, bool commutative = false) {
    Expression<C> e;
    e.commutative = commutative;
    return e;
}

template <ExprContext C>
Expression<C> expr_constant(const C& ctx, const typename C::Value& v, bool commutative = false) {
    Expression<C> e;
    e.commutative = commutative;
    e.monomials.push_back(Monomial<typename C::Value>{{ExprToken<typename C::Value>(v)}});
    expr_normalize(ctx, e);
    return e;
}

template <ExprContext C>
Expression<C> expr_variable(const C& ctx, const std::string& name, bool commutative = false) {
    Expression<C> e;
    e.commutative = commutative;
    e.monomials.push_back(Monomial<typename C::Value>{{ExprToken<typename C::Value>(name)}});
    expr_normalize(ctx, e);
    return e;
}

namespace detail {
template <ExprContext C>
void require_same_mode(const Expression<C>& f, const Expression<C>& g, const char* what) {
    if (f.commutative != g.commutative)
        throw std::domain_error(std::string(what) + ": mixed commutative and non-commutative operands");
}
}  // namespace detail

template <ExprContext C>
Expression<C> expr_add(const C& ctx, Expression<C> f, const Expression<C>& g) {
    detail::require_same_mode(f, g, "expr_add");
    f.monomials.insert(f.monomials.end(), g.monomials.begin(), g.monomials.end());
    expr_normalize(ctx, f);
    return f;
}

template <ExprContext C>
Expression<C> expr_mul(const C& ctx, const Expression<C>& f, const Expression<C>& g) {
    detail::require_same_mode(f, g, "expr_mul");
    Expression<C> out;
    out.commutative = f.commutative;
    for (const auto& a : f.monomials)
        for (const auto& b : g.monomials) {
            Monomial<typename C::Value> m;
            m.word = a.word;
            m.word.insert(m.word.end(), b.word.begin(), b.word.end());
            out.monomials.push_back(std::move(m));
        }
    expr_normalize(ctx, out);
    return out;
}

template <ExprContext C>
Expression<C> expr_neg(const C& ctx, Expression<C> f) {
    using V = typename C::Value;
    for (auto& m : f.monomials) {
        if (!m.word.empty() && !detail::is_var_token(m.word.front()))
            m.word.front() = ctx.neg(std::get<V>(m.word.front()));
        else
            m.word.insert(m.word.begin(), ExprToken<V>(ctx.neg(ctx.one())));
    }
    expr_normalize(ctx, f);
    return f;
}

template <ExprContext C>
Expression<C> expr_pow(const C& ctx, const Expression<C>& f, std::uint64_t k) {
    Expression<C> acc = expr_constant(ctx, ctx.one(), f.commutative);
    for (std::uint64_t i = 0; i < k; ++i) acc = expr_mul(ctx, acc, f);
    return acc;
}

template <ExprContext C>
std::vector<std::string> expr_variables(const Expression<C>& f) {
    std::vector<std::string> out;
    for (const auto& m : f.monomials)
        for (const auto& t : m.word)
            if (detail::is_var_token(t)) out.push_back(std::get<std::string>(t));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <ExprContext C>
typename C::Value evaluate_monomial(const C& ctx, const Monomial<typename C::Value>& m,
                                    const std::map<std::string, typename C::Value>& at) {
    typename C::Value acc = ctx.one();
    for (const auto& t : m.word) {
        if (detail::is_var_token(t)) {
            auto it = at.find(std::get<std::string>(t));
            if (it == at.end())
                throw std::invalid_argument("evaluate: unbound variable '" +
                                            std::get<std::string>(t) + "'");
            acc = ctx.mul(acc, it->second);
        } else {
            acc = ctx.mul(acc, std::get<typename C::Value>(t));
        }
    }
    return acc;
}

/// Substitutes and folds; the empty expression evaluates to 0.
template <ExprContext C>
typename C::Value evaluate(const C& ctx, const Expression<C>& f,
                           const std::map<std::string, typename C::Value>& at) {
    typename C::Value acc = ctx.zero();
    for (const auto& m : f.monomials) acc = ctx.add(acc, evaluate_monomial(ctx, m, at));
    return acc;
}

// ---------------------------------------------------------------- parsing

namespace detail {

struct Lexeme {
    enum class Kind { Int, Symbol, Plus, Minus, Star, Caret, LParen, RParen, End };
    Kind kind;
    std::string text;
    std::uint64_t num = 0;
    std::size_t pos = 0;
};

inline std::invalid_argument parse_fail(std::size_t pos, const std::string& why) {
    return std::invalid_argument("parse error at " + std::to_string(pos) + ": " + why);
}

inline std::vector<Lexeme> lex_expression(const std::string& s) {
    std::vector<Lexeme> out;
    std::size_t i = 0;
    auto bracketed = [&](std::size_t from) {
        // Scans a balanced {...} or [...] group, returns one past the closer.
        std::vector<char> stack;
        std::size_t j = from;
        do {
            char c = s[j];
            if (c == '{') stack.push_back('}');
            if (c == '[') stack.push_back(']');
            if (c == '}' || c == ']') {
                if (stack.empty() || stack.back() != c) throw parse_fail(j, "unbalanced bracket");
                stack.pop_back();
            }
            ++j;
        } while (!stack.empty() && j < s.size());
        if (!stack.empty()) throw parse_fail(from, "unclosed bracket");
        return j;
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        using K = Lexeme::Kind;
        if (c == '+' || c == '-' || c == '*' || c == '^' || c == '(' || c == ')') {
            K k = c == '+'   ? K::Plus
                  : c == '-' ? K::Minus
                  : c == '*' ? K::Star
                  : c == '^' ? K::Caret
                  : c == '(' ? K::LParen
                             : K::RParen;
            out.push_back({k, std::string(1, c), 0, start});
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::uint64_t v = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                v = v * 10 + static_cast<std::uint64_t>(s[i] - '0');
                if (v > 1000000000000000ULL) throw parse_fail(start, "integer literal too large");
                ++i;
            }
            out.push_back({K::Int, s.substr(start, i - start), v, start});
            continue;
        }
        if (c == '#') {
            ++i;
            if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
                throw parse_fail(start, "'#' must be followed by an element index");
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({K::Symbol, s.substr(start, i - start), 0, start});
            continue;
        }
        if (c == '{' || c == '[') {
            i = bracketed(i);
            out.push_back({K::Symbol, s.substr(start, i - start), 0, start});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            if (i < s.size() && s[i] == '{') i = bracketed(i);
            out.push_back({K::Symbol, s.substr(start, i - start), 0, start});
            continue;
        }
        throw parse_fail(i, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Lexeme::Kind::End, "", 0, s.size()});
    return out;
}

template <ExprContext C>
class ExprParser {
public:
    ExprParser(const C& ctx, std::vector<std::string> variables, bool commutative,
               const std::string& text)
        : ctx_(ctx), vars_(std::move(variables)), commutative_(commutative),
          toks_(lex_expression(text)) {}

    Expression<C> run() {
        Expression<C> e = parse_expr();
        if (peek().kind != Lexeme::Kind::End)
            throw parse_fail(peek().pos, "unexpected '" + peek().text + "'");
        return e;
    }

private:
    using K = Lexeme::Kind;

    const C& ctx_;
    std::vector<std::string> vars_;
    bool commutative_;
    std::vector<Lexeme> toks_;
    std::size_t at_ = 0;

    const Lexeme& peek() const { return toks_[at_]; }
    Lexeme take() { return toks_[at_++]; }

    bool starts_factor(K k) const {
        return k == K::Int || k == K::Symbol || k == K::LParen || k == K::Minus;
    }

    Expression<C> parse_expr() {
        Expression<C> acc = parse_term();
        while (peek().kind == K::Plus || peek().kind == K::Minus) {
            // A '-' that starts a numeric literal belongs to the factor,
            // not to the sum; only treat it as subtraction here.
            bool minus = peek().kind == K::Minus;
            std::size_t pos = peek().pos;
            take();
            Expression<C> t = parse_term();
            if (minus) {
                if (!C::is_ring) throw parse_fail(pos, "'-' requires ring coefficients");
                t = expr_neg(ctx_, std::move(t));
            }
            acc = expr_add(ctx_, std::move(acc), t);
        }
        return acc;
    }

    Expression<C> parse_term() {
        Expression<C> acc = parse_factor();
        while (true) {
            if (peek().kind == K::Star) {
                take();
                acc = expr_mul(ctx_, acc, parse_factor());
            } else if (peek().kind == K::Int || peek().kind == K::Symbol ||
                       peek().kind == K::LParen) {
                acc = expr_mul(ctx_, acc, parse_factor());
            } else {
                break;
            }
        }
        return acc;
    }

    Expression<C> parse_factor() {
        Expression<C> base = parse_signed_base();
        while (peek().kind == K::Caret) {
            take();
            if (peek().kind != K::Int) throw parse_fail(peek().pos, "'^' needs an integer exponent");
            std::uint64_t k = take().num;
            if (k > 999) throw parse_fail(peek().pos, "exponent too large");
            base = expr_pow(ctx_, base, k);
        }
        return base;
    }

    Expression<C> parse_signed_base() {
        if (peek().kind == K::Minus) {
            std::size_t pos = take().pos;
            if (peek().kind == K::Int) {
                std::uint64_t v = take().num;
                return expr_constant(ctx_, ctx_.literal(-static_cast<std::int64_t>(v)),
                                     commutative_);
            }
            if (!C::is_ring) throw parse_fail(pos, "'-' requires ring coefficients");
            return expr_neg(ctx_, parse_signed_base());
        }
        return parse_base();
    }

    Expression<C> parse_base() {
        const Lexeme& t = peek();
        if (t.kind == K::Int) {
            std::uint64_t v = take().num;
            return expr_constant(ctx_, ctx_.literal(static_cast<std::int64_t>(v)), commutative_);
        }
        if (t.kind == K::Symbol) {
            Lexeme sym = take();
            if (std::find(vars_.begin(), vars_.end(), sym.text) != vars_.end())
                return expr_variable(ctx_, sym.text, commutative_);
            if (auto v = ctx_.label(sym.text)) return expr_constant(ctx_, *v, commutative_);
            throw parse_fail(sym.pos, "unknown symbol '" + sym.text + "'");
        }
        if (t.kind == K::LParen) {
            take();
            Expression<C> inner = parse_expr();
            if (peek().kind != K::RParen) throw parse_fail(peek().pos, "expected ')'");
            take();
            // A fully constant group folds to one coefficient, so products
            // like (a+b)z^2 stay a single monomial.
            if (expr_variables(inner).empty())
                return expr_constant(ctx_, evaluate(ctx_, inner, {}), commutative_);
            return inner;
        }
        throw parse_fail(t.pos, "expected a value");
    }
};

}  // namespace detail

/**
 * Grammar: expr := term (('+'|'-') term)*; term := factor ('*'? factor)*;
 * factor := ('-')? (INT | SYMBOL | '(' expr ')') ('^' UINT)*.  Symbols
 * resolve to declared variables first, then to coefficient labels.
 * '-' before an integer is a signed literal in any context; elsewhere it
 * needs ring coefficients.
 */
template <ExprContext C>
Expression<C> parse_expression(const std::string& text, const C& ctx,
                               const std::vector<std::string>& variables,
                               bool commutative = false) {
    detail::ExprParser<C> p(ctx, variables, commutative, text);
    return p.run();
}

// --------------------------------------------------------------- printing

namespace detail {

inline bool plain_int_token(const std::string& s) {
    std::size_t i = (s.size() > 1 && s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

/// Whether the lexer would read the whole string as one symbol token.
inline bool single_symbol_token(const std::string& s) {
    if (s.empty()) return false;
    try {
        auto toks = lex_expression(s);
        return toks.size() == 2 && toks[0].kind == Lexeme::Kind::Symbol && toks[0].text == s;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

template <ExprContext C>
std::string coef_display(const C& ctx, const typename C::Value& v) {
    std::string s = ctx.show(v);
    if (plain_int_token(s) || single_symbol_token(s)) return s;
    return "(" + s + ")";
}

template <ExprContext C>
std::string monomial_display(const C& ctx, const Monomial<typename C::Value>& m) {
    std::string out;
    std::size_t i = 0;
    while (i < m.word.size()) {
        if (!out.empty()) out += "*";
        if (is_var_token(m.word[i])) {
            const std::string& name = std::get<std::string>(m.word[i]);
            std::size_t run = 1;
            while (i + run < m.word.size() && is_var_token(m.word[i + run]) &&
                   std::get<std::string>(m.word[i + run]) == name)
                ++run;
            out += name;
            if (run > 1) out += "^" + std::to_string(run);
            i += run;
        } else {
            out += coef_display(ctx, std::get<typename C::Value>(m.word[i]));
            ++i;
        }
    }
    return out;
}

}  // namespace detail

/**
 * Canonical text form: monomials joined with " + ", tokens with "*",
 * repeated variables as powers.  Rational coefficients print their sign
 * through the joiner (" - "), so parsed input like "x^3*12*x - 2*x + x*2"
 * round-trips.  The zero expression prints as "0".
 */
template <ExprContext C>
std::string to_string(const C& ctx, const Expression<C>& f) {
    using V = typename C::Value;
    if (f.monomials.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < f.monomials.size(); ++i) {
        Monomial<V> m = f.monomials[i];
        bool negative = false;
        if constexpr (std::is_same_v<V, Rational>) {
            if (!m.word.empty() && !detail::is_var_token(m.word.front())) {
                Rational c = std::get<V>(m.word.front());
                if (c.is_negative()) {
                    negative = true;
                    if (-c == Rational(1) && m.word.size() > 1)
                        m.word.erase(m.word.begin());
                    else
                        m.word.front() = -c;
                }
            }
        }
        std::string body = detail::monomial_display(ctx, m);
        if (i == 0)
            out = negative ? "-" + body : body;
        else
            out += (negative ? " - " : " + ") + body;
    }
    return out;
}

// --------------------------------------------------------- tropicalization

/// A tropicalized expression plus the context to keep computing with it.
template <Semiring S>
struct Tropicalization {
    SemiringExprContext<S> ctx;
    Expression<SemiringExprContext<S>> expr;
    bool degenerate = false;  // some nonzero coefficient was valued at 0
};

/// Replaces every coefficient by its value under nu, keeping token order.
template <ExprContext C, Semiring S, typename F>
Tropicalization<S> tropicalize(const C& src, const Expression<C>& f, const S& s, F&& nu) {
    Tropicalization<S> out{SemiringExprContext<S>{s}, {}, false};
    out.expr.commutative = f.commutative;
    for (const auto& m : f.monomials) {
        Monomial<typename S::Value> word;
        for (const auto& t : m.word) {
            if (detail::is_var_token(t)) {
                word.word.emplace_back(std::get<std::string>(t));
            } else {
                const auto& c = std::get<typename C::Value>(t);
                auto v = nu(c);
                if (s.eq(v, s.zero()) && !src.eq(c, src.zero())) out.degenerate = true;
                word.word.emplace_back(std::move(v));
            }
        }
        out.expr.monomials.push_back(std::move(word));
    }
    expr_normalize(out.ctx, out.expr);
    return out;
}

// ----------------------------------------------------------------- crease

/**
 * Evaluation detail at one point: the total, each monomial's value, and
 * the sum with each single monomial deleted.  The point is a crease point
 * when every deletion leaves the total unchanged.  min_multiplicity counts
 * monomials achieving the total (at least 2 at a crease point of a
 * totally ordered target).
 */
template <ExprContext C>
struct CreaseReport {
    typename C::Value total;
    std::vector<typename C::Value> monomial_values;
    std::vector<typename C::Value> deletion_sums;
    bool crease = false;
    std::size_t min_multiplicity = 0;
};

template <ExprContext C>
CreaseReport<C> is_crease_point(const C& ctx, const Expression<C>& f,
                                const std::map<std::string, typename C::Value>& at) {
    if (f.monomials.empty())
        throw std::domain_error("is_crease_point: expression has no monomials");
    CreaseReport<C> rep{ctx.zero(), {}, {}, true, 0};
    for (const auto& m : f.monomials)
        rep.monomial_values.push_back(evaluate_monomial(ctx, m, at));
    for (const auto& v : rep.monomial_values) rep.total = ctx.add(rep.total, v);
    for (std::size_t k = 0; k < rep.monomial_values.size(); ++k) {
        typename C::Value sum = ctx.zero();
        for (std::size_t i = 0; i < rep.monomial_values.size(); ++i)
            if (i != k) sum = ctx.add(sum, rep.monomial_values[i]);
        if (!ctx.eq(sum, rep.total)) rep.crease = false;
        rep.deletion_sums.push_back(std::move(sum));
    }
    for (const auto& v : rep.monomial_values)
        if (ctx.eq(v, rep.total)) ++rep.min_multiplicity;
    return rep;
}

/// All crease points of a univariate (or constant) expression in a domain.
template <ExprContext C>
std::vector<typename C::Value> crease_points(const C& ctx, const Expression<C>& f,
                                             const std::vector<typename C::Value>& domain) {
    auto vars = expr_variables(f);
    if (vars.size() > 1)
        throw std::domain_error("crease_points: expression must have at most one variable");
    std::vector<typename C::Value> out;
    for (const auto& z : domain) {
        std::map<std::string, typename C::Value> at;
        if (!vars.empty()) at.emplace(vars[0], z);
        if (is_crease_point(ctx, f, at).crease) out.push_back(z);
    }
    return out;
}

// ------------------------------------------------------------------ roots

/**
 * Codes of all assignments over `universe` (odometer order, first variable
 * most significant) where f evaluates to zero.  This is the solution-set
 * value of f inside ZeroSetSemiring(|R|^|universe|).
 */
inline IndexSet zero_set(const RingExprContext& ctx, const Expression<RingExprContext>& f,
                         const std::vector<std::string>& universe,
                         std::size_t max_points = (1u << 20)) {
    for (const auto& v : expr_variables(f))
        if (std::find(universe.begin(), universe.end(), v) == universe.end())
            throw std::domain_error("zero_set: variable '" + v + "' missing from the universe");
    std::size_t total = 1;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        total *= ctx.R.n();
        if (total > max_points) throw std::domain_error("zero_set: domain too large");
    }
    IndexSet out;
    std::map<std::string, Index> at;
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = universe.size(); i-- > 0;) {
            at[universe[i]] = static_cast<Index>(c % ctx.R.n());
            c /= ctx.R.n();
        }
        if (evaluate(ctx, f, at) == ctx.R.zero()) out.insert(static_cast<Index>(code));
    }
    return out;
}

/// Exact zero set of f over its own variables, as assignment tuples.
inline std::vector<std::vector<Index>> roots(const RingExprContext& ctx,
                                             const Expression<RingExprContext>& f,
                                             std::size_t max_points = (1u << 20)) {
    auto vars = expr_variables(f);
    IndexSet codes = zero_set(ctx, f, vars, max_points);
    std::vector<std::vector<Index>> out;
    for (Index code : codes) {
        std::vector<Index> tuple(vars.size());
        std::size_t c = code;
        for (std::size_t i = vars.size(); i-- > 0;) {
            tuple[i] = static_cast<Index>(c % ctx.R.n());
            c /= ctx.R.n();
        }
        out.push_back(std::move(tuple));
    }
    return out;
}

/**
 * Subsets of a finite point set with intersection as addition and union
 * as multiplication.  The natural order is inclusion; the full set is the
 * additive identity (top) and the empty set the multiplicative one.
 * Solution sets of expressions take values here: common roots refine,
 * products accumulate.
 */
struct ZeroSetSemiring {
    std::size_t points = 0;

    using Value = IndexSet;

    Value add(const Value& a, const Value& b) const { return set_intersect(a, b); }
    Value mul(const Value& a, const Value& b) const { return set_union(a, b); }
    Value zero() const {
        std::vector<Index> all(points);
        for (std::size_t i = 0; i < points; ++i) all[i] = static_cast<Index>(i);
        return IndexSet(std::move(all));
    }
    Value one() const { return IndexSet(); }
    bool eq(const Value& a, const Value& b) const { return a == b; }
    std::string show(const Value& a) const { return a.str(); }

    Value literal(std::int64_t k) const { return k == 0 ? zero() : one(); }
};

// ------------------------------------------------------------ root/crease

struct RootCreaseReport {
    std::size_t root_count = 0;
    std::size_t violations = 0;
    std::string witness;

    bool ok() const { return violations == 0; }
};

/**
 * For every root of f, the image of the root under nu must be a crease
 * point of the tropicalization of f.  A violation falsifies the theorem
 * this encodes, so callers treat it as a hard failure.
 */
template <Semiring S, typename F>
RootCreaseReport root_crease_check(const RingExprContext& rctx,
                                   const Expression<RingExprContext>& f, const S& s, F&& nu) {
    RootCreaseReport rep;
    auto trop = tropicalize(rctx, f, s, nu);
    auto vars = expr_variables(f);
    auto rts = roots(rctx, f);
    rep.root_count = rts.size();
    if (trop.expr.monomials.empty()) return rep;  // zero tropicalization: nothing to delete
    for (const auto& tuple : rts) {
        std::map<std::string, typename S::Value> at;
        for (std::size_t i = 0; i < vars.size(); ++i) at.emplace(vars[i], nu(tuple[i]));
        if (!is_crease_point(trop.ctx, trop.expr, at).crease) {
            ++rep.violations;
            if (rep.witness.empty()) {
                std::string pt;
                for (std::size_t i = 0; i < tuple.size(); ++i)
                    pt += (i ? "," : "") + rctx.R.label(tuple[i]);
                rep.witness = "root (" + pt + ") is not a crease point";
            }
        }
    }
    return rep;
}

}  // namespace valuon
