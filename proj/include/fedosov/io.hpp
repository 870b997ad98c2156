#pragma once

#include "fedosov/star_function.hpp"

#include <json.hpp>

#include <cctype>
#include <sstream>
#include <string>

namespace fedosov::io {

// ---------------------------------------------------------------------------
// Rendering. Canonical and injective: equal strings iff equal values.
// Term order follows the value's canonical map order (h power, grading
// degree, monomial); every piece of the grammar below round-trips.
// ---------------------------------------------------------------------------

inline std::string render(const Rational &q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1)
        os << "/" << denominator(q);
    return os.str();
}

namespace detail {

inline std::string positive_rational(const Rational &q) { // q > 0
    std::string s = render(q);
    return denominator(q) == 1 ? s : "(" + s + ")";
}

/// Splits a scalar into a displayed sign and a positive body prefix.
/// Mixed complex coefficients keep their sign inside the parentheses.
inline void coefficient_body(const Scalar &c, bool &neg, std::string &body,
                             bool has_monomial) {
    if (c.im() == 0) {
        neg = c.re() < 0;
        Rational mag = neg ? Rational(-c.re()) : c.re();
        if (mag == 1 && has_monomial)
            body.clear();
        else
            body = positive_rational(mag);
    } else if (c.re() == 0) {
        neg = c.im() < 0;
        Rational mag = neg ? Rational(-c.im()) : c.im();
        body = (mag == 1) ? "I" : positive_rational(mag) + " I";
    } else {
        neg = false;
        Rational im = c.im();
        bool im_neg = im < 0;
        Rational im_mag = im_neg ? Rational(-im) : im;
        body = "(" + render(c.re()) + (im_neg ? " - " : " + ") +
               (im_mag == 1 ? "I" : render(im_mag) + " I") + ")";
    }
}

inline void append_power(std::string &out, const std::string &sym, unsigned e) {
    if (e == 0)
        return;
    if (!out.empty())
        out += ' ';
    out += sym;
    if (e > 1)
        out += "^" + std::to_string(e);
}

inline std::string monomial_body(const Mono &m, unsigned h,
                                 const std::vector<unsigned> &y,
                                 const std::vector<int> &dx) {
    std::string out;
    for (size_t i = 0; i < m.x.size(); ++i)
        append_power(out, "x" + std::to_string(i + 1), m.x[i]);
    append_power(out, "t", m.t);
    append_power(out, "h", h);
    for (size_t i = 0; i < y.size(); ++i)
        append_power(out, "y" + std::to_string(i + 1), y[i]);
    for (int i : dx)
        append_power(out, "dx" + std::to_string(i), 1);
    return out;
}

inline void emit_term(std::string &out, bool neg, const std::string &body) {
    if (out.empty())
        out = neg ? "- " + body : body;
    else
        out += (neg ? " - " : " + ") + body;
}

/// One summand: coefficient polynomial times h^h y^y dx^dx. A multi-term
/// coefficient is parenthesized.
inline void render_summand(std::string &out, const Poly &p, unsigned h,
                           const std::vector<unsigned> &y,
                           const std::vector<int> &dx) {
    static const std::vector<unsigned> no_y;
    static const std::vector<int> no_dx;
    bool tail = h > 0 || !y.empty() || !dx.empty();
    if (p.terms().size() == 1 || !tail) {
        for (auto &[m, c] : p.terms()) {
            bool neg = false;
            std::string coeff;
            std::string mono = monomial_body(m, h, y, dx);
            coefficient_body(c, neg, coeff, !mono.empty());
            std::string body = coeff;
            if (!mono.empty())
                body += body.empty() ? mono : " " + mono;
            emit_term(out, neg, body);
        }
        return;
    }
    std::string inner;
    for (auto &[m, c] : p.terms()) {
        bool neg = false;
        std::string coeff;
        std::string mono = monomial_body(m, 0, no_y, no_dx);
        coefficient_body(c, neg, coeff, !mono.empty());
        std::string body = coeff;
        if (!mono.empty())
            body += body.empty() ? mono : " " + mono;
        emit_term(inner, neg, body);
    }
    std::string mono = monomial_body(Mono{}, h, y, dx);
    emit_term(out, false, "(" + inner + ") " + mono);
}

} // namespace detail

inline std::string render(const Scalar &c) {
    bool neg = false;
    std::string body;
    detail::coefficient_body(c, neg, body, false);
    return neg ? "- " + body : body;
}

inline std::string render(const Poly &p) {
    if (p.is_zero())
        return "0";
    std::string out;
    detail::render_summand(out, p, 0, {}, {});
    return out;
}

inline std::string render(const StarFunction &f) {
    if (f.is_zero())
        return "0";
    std::string out;
    for (size_t k = 0; k < f.coeff_count(); ++k)
        if (!f.coeff(k).is_zero())
            detail::render_summand(out, f.coeff(k), (unsigned)k, {}, {});
    return out;
}

inline std::string render(const WeylForm &a) {
    if (a.is_zero())
        return "0";
    std::string out;
    for (auto &[key, p] : a.terms())
        detail::render_summand(out, p, key.h, key.y, key.dx);
    return out;
}

// ---------------------------------------------------------------------------
// Parsing. Grammar (whitespace-insensitive, '*' optional):
//   expr    := ['+'|'-'] term (('+'|'-') term)*
//   term    := factor ('*'? factor)*
//   factor  := rational | 'I' | sym ('^' uint)? | '(' expr ')'
//   sym     := 'h' | 't' | 'x'uint | 'y'uint | 'dx'uint
//   rational:= uint ('/' uint)?
// ---------------------------------------------------------------------------

struct ParseOptions {
    bool allow_h = true;
    bool allow_t = true;
    bool allow_y = true;
    bool allow_dx = true;
};

namespace detail {

/// Chart-free generalized element used as the parse target.
struct RawElem {
    std::map<WeylKey, Poly> terms;

    static RawElem make_scalar(const Scalar &c) {
        RawElem e;
        if (!c.is_zero())
            e.terms[WeylKey{}] = Poly::constant(c);
        return e;
    }
    static RawElem make_poly(Poly p) {
        RawElem e;
        if (!p.is_zero())
            e.terms[WeylKey{}] = std::move(p);
        return e;
    }
    static RawElem make_key(WeylKey key) {
        RawElem e;
        e.terms[std::move(key)] = Poly::one();
        return e;
    }

    void add_term(WeylKey key, const Poly &p) {
        if (p.is_zero())
            return;
        key.trim();
        auto [it, fresh] = terms.emplace(std::move(key), p);
        if (!fresh) {
            it->second += p;
            if (it->second.is_zero())
                terms.erase(it);
        }
    }

    RawElem operator+(const RawElem &o) const {
        RawElem r = *this;
        for (auto &[k, p] : o.terms)
            r.add_term(k, p);
        return r;
    }
    RawElem operator-() const {
        RawElem r;
        for (auto &[k, p] : terms)
            r.terms.emplace(k, -p);
        return r;
    }
    RawElem operator*(const RawElem &o) const {
        RawElem r;
        std::vector<int> dx;
        for (auto &[ka, pa] : terms)
            for (auto &[kb, pb] : o.terms) {
                int sign = wedge_merge(ka.dx, kb.dx, dx);
                if (sign == 0)
                    continue;
                WeylKey key;
                key.h = ka.h + kb.h;
                key.y.assign(std::max(ka.y.size(), kb.y.size()), 0u);
                for (size_t q = 0; q < ka.y.size(); ++q)
                    key.y[q] += ka.y[q];
                for (size_t q = 0; q < kb.y.size(); ++q)
                    key.y[q] += kb.y[q];
                key.dx = dx;
                Poly p = pa * pb;
                r.add_term(std::move(key), sign == 1 ? p : -p);
            }
        return r;
    }
};

class Parser {
  public:
    Parser(std::string_view text, const ParseOptions &opt) : text_(text), opt_(opt) {}

    RawElem parse() {
        RawElem e = parse_expr();
        skip_ws();
        if (pos_ < text_.size())
            fail("unexpected trailing input");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string &msg) const {
        throw parse_error(msg, line_, col_);
    }

    void advance() {
        if (pos_ < text_.size()) {
            if (text_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace((unsigned char)text_[pos_]))
            advance();
    }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    bool eat(char c) {
        skip_ws();
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    unsigned parse_uint() {
        skip_ws();
        if (!std::isdigit((unsigned char)peek()))
            fail("expected a number");
        unsigned long v = 0;
        while (std::isdigit((unsigned char)peek())) {
            v = v * 10 + (unsigned long)(peek() - '0');
            if (v > 1000000000UL)
                fail("number too large");
            advance();
        }
        return (unsigned)v;
    }

    RawElem parse_expr() {
        bool neg = false;
        skip_ws();
        if (eat('-'))
            neg = true;
        else
            eat('+');
        RawElem acc = parse_term();
        if (neg)
            acc = -acc;
        while (true) {
            skip_ws();
            char c = peek();
            if (c == '+' || c == '-') {
                advance();
                RawElem t = parse_term();
                acc = c == '+' ? acc + t : acc + (-t);
            } else {
                return acc;
            }
        }
    }

    RawElem parse_term() {
        RawElem acc = parse_factor();
        while (true) {
            skip_ws();
            char c = peek();
            if (c == '*') {
                advance();
                acc = acc * parse_factor();
            } else if (c == '(' || c == 'I' || c == 'i' || c == 'h' || c == 't' ||
                       c == 'x' || c == 'y' || c == 'd' ||
                       std::isdigit((unsigned char)c)) {
                acc = acc * parse_factor();
            } else {
                return acc;
            }
        }
    }

    unsigned parse_power() {
        skip_ws();
        if (peek() == '^') {
            advance();
            return parse_uint();
        }
        return 1;
    }

    RawElem parse_factor() {
        skip_ws();
        char c = peek();
        if (c == '\0')
            fail("unexpected end of input");
        if (c == '(') {
            advance();
            RawElem e = parse_expr();
            skip_ws();
            if (!eat(')'))
                fail("expected ')'");
            return e;
        }
        if (std::isdigit((unsigned char)c)) {
            unsigned num = parse_uint();
            Rational q(num);
            skip_ws_for_slash();
            if (peek() == '/') {
                advance();
                unsigned den = parse_uint();
                if (den == 0)
                    fail("zero denominator");
                q = Rational(num, den);
            }
            return RawElem::make_scalar(Scalar(q));
        }
        if (c == 'I' || c == 'i') {
            advance();
            return RawElem::make_scalar(Scalar::i());
        }
        if (c == 'd') {
            advance();
            if (peek() != 'x')
                fail("expected 'dx'");
            advance();
            unsigned idx = parse_uint();
            if (!opt_.allow_dx)
                fail("dx is not allowed in this context");
            if (idx == 0)
                fail("dx index must be >= 1");
            skip_ws();
            if (peek() == '^') {
                advance();
                if (parse_uint() != 1)
                    fail("dx generators square to zero");
            }
            WeylKey key;
            key.dx.push_back((int)idx);
            return RawElem::make_key(std::move(key));
        }
        if (c == 'h') {
            advance();
            if (!opt_.allow_h)
                fail("h is not allowed in this context");
            WeylKey key;
            key.h = parse_power();
            return RawElem::make_key(std::move(key));
        }
        if (c == 't') {
            advance();
            if (!opt_.allow_t)
                fail("t is not allowed in this context");
            return RawElem::make_poly(Poly::var_t(parse_power()));
        }
        if (c == 'x') {
            advance();
            unsigned idx = parse_uint();
            if (idx == 0)
                fail("variable index must be >= 1");
            return RawElem::make_poly(Poly::variable((int)idx, parse_power()));
        }
        if (c == 'y') {
            advance();
            unsigned idx = parse_uint();
            if (!opt_.allow_y)
                fail("y is not allowed in this context");
            if (idx == 0)
                fail("y index must be >= 1");
            WeylKey key;
            key.y.assign(idx, 0u);
            key.y[idx - 1] = parse_power();
            return RawElem::make_key(std::move(key));
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    void skip_ws_for_slash() {
        size_t p = pos_;
        int l = line_, cl = col_;
        skip_ws();
        if (peek() != '/') {
            pos_ = p;
            line_ = l;
            col_ = cl;
        }
    }

    std::string_view text_;
    ParseOptions opt_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

} // namespace detail

inline Poly parse_poly(std::string_view text, bool allow_t = false) {
    ParseOptions opt;
    opt.allow_h = false;
    opt.allow_y = false;
    opt.allow_dx = false;
    opt.allow_t = allow_t;
    detail::RawElem e = detail::Parser(text, opt).parse();
    Poly out;
    for (auto &[k, p] : e.terms)
        out += p;
    return out;
}

inline StarFunction parse_star_function(std::string_view text) {
    ParseOptions opt;
    opt.allow_y = false;
    opt.allow_dx = false;
    opt.allow_t = false;
    detail::RawElem e = detail::Parser(text, opt).parse();
    std::vector<Poly> coeffs;
    for (auto &[k, p] : e.terms) {
        if (coeffs.size() <= k.h)
            coeffs.resize(k.h + 1);
        coeffs[k.h] += p;
    }
    return StarFunction(std::move(coeffs), kUnbounded);
}

inline WeylForm parse_weyl_form(std::string_view text, const ChartPtr &chart,
                                bool allow_t = true) {
    ParseOptions opt;
    opt.allow_t = allow_t;
    detail::RawElem e = detail::Parser(text, opt).parse();
    WeylForm out(chart);
    for (auto &[k, p] : e.terms)
        out.insert(k.h, k.y, k.dx, p);
    return out;
}

// ---------------------------------------------------------------------------
// Chart files: a JSON document with fields dim, gamma, n_work, h_order.
// gamma entries are {"indices": [i,j,k], "poly": "<x-polynomial>"}; an entry
// fixes the totally symmetric coefficient for every permutation of its index
// triple, conflicting duplicates are rejected.
// ---------------------------------------------------------------------------

struct ChartSpec {
    int dim = 0;
    int n_work = 6;
    int h_order = 2;
    SymmetricGamma gamma;

    ChartPtr to_chart(int n_work_override = -1, int h_order_override = -1) const {
        return make_chart(dim, gamma, n_work_override >= 0 ? n_work_override : n_work,
                          h_order_override >= 0 ? h_order_override : h_order);
    }
};

inline ChartSpec parse_chart(const std::string &text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &err) {
        // translate the byte offset into line/column
        int line = 1, col = 1;
        for (size_t p = 0; p < text.size() && p + 1 < err.byte; ++p) {
            if (text[p] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw parse_error(std::string("chart file is not valid JSON: ") + err.what(),
                          line, col);
    }
    if (!doc.is_object())
        throw validation_error("chart file must contain a JSON object");
    ChartSpec spec;
    if (!doc.contains("dim") || !doc["dim"].is_number_integer())
        throw validation_error("chart file needs an integer 'dim'");
    spec.dim = doc["dim"].get<int>();
    if (spec.dim < 2 || spec.dim % 2 != 0)
        throw validation_error("chart dimension must be even and >= 2");
    if (doc.contains("n_work")) {
        if (!doc["n_work"].is_number_integer() || doc["n_work"].get<int>() < 0)
            throw validation_error("'n_work' must be a nonnegative integer");
        spec.n_work = doc["n_work"].get<int>();
    }
    if (doc.contains("h_order")) {
        if (!doc["h_order"].is_number_integer() || doc["h_order"].get<int>() < 0)
            throw validation_error("'h_order' must be a nonnegative integer");
        spec.h_order = doc["h_order"].get<int>();
    }
    if (doc.contains("gamma")) {
        if (!doc["gamma"].is_array())
            throw validation_error("'gamma' must be an array of entries");
        for (auto &entry : doc["gamma"]) {
            if (!entry.is_object() || !entry.contains("indices") ||
                !entry.contains("poly") || !entry["indices"].is_array() ||
                entry["indices"].size() != 3)
                throw validation_error(
                    "gamma entries need 'indices' [i,j,k] and a 'poly' string");
            int i = entry["indices"][0].get<int>();
            int j = entry["indices"][1].get<int>();
            int k = entry["indices"][2].get<int>();
            for (int idx : {i, j, k})
                if (idx < 1 || idx > spec.dim)
                    throw validation_error("gamma index out of range 1..dim");
            Poly p = parse_poly(entry["poly"].get<std::string>());
            if (p.max_x_index() > spec.dim)
                throw validation_error(
                    "gamma coefficient uses a variable beyond the chart dimension");
            const Poly &existing = spec.gamma.get(i, j, k);
            if (!existing.is_zero() && existing != p)
                throw validation_error(
                    "conflicting gamma entries for one symmetric index triple");
            spec.gamma.set(i, j, k, std::move(p));
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// JSON output
// ---------------------------------------------------------------------------

inline nlohmann::json result_terms_json(const WeylForm &a) {
    nlohmann::json arr = nlohmann::json::array();
    const size_t n = (size_t)a.chart()->n();
    for (auto &[key, p] : a.terms()) {
        std::vector<unsigned> y(key.y);
        y.resize(n, 0u);
        arr.push_back({{"h_power", key.h},
                       {"y_degrees", y},
                       {"dx_indices", key.dx},
                       {"poly", render(p)}});
    }
    return arr;
}

inline nlohmann::json result_terms_json(const StarFunction &f, size_t n) {
    nlohmann::json arr = nlohmann::json::array();
    std::vector<unsigned> y(n, 0u);
    for (size_t k = 0; k < f.coeff_count(); ++k)
        if (!f.coeff(k).is_zero())
            arr.push_back({{"h_power", k},
                           {"y_degrees", y},
                           {"dx_indices", std::vector<int>{}},
                           {"poly", render(f.coeff(k))}});
    return arr;
}

} // namespace fedosov::io
