#include <cctype>
#include <charconv>
#include <cmath>

#include "gsembed/seqdsl.hpp"

namespace gsembed::seqdsl {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
public:
    Parser(std::string_view text, const Bindings& bindings) : text_(text), bindings_(bindings) {}

    Expr parse_all() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
    [[noreturn]] void fail_at(const std::string& what, std::size_t at) const { throw ParseError(what, at); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[nodiscard]] char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    // Whitespace-insensitive literal match; restores position on mismatch.
    bool accept(std::string_view lit) {
        std::size_t save = pos_;
        for (char c : lit) {
            skip_ws();
            if (pos_ >= text_.size() || text_[pos_] != c) {
                pos_ = save;
                return false;
            }
            ++pos_;
        }
        // keyword literals must not run into an identifier
        if (!lit.empty() && is_ident_char(lit.back()) && pos_ < text_.size() && is_ident_char(text_[pos_]) &&
            std::isalpha(static_cast<unsigned char>(lit.back()))) {
            pos_ = save;
            return false;
        }
        return true;
    }

    void expect(std::string_view lit) {
        if (!accept(lit)) fail("expected '" + std::string(lit) + "'");
    }

    std::string read_ident() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected identifier");
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::string_view read_number_token() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E') && pos_ > start) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        if (pos_ == start) fail("expected number");
        return text_.substr(start, pos_ - start);
    }

    // rational := '(' rational ')' | sign? (int ('/' int)? | decimal | ident)
    // After '^' an unparenthesized fraction would be ambiguous with division,
    // so exponents take only integers/decimals unless parenthesized.
    Rational parse_rational(bool allow_fraction = true) {
        skip_ws();
        std::size_t start = pos_;
        if (accept("(")) {
            Rational r = parse_rational();
            expect(")");
            return r;
        }
        bool negative = false;
        if (accept("-")) {
            negative = true;
        } else {
            (void)accept("+");
        }
        Rational value;
        if (is_ident_start(peek())) {
            std::string name = read_ident();
            auto it = bindings_.find(name);
            if (it == bindings_.end()) fail_at("unbound name '" + name + "'", start);
            value = it->second;
        } else {
            std::string_view tok = read_number_token();
            std::string lit(tok);
            std::size_t save = pos_;
            if (allow_fraction && accept("/")) {
                skip_ws();
                if (std::isdigit(static_cast<unsigned char>(peek()))) {
                    lit += "/" + std::string(read_number_token());
                } else {
                    pos_ = save;
                }
            }
            try {
                value = Rational::parse(lit);
            } catch (const RationalError& err) {
                fail_at(std::string("rate outside exact-rational range: ") + err.what(), start);
            }
        }
        return negative ? -value : value;
    }

    double parse_real() {
        skip_ws();
        std::size_t start = pos_;
        bool negative = accept("-");
        std::string_view tok = read_number_token();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) fail_at("malformed number", start);
        return negative ? -v : v;
    }

    Expr parse_expr() {
        if (++depth_ > kMaxDepth) fail("expression nesting exceeds depth " + std::to_string(kMaxDepth));
        std::vector<Expr> factors;
        factors.push_back(parse_term());
        for (;;) {
            if (accept("*")) {
                factors.push_back(parse_term());
            } else if (accept("/")) {
                factors.push_back(inverse(parse_term()));
            } else {
                break;
            }
        }
        --depth_;
        if (factors.size() == 1) return factors.front();
        return wrap([&] { return product(std::move(factors)); });
    }

    Expr parse_term() {
        Expr f = parse_factor();
        if (accept("^")) {
            Rational r = parse_rational(false);
            return wrap([&] { return power(f, r); });
        }
        return f;
    }

    template <class F>
    Expr wrap(F&& build) {
        std::size_t at = pos_;
        try {
            return build();
        } catch (const ExprError& err) {
            fail_at(err.what(), at);
        }
    }

    Expr parse_factor() {
        skip_ws();
        std::size_t start = pos_;
        if (accept("2^(")) {
            Expr e = parse_linear();
            expect(")");
            return e;
        }
        if (accept("(1+j)^")) {
            return log_power(parse_rational(false));
        }
        if (accept("(1+log(1+j))^") || accept("(1+log2(1+j))^")) {
            return iter_log(parse_rational(false));
        }
        if (accept("exp(")) {
            Rational coeff = parse_rational();
            expect("*");
            if (!accept("log2(1+j)") && !accept("log(1+j)")) fail("expected 'log2(1+j)'");
            expect("^");
            Rational k = parse_rational(false);
            expect(")");
            return wrap([&] { return exp_log_pow(coeff, k); });
        }
        if (accept("pw2(")) {
            std::optional<Rational> s0;
            std::optional<Rational> s1;
            do {
                std::string name = read_ident();
                expect("=");
                Rational v = parse_rational();
                if (name == "s0") {
                    s0 = v;
                } else if (name == "s1") {
                    s1 = v;
                } else {
                    fail("unknown pw2 parameter '" + name + "'");
                }
            } while (accept(","));
            expect(")");
            if (!s0 || !s1) fail_at("pw2 needs s0 and s1", start);
            return wrap([&] { return piecewise(*s0, *s1); });
        }
        if (accept("table[")) {
            std::vector<double> prefix;
            do {
                std::size_t at = pos_;
                double v = parse_real();
                if (!(v > 0.0)) fail_at("non-positive table entry", at);
                prefix.push_back(v);
            } while (accept(","));
            expect("]");
            expect("then");
            Expr cont = parse_expr();
            return wrap([&] { return table(std::move(prefix), cont); });
        }
        if (accept("(")) {
            Expr e = parse_expr();
            expect(")");
            return e;
        }
        char c = peek();
        if (c == '-') {
            fail("non-positive constant");
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = parse_real();
            if (!(v > 0.0)) fail_at("non-positive constant", start);
            if (!std::isfinite(v)) fail_at("constant out of range", start);
            return constant(v);
        }
        if (is_ident_start(c)) {
            std::string name = read_ident();
            if (name == "j") fail_at("bare 'j' is not a sequence; use 2^(j) or (1+j)^1", start);
            auto it = bindings_.find(name);
            if (it == bindings_.end()) fail_at("unbound name '" + name + "'", start);
            if (it->second.sign() <= 0) fail_at("non-positive constant", start);
            return constant(it->second.to_double());
        }
        fail("unexpected character");
    }

    // linear := rational '*' 'j' | 'j' (('*' | '/') rational)? | rational
    Expr parse_linear() {
        skip_ws();
        std::size_t start = pos_;
        bool negative = false;
        if (accept("-")) negative = true;
        if (accept("j")) {
            Rational rate(1);
            if (accept("*")) {
                rate = parse_rational();
            } else if (accept("/")) {
                std::size_t at = pos_;
                Rational den = parse_rational(false);
                if (den.is_zero()) fail_at("division by zero", at);
                rate = den.reciprocal();
            }
            return geometric(negative ? -rate : rate);
        }
        pos_ = start;
        Rational r = parse_rational();
        if (accept("*")) {
            expect("j");
            return geometric(r);
        }
        return wrap([&] { return constant(std::exp2(r.to_double())); });
    }

    std::string_view text_;
    const Bindings& bindings_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

// Splits "expr with a=1, b=-2" into the expression part and its bindings.
std::size_t find_with(std::string_view text) {
    for (std::size_t i = 0; i + 4 <= text.size(); ++i) {
        if (text.substr(i, 4) != "with") continue;
        bool left = i == 0 || !is_ident_char(text[i - 1]);
        bool right = i + 4 == text.size() || !is_ident_char(text[i + 4]);
        if (left && right) return i;
    }
    return std::string_view::npos;
}

Bindings parse_bindings(std::string_view text, std::size_t base) {
    Bindings out;
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    while (true) {
        skip();
        std::size_t start = pos;
        while (pos < text.size() && is_ident_char(text[pos])) ++pos;
        if (pos == start) throw ParseError("expected binding name", base + pos);
        std::string name(text.substr(start, pos - start));
        skip();
        if (pos >= text.size() || text[pos] != '=') throw ParseError("expected '='", base + pos);
        ++pos;
        skip();
        std::size_t vstart = pos;
        while (pos < text.size() && text[pos] != ',') ++pos;
        try {
            out[name] = Rational::parse(text.substr(vstart, pos - vstart));
        } catch (const RationalError& err) {
            throw ParseError(err.what(), base + vstart);
        }
        if (pos >= text.size()) break;
        ++pos;  // ','
    }
    return out;
}

}  // namespace

Expr parse(std::string_view text) { return parse(text, Bindings{}); }

Expr parse(std::string_view text, const Bindings& extra) {
    Bindings bindings = extra;
    std::string_view body = text;
    if (std::size_t w = find_with(text); w != std::string_view::npos) {
        for (auto& [k, v] : parse_bindings(text.substr(w + 4), w + 4)) bindings[k] = v;
        body = text.substr(0, w);
    }
    Parser p(body, bindings);
    return p.parse_all();
}

}  // namespace gsembed::seqdsl
