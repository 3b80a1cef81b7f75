#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "gsembed/seqdsl.hpp"

namespace gsembed::seqdsl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

Expr make(auto node) { return Expr(std::make_shared<const Node>(Node{std::move(node)})); }

void check_depth(const Expr& e) {
    if (depth(e) > kMaxDepth) throw ExprError("expression nesting exceeds depth " + std::to_string(kMaxDepth));
}

double piecewise_log2(const PiecewiseGeometric& pw, double x) {
    const double s0 = pw.s0.to_double();
    const double s1 = pw.s1.to_double();
    if (x < 1.0) return (2.0 * s1 + s0) / 3.0 - (1.0 - x) * s1;
    int l = static_cast<int>(std::floor(std::log2(x)));
    double block = std::ldexp(1.0, l);
    // guard against log2 rounding at exact powers of two
    if (block > x) block = std::ldexp(1.0, --l);
    if (2.0 * block <= x) block = std::ldexp(1.0, ++l);
    if (l % 2 == 0) return block * (2.0 * s1 + s0) / 3.0 + (x - block) * s0;
    return block * (s1 + 2.0 * s0) / 3.0 + (x - block) * s1;
}

std::string fmt_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fmt_exp(const Rational& r) {
    if (r.is_integer() && r.sign() >= 0) return r.str();
    return "(" + r.str() + ")";
}

bool needs_parens_in_product(const Expr& e) {
    return std::holds_alternative<Product>(e.node().v) || std::holds_alternative<Table>(e.node().v);
}

}  // namespace

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (!a.node_ || !b.node_) return false;
    const auto& x = a.node().v;
    const auto& y = b.node().v;
    if (x.index() != y.index()) return false;
    return std::visit(
        overloaded{
            [&](const Geometric& n) { return n.rate == std::get<Geometric>(y).rate; },
            [&](const LogPower& n) { return n.exponent == std::get<LogPower>(y).exponent; },
            [&](const IterLog& n) { return n.exponent == std::get<IterLog>(y).exponent; },
            [&](const ExpLogPow& n) {
                const auto& o = std::get<ExpLogPow>(y);
                return n.coeff == o.coeff && n.power == o.power;
            },
            [&](const PiecewiseGeometric& n) {
                const auto& o = std::get<PiecewiseGeometric>(y);
                return n.s0 == o.s0 && n.s1 == o.s1;
            },
            [&](const Table& n) {
                const auto& o = std::get<Table>(y);
                return n.prefix == o.prefix && n.continuation == o.continuation;
            },
            [&](const Product& n) { return n.children == std::get<Product>(y).children; },
            [&](const Power& n) {
                const auto& o = std::get<Power>(y);
                return n.exponent == o.exponent && n.child == o.child;
            },
            [&](const Const& n) { return n.value == std::get<Const>(y).value; },
        },
        x);
}

Expr geometric(const Rational& rate) { return make(Geometric{rate}); }
Expr log_power(const Rational& exponent) { return make(LogPower{exponent}); }
Expr iter_log(const Rational& exponent) { return make(IterLog{exponent}); }

Expr exp_log_pow(const Rational& coeff, const Rational& power) {
    if (power.sign() <= 0 || power >= Rational(1)) {
        throw ExprError("exp(a*log2(1+j)^k) needs 0 < k < 1, got k=" + power.str());
    }
    return make(ExpLogPow{coeff, power});
}

Expr piecewise(const Rational& s0, const Rational& s1) {
    if (!(s0 < s1)) throw ExprError("pw2 needs s0 < s1, got s0=" + s0.str() + ", s1=" + s1.str());
    return make(PiecewiseGeometric{s0, s1});
}

Expr table(std::vector<double> prefix, Expr continuation) {
    if (prefix.empty()) throw ExprError("table prefix must be nonempty");
    for (double v : prefix) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ExprError("table entries must be positive and finite");
    }
    if (continuation.empty()) throw ExprError("table needs a continuation");
    Expr e = make(Table{std::move(prefix), std::move(continuation)});
    check_depth(e);
    return e;
}

Expr product(std::vector<Expr> children) {
    if (children.empty()) throw ExprError("empty product");
    Expr e = make(Product{std::move(children)});
    check_depth(e);
    return e;
}

Expr power(Expr child, const Rational& exponent) {
    Expr e = make(Power{std::move(child), exponent});
    check_depth(e);
    return e;
}

Expr constant(double value) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ExprError("constants must be positive and finite");
    return make(Const{value});
}

Expr inverse(Expr child) { return power(std::move(child), Rational(-1)); }

int depth(const Expr& e) {
    return std::visit(overloaded{
                          [](const Table& n) { return 1 + depth(n.continuation); },
                          [](const Product& n) {
                              int d = 0;
                              for (const auto& c : n.children) d = std::max(d, depth(c));
                              return 1 + d;
                          },
                          [](const Power& n) { return 1 + depth(n.child); },
                          [](const auto&) { return 1; },
                      },
                      e.node().v);
}

double log2_at(const Expr& e, double x) {
    return std::visit(
        overloaded{
            [&](const Geometric& n) { return n.rate.to_double() * x; },
            [&](const LogPower& n) { return n.exponent.to_double() * std::log2(1.0 + x); },
            [&](const IterLog& n) { return n.exponent.to_double() * std::log2(1.0 + std::log2(1.0 + x)); },
            [&](const ExpLogPow& n) {
                return n.coeff.to_double() * std::pow(std::log2(1.0 + x), n.power.to_double()) * std::numbers::log2e;
            },
            [&](const PiecewiseGeometric& n) { return piecewise_log2(n, x); },
            [&](const Table& n) {
                auto idx = static_cast<std::size_t>(std::floor(x));
                if (idx < n.prefix.size()) return std::log2(n.prefix[idx]);
                return log2_at(n.continuation, x);
            },
            [&](const Product& n) {
                double s = 0.0;
                for (const auto& c : n.children) s += log2_at(c, x);
                return s;
            },
            [&](const Power& n) { return n.exponent.to_double() * log2_at(n.child, x); },
            [&](const Const& n) { return std::log2(n.value); },
        },
        e.node().v);
}

EvalResult eval(const Expr& e, std::int64_t j) {
    if (j < 0) throw ExprError("eval needs j >= 0");
    EvalResult r;
    r.log2 = log2_at(e, static_cast<double>(j));
    if (r.log2 >= 1024.0) {
        r.scale = Scale::overflow;
        r.value = std::numeric_limits<double>::infinity();
    } else if (r.log2 < -1074.0) {
        r.scale = Scale::underflow;
        r.value = 0.0;
    } else {
        r.value = std::exp2(r.log2);
    }
    return r;
}

std::vector<double> log2_series(const Expr& e, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t j = 0; j < count; ++j) out[j] = log2_at(e, static_cast<double>(j));
    return out;
}

Expr strip_tables(const Expr& e) {
    return std::visit(overloaded{
                          [](const Table& n) { return strip_tables(n.continuation); },
                          [](const Product& n) {
                              std::vector<Expr> kids;
                              kids.reserve(n.children.size());
                              for (const auto& c : n.children) kids.push_back(strip_tables(c));
                              return product(std::move(kids));
                          },
                          [](const Power& n) { return power(strip_tables(n.child), n.exponent); },
                          [&](const auto&) { return e; },
                      },
                      e.node().v);
}

std::string render(const Expr& e) {
    return std::visit(
        overloaded{
            [](const Geometric& n) {
                if (n.rate == Rational(1)) return std::string("2^(j)");
                if (n.rate == Rational(-1)) return std::string("2^(-j)");
                return "2^(" + n.rate.str() + "*j)";
            },
            [](const LogPower& n) { return "(1+j)^" + fmt_exp(n.exponent); },
            [](const IterLog& n) { return "(1+log2(1+j))^" + fmt_exp(n.exponent); },
            [](const ExpLogPow& n) { return "exp(" + n.coeff.str() + "*log2(1+j)^" + fmt_exp(n.power) + ")"; },
            [](const PiecewiseGeometric& n) { return "pw2(s0=" + n.s0.str() + ", s1=" + n.s1.str() + ")"; },
            [](const Table& n) {
                std::string s = "table[";
                for (std::size_t i = 0; i < n.prefix.size(); ++i) {
                    if (i) s += ",";
                    s += fmt_double(n.prefix[i]);
                }
                return s + "] then " + render(n.continuation);
            },
            [](const Product& n) {
                std::string s;
                for (std::size_t i = 0; i < n.children.size(); ++i) {
                    const Expr& c = n.children[i];
                    const auto* pw = std::get_if<Power>(&c.node().v);
                    if (i > 0 && pw && pw->exponent == Rational(-1)) {
                        s += " / ";
                        s += needs_parens_in_product(pw->child) || std::holds_alternative<Power>(pw->child.node().v)
                                 ? "(" + render(pw->child) + ")"
                                 : render(pw->child);
                        continue;
                    }
                    if (i) s += " * ";
                    s += needs_parens_in_product(c) ? "(" + render(c) + ")" : render(c);
                }
                return s;
            },
            [](const Power& n) {
                const auto& cv = n.child.node().v;
                bool atomic = !(std::holds_alternative<Product>(cv) || std::holds_alternative<Power>(cv) ||
                                std::holds_alternative<Table>(cv) || std::holds_alternative<Const>(cv));
                std::string base = atomic ? render(n.child) : "(" + render(n.child) + ")";
                return base + "^(" + n.exponent.str() + ")";
            },
            [](const Const& n) { return fmt_double(n.value); },
        },
        e.node().v);
}

BoydIndex BoydIndex::unknown() {
    return {std::nullopt, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

}  // namespace gsembed::seqdsl
