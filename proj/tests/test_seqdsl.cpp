#include <doctest.h>

#include <cmath>
#include <random>

#include "gsembed/seqdsl.hpp"

using namespace gsembed;
using namespace gsembed::seqdsl;

namespace {

// Random ASTs over the whole grammar for round-trip checks.
class ExprGen {
public:
    explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

    Rational rational(int range = 6, int max_den = 4) {
        std::uniform_int_distribution<int> num(-range * max_den, range * max_den);
        std::uniform_int_distribution<int> den(1, max_den);
        return Rational(num(rng_), den(rng_));
    }

    Expr leaf() {
        switch (pick(7)) {
            case 0: return geometric(rational());
            case 1: return log_power(rational());
            case 2: return iter_log(rational());
            case 3: {
                Rational k(pick(3) + 1, 4);
                return exp_log_pow(rational(), k);
            }
            case 4: {
                Rational s0 = rational();
                return piecewise(s0, s0 + Rational(pick(4) + 1, 2));
            }
            case 5: return constant(0.25 * (pick(16) + 1));
            default: {
                std::vector<double> prefix;
                for (int i = 0, n = pick(4) + 1; i < n; ++i) prefix.push_back(0.5 * (pick(8) + 1));
                return table(prefix, leaf());
            }
        }
    }

    Expr any(int depth) {
        if (depth <= 0 || pick(3) == 0) return leaf();
        if (pick(2) == 0) {
            std::vector<Expr> kids;
            for (int i = 0, n = pick(3) + 2; i < n; ++i) kids.push_back(any(depth - 1));
            return product(kids);
        }
        Rational r = rational(3, 3);
        if (r.is_zero()) r = Rational(1, 2);
        return power(any(depth - 1), r);
    }

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

private:
    std::mt19937_64 rng_;
};

double value(const Expr& e, std::int64_t j) { return eval(e, j).value; }

}  // namespace

TEST_CASE("parse: bindings, products and literal forms") {
    Expr e = parse("2^(s*j) * (1+j)^b with s=1, b=-2");
    CHECK(e == product({geometric(1), log_power(-2)}));

    Expr pw = parse("pw2(s0=0, s1=1)");
    const auto* node = std::get_if<PiecewiseGeometric>(&pw.node().v);
    REQUIRE(node);
    CHECK(node->s0 == Rational(0));
    CHECK(node->s1 == Rational(1));

    Expr t = parse("table[1,2,4] then 2^(j)");
    const auto* tab = std::get_if<Table>(&t.node().v);
    REQUIRE(tab);
    CHECK(tab->prefix == std::vector<double>{1, 2, 4});
    CHECK(tab->continuation == geometric(1));

    CHECK(parse("2^(j/2)") == geometric(Rational(1, 2)));
    CHECK(parse("2^(-j)") == geometric(-1));
    CHECK(parse("exp(2*log(1+j)^(1/2))") == exp_log_pow(2, Rational(1, 2)));
    CHECK(parse("(1+log(1+j))^3") == iter_log(3));
    CHECK(parse("(1+j)^(2/3)") == log_power(Rational(2, 3)));
}

TEST_CASE("parse errors carry byte offsets") {
    try {
        (void)parse("2^(j) * ");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 8);
    }
    try {
        (void)parse("2^(j) * foo");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 8);
        CHECK(std::string(e.what()).find("unbound") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("0 * 2^(j)"), ParseError);
    CHECK_THROWS_AS(parse("-3"), ParseError);
    CHECK_THROWS_AS(parse("table[1,-2] then 1"), ParseError);
    CHECK_THROWS_AS(parse("table[1,2]"), ParseError);
    CHECK_THROWS_AS(parse("2^(99999999999999999999*j)"), ParseError);
    CHECK_THROWS_AS(parse("j"), ParseError);
    CHECK_THROWS_AS(parse("pw2(s0=1, s1=1)"), ParseError);
}

TEST_CASE("depth guard") {
    std::string deep = "2^(j)";
    for (int i = 0; i < 40; ++i) deep = "(" + deep + ")^2";
    CHECK_THROWS_AS(parse(deep), ParseError);
}

TEST_CASE("eval") {
    CHECK(value(geometric(1), 10) == 1024.0);
    // base-2 iterated log: (1 + log2(1+3))^1 = 3
    CHECK(value(iter_log(1), 3) == doctest::Approx(3.0));
    CHECK(value(log_power(1), 3) == doctest::Approx(4.0));
    CHECK(value(constant(2.5), 7) == 2.5);

    // pw2 block ends: sigma_{j_{2l}} = 2^{j(2 s1 + s0)/3}, sigma_{j_{2l+1}} = 2^{j(s1 + 2 s0)/3}
    Expr pw = piecewise(Rational(1, 2), 2);
    for (int l = 0; l < 5; ++l) {
        double j_even = std::exp2(2 * l);
        double j_odd = std::exp2(2 * l + 1);
        CHECK(eval(pw, static_cast<std::int64_t>(j_even)).log2 == doctest::Approx(j_even * (2 * 2 + 0.5) / 3));
        CHECK(eval(pw, static_cast<std::int64_t>(j_odd)).log2 == doctest::Approx(j_odd * (2 + 2 * 0.5) / 3));
    }

    auto big = eval(geometric(2), 600);
    CHECK(big.scale == Scale::overflow);
    CHECK(std::isinf(big.value));
    CHECK(big.log2 == 1200.0);
    auto small = eval(geometric(-3), 600);
    CHECK(small.scale == Scale::underflow);
    CHECK(std::isfinite(small.log2));
}

TEST_CASE("eval monotone for growing geometric-log products") {
    ExprGen g(7);
    for (int t = 0; t < 50; ++t) {
        Rational s(g.pick(8) + 1, 4);
        Rational b(g.pick(9), 3);
        Expr e = product({geometric(s), log_power(b)});
        for (std::int64_t j = 0; j < 200; ++j) CHECK(eval(e, j + 1).log2 > eval(e, j).log2);
    }
}

TEST_CASE("render/parse round trip over generated expressions") {
    ExprGen g(20240611);
    for (int t = 0; t < 500; ++t) {
        Expr e = g.any(4);
        std::string text = render(e);
        Expr back = parse(text);
        INFO(text);
        CHECK(back == e);
    }
}

TEST_CASE("canonicalize") {
    auto p = canonicalize(parse("2^(3/2*j) * (1+j)^(-1)"));
    CHECK(p.canonical);
    CHECK(*p.rate == Rational(3, 2));
    CHECK(*p.log_exponent == Rational(-1));
    CHECK(*p.upper.exact == Rational(3, 2));
    CHECK(*p.lower.exact == Rational(3, 2));

    auto c = canonicalize(constant(1.0));
    CHECK(c.canonical);
    CHECK(*c.rate == Rational(0));
    CHECK(*c.upper.exact == Rational(0));

    auto pw = canonicalize(parse("pw2(s0=1/2, s1=2)"));
    CHECK_FALSE(pw.canonical);
    CHECK(*pw.upper.exact == Rational(2));
    CHECK(*pw.lower.exact == Rational(1, 2));

    auto tab = canonicalize(parse("table[1,1,1] then 2^(j/2)"));
    CHECK(tab.opaque);
    CHECK_FALSE(tab.upper.exact);

    auto two_sv = canonicalize(parse("(1+log(1+j))^2 * exp(1*log(1+j)^(1/2))"));
    CHECK_FALSE(two_sv.canonical);
    CHECK(two_sv.sv_factors.size() == 2);
    CHECK(*two_sv.upper.exact == Rational(0));
}

TEST_CASE("canonical rates add over products") {
    ExprGen g(99);
    for (int t = 0; t < 200; ++t) {
        Expr x = product({geometric(g.rational()), log_power(g.rational())});
        Expr y = product({geometric(g.rational()), iter_log(g.rational())});
        auto px = canonicalize(x);
        auto py = canonicalize(y);
        auto pxy = canonicalize(product({x, y}));
        REQUIRE(pxy.rate);
        CHECK(*pxy.rate == *px.rate + *py.rate);
    }
}

TEST_CASE("envelope estimate for canonical profiles") {
    ExprGen g(5);
    for (int t = 0; t < 100; ++t) {
        std::vector<Expr> kids{geometric(g.rational(3, 4)), log_power(g.rational(3, 2))};
        if (g.pick(2)) kids.push_back(iter_log(g.rational(3, 2)));
        Expr e = product(kids);
        auto p = canonicalize(e);
        REQUIRE(p.canonical);
        const double a = p.rate->to_double();
        for (double eps : {0.25, 1.0 / 16}) {
            // c0 = inf_j gamma_j 2^{-(a-eps)j} > 0 and c1 = sup_j gamma_j 2^{-(a+eps)j} < inf:
            // both extremes are attained well inside the scan, not at its end.
            double lo_min = INFINITY;
            double hi_max = -INFINITY;
            std::size_t lo_arg = 0;
            std::size_t hi_arg = 0;
            for (std::size_t j = 0; j <= 512; ++j) {
                double l = eval(e, static_cast<std::int64_t>(j)).log2;
                double lo = l - (a - eps) * static_cast<double>(j);
                double hi = l - (a + eps) * static_cast<double>(j);
                if (lo < lo_min) {
                    lo_min = lo;
                    lo_arg = j;
                }
                if (hi > hi_max) {
                    hi_max = hi;
                    hi_arg = j;
                }
            }
            CHECK(lo_arg < 512);
            CHECK(hi_arg < 512);
        }
    }
}
