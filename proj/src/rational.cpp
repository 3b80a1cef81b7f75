#include "gsembed/rational.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <numeric>

namespace gsembed {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min() + 1) {
        throw RationalError("rational overflow");
    }
    return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational make(i128 n, i128 d) {
    if (d == 0) throw RationalError("division by zero");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    return Rational(narrow(n), narrow(d));
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw RationalError("zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    std::int64_t g = std::gcd(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num_ = n;
    den_ = d;
}

std::int64_t Rational::floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
}

std::int64_t Rational::ceil() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ > 0) ++q;
    return q;
}

Rational Rational::reciprocal() const {
    if (num_ == 0) throw RationalError("reciprocal of zero");
    return Rational(den_, num_);
}

Rational Rational::operator-() const { return Rational(narrow(-static_cast<i128>(num_)), den_); }

Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                static_cast<i128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return make(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                static_cast<i128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw RationalError("division by zero");
    return make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    i128 lhs = static_cast<i128>(a.num_) * b.den_;
    i128 rhs = static_cast<i128>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&]() -> RationalError { return RationalError("malformed rational '" + std::string(text) + "'"); };
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw fail();

    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    auto parse_int = [&](std::string_view s) {
        std::int64_t v = 0;
        if (s.empty()) throw fail();
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec == std::errc::result_out_of_range) throw RationalError("rational out of range: '" + std::string(s) + "'");
        if (ec != std::errc() || ptr != s.data() + s.size()) throw fail();
        return v;
    };

    Rational out;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        out = Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view ip = text.substr(0, dot);
        std::string_view fp = text.substr(dot + 1);
        if (fp.size() > 17) throw RationalError("too many decimal digits in '" + std::string(text) + "'");
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
        std::int64_t whole = ip.empty() ? 0 : parse_int(ip);
        std::int64_t frac = fp.empty() ? 0 : parse_int(fp);
        out = Rational(whole) + Rational(frac, scale);
    } else {
        out = Rational(parse_int(text));
    }
    return negative ? -out : out;
}

Exponent Exponent::finite(const Rational& r) {
    if (r.sign() <= 0) throw RationalError("exponent must be positive, got " + r.str());
    return Exponent(r.reciprocal());
}

Exponent Exponent::from_reciprocal(const Rational& inv) {
    if (inv.sign() < 0) throw RationalError("negative reciprocal exponent " + inv.str());
    return Exponent(inv);
}

Exponent Exponent::parse(std::string_view text) {
    if (text == "inf" || text == "infinity" || text == "Inf" || text == "oo" || text == "∞") return infinity();
    return finite(Rational::parse(text));
}

Rational Exponent::value() const {
    if (is_infinite()) throw RationalError("value() of infinite exponent");
    return inv_.reciprocal();
}

double Exponent::to_double() const {
    if (is_infinite()) return std::numeric_limits<double>::infinity();
    return 1.0 / inv_.to_double();
}

std::string Exponent::str() const { return is_infinite() ? "inf" : value().str(); }

}  // namespace gsembed
