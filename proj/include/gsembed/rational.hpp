#pragma once

// Exact rational arithmetic for exponents, rates and integrability indices.
//
// Every limiting-case decision in the analyzer is an equality test between
// exponents, so these never pass through floating point.

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gsembed {

class RationalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Normalized fraction num/den with den > 0 and gcd(num, den) == 1.
/// Arithmetic is overflow-checked through 128-bit intermediates.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(std::int64_t n, std::int64_t d);

    [[nodiscard]] std::int64_t num() const { return num_; }
    [[nodiscard]] std::int64_t den() const { return den_; }

    [[nodiscard]] bool is_zero() const { return num_ == 0; }
    [[nodiscard]] bool is_integer() const { return den_ == 1; }
    [[nodiscard]] int sign() const { return (num_ > 0) - (num_ < 0); }
    [[nodiscard]] double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Smallest integer >= value.
    [[nodiscard]] std::int64_t ceil() const;
    [[nodiscard]] std::int64_t floor() const;

    [[nodiscard]] Rational reciprocal() const;
    [[nodiscard]] Rational abs() const { return num_ < 0 ? Rational(-num_, den_) : *this; }
    [[nodiscard]] Rational positive_part() const { return num_ > 0 ? *this : Rational(0); }

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// "3", "-1/2". Parses the same forms plus finite decimals ("0.25").
    [[nodiscard]] std::string str() const;
    static Rational parse(std::string_view text);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

/// Integrability index r in (0, inf]. Stored through its reciprocal 1/r in
/// [0, inf), so r = inf is the exact value 1/r = 0.
class Exponent {
public:
    constexpr Exponent() = default;
    static Exponent infinity() { return Exponent(Rational(0)); }
    static Exponent finite(const Rational& r);
    static Exponent from_reciprocal(const Rational& inv);
    /// "inf", "infinity", "∞", or a rational/decimal literal.
    static Exponent parse(std::string_view text);

    [[nodiscard]] bool is_infinite() const { return inv_.is_zero(); }
    [[nodiscard]] const Rational& reciprocal() const { return inv_; }
    /// Only valid when finite.
    [[nodiscard]] Rational value() const;
    [[nodiscard]] double to_double() const;
    /// Banach range [1, inf].
    [[nodiscard]] bool is_banach() const { return inv_ <= Rational(1); }

    [[nodiscard]] std::string str() const;

    friend bool operator==(const Exponent& a, const Exponent& b) = default;
    /// Orders by value (so 1 < 2 < inf).
    friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
        return b.inv_ <=> a.inv_;
    }

private:
    explicit Exponent(const Rational& inv) : inv_(inv) {}
    Rational inv_{1};
};

}  // namespace gsembed
