#pragma once

// Smoothness-sequence expressions j -> gamma_j.
//
// An expression is an immutable tree shared through `Expr` handles. All
// logarithms inside nodes are base 2: `(1+log2(1+j))^b` and
// `exp(a*log2(1+j)^k)`.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gsembed/rational.hpp"

namespace gsembed::seqdsl {

/// Maximum nesting of Product/Power/Table nodes.
inline constexpr int kMaxDepth = 32;

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t offset)
        : std::runtime_error(message + " at byte " + std::to_string(offset)), offset_(offset) {}
    [[nodiscard]] std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class ExprError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Node;

class Expr {
public:
    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    [[nodiscard]] const Node& node() const { return *node_; }
    [[nodiscard]] bool empty() const { return node_ == nullptr; }

    friend bool operator==(const Expr& a, const Expr& b);

private:
    std::shared_ptr<const Node> node_;
};

/// 2^(rate*j)
struct Geometric {
    Rational rate;
};
/// (1+j)^exponent
struct LogPower {
    Rational exponent;
};
/// (1+log2(1+j))^exponent
struct IterLog {
    Rational exponent;
};
/// exp(coeff * log2(1+j)^power), 0 < power < 1
struct ExpLogPow {
    Rational coeff;
    Rational power;
};
/// Oscillating sequence built on the blocks [2^l, 2^{l+1}): log2 gamma is
/// continuous and piecewise linear, with slope s0 on even blocks and s1 on odd
/// blocks, and gamma at j = 2^{2l} equals 2^{j (2 s1 + s0) / 3}.
/// For 0 <= j < 1 the odd-block slope s1 is extended backwards from j = 1.
struct PiecewiseGeometric {
    Rational s0;
    Rational s1;
};
/// Explicit values for j < prefix.size(), then `continuation` evaluated at the
/// absolute index j.
struct Table {
    std::vector<double> prefix;
    Expr continuation;
};
struct Product {
    std::vector<Expr> children;
};
struct Power {
    Expr child;
    Rational exponent;
};
struct Const {
    double value;
};

struct Node {
    std::variant<Geometric, LogPower, IterLog, ExpLogPow, PiecewiseGeometric, Table, Product, Power, Const> v;
};

// Builders. Each validates the node invariants and throws ExprError.
Expr geometric(const Rational& rate);
Expr log_power(const Rational& exponent);
Expr iter_log(const Rational& exponent);
Expr exp_log_pow(const Rational& coeff, const Rational& power);
Expr piecewise(const Rational& s0, const Rational& s1);
Expr table(std::vector<double> prefix, Expr continuation);
Expr product(std::vector<Expr> children);
Expr power(Expr child, const Rational& exponent);
Expr constant(double value);
Expr inverse(Expr child);

[[nodiscard]] int depth(const Expr& e);

using Bindings = std::map<std::string, Rational, std::less<>>;

/// Parses the DSL. Trailing `with name=value, ...` bindings substitute
/// rationals for identifiers.
Expr parse(std::string_view text);
Expr parse(std::string_view text, const Bindings& extra);

[[nodiscard]] std::string render(const Expr& e);

enum class Scale { finite, overflow, underflow };

struct EvalResult {
    double value = 0.0;   ///< +inf / 0 when `scale` is not finite
    double log2 = 0.0;    ///< always finite
    Scale scale = Scale::finite;
};

/// gamma_j for j >= 0.
EvalResult eval(const Expr& e, std::int64_t j);

/// log2 gamma at a real argument x >= 0. Tables are read at floor(x), every
/// other node is its natural continuous extension. This is the function
/// t -> gamma(t) on t = 2^x used by the function-parameter formulas.
double log2_at(const Expr& e, double x);

/// log2 gamma_j for j = 0..count-1.
std::vector<double> log2_series(const Expr& e, std::size_t count);

/// Replaces every Table by its continuation. The result is an equivalent
/// sequence: the two differ by a bounded factor on a finite index set.
Expr strip_tables(const Expr& e);

struct BoydIndex {
    std::optional<Rational> exact;
    double lo = 0.0;
    double hi = 0.0;

    static BoydIndex of(const Rational& r) { return {r, r.to_double(), r.to_double()}; }
    static BoydIndex unknown();
    [[nodiscard]] bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Slopes of log2 gamma on even/odd blocks of a (transformed) PiecewiseGeometric.
struct PiecewiseSlopes {
    Rational even;
    Rational odd;
};

struct SequenceProfile {
    std::optional<Rational> rate;          ///< geometric rate a
    std::optional<Rational> log_exponent;  ///< exponent of (1+j)
    std::vector<Expr> sv_factors;          ///< merged slowly varying nodes
    std::optional<PiecewiseSlopes> piecewise;
    BoydIndex upper;
    BoydIndex lower;
    /// Geometric x LogPower x (at most one slowly varying node).
    bool canonical = false;
    /// Contains tables or a structure that has no closed-form Boyd data.
    bool opaque = false;

    [[nodiscard]] std::optional<Expr> sv_factor() const {
        if (sv_factors.size() == 1) return sv_factors.front();
        return std::nullopt;
    }
};

SequenceProfile canonicalize(const Expr& e);

}  // namespace gsembed::seqdsl
