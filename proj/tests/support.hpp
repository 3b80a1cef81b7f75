#pragma once

// Shared fixtures and independent oracles for the test binaries.

#include <cmath>
#include <random>
#include <string>

#include "gsembed/embanalyzer.hpp"

namespace gsembed::testing {

inline Exponent ex(const std::string& s) { return Exponent::parse(s); }

inline embanalyzer::EmbeddingProblem problem(const std::string& sigma, const std::string& tau, const std::string& p1,
                                             const std::string& q1, const std::string& p2, const std::string& q2,
                                             int d = 1, embanalyzer::Scale scale = embanalyzer::Scale::B) {
    return {seqdsl::parse(sigma), seqdsl::parse(tau), ex(p1), ex(q1), ex(p2), ex(q2), d, scale};
}

// Banach exponents 1, 4/3, 3/2, 2, 3, 4, inf and friends.
class TupleGen {
public:
    explicit TupleGen(std::uint64_t seed) : rng_(seed) {}

    Exponent banach_exponent() {
        static const char* pool[] = {"1", "6/5", "4/3", "3/2", "2", "5/2", "3", "4", "8", "inf"};
        return Exponent::parse(pool[pick(10)]);
    }

    Rational smoothness() { return Rational(pick(33) - 16, 4); }

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

    std::mt19937_64& rng() { return rng_; }

private:
    std::mt19937_64 rng_;
};

struct ClassicalTuple {
    Rational s1, s2;
    Exponent p1, q1, p2, q2;
    int d = 1;

    [[nodiscard]] embanalyzer::EmbeddingProblem problem() const {
        return {seqdsl::geometric(s1), seqdsl::geometric(s2), p1, q1, p2, q2, d, embanalyzer::Scale::B};
    }
    // closed-form verdicts: s1-s2 > d(1/p1-1/p2)_+ and s1-s2 > d - d(1/p2-1/p1)_+
    [[nodiscard]] bool compact_expected() const {
        return s1 - s2 > Rational(d) * (p1.reciprocal() - p2.reciprocal()).positive_part();
    }
    [[nodiscard]] bool nuclear_expected() const {
        return s1 - s2 > Rational(d) - Rational(d) * (p2.reciprocal() - p1.reciprocal()).positive_part();
    }
};

inline ClassicalTuple classical(TupleGen& g) {
    return {g.smoothness(), g.smoothness(), g.banach_exponent(), g.banach_exponent(), g.banach_exponent(),
            g.banach_exponent(), g.pick(4) + 1};
}

// Membership of a_x = 2^{a x} (1+x)^b (1+ln(1+x))^c in l_r / c0 / l_inf, decided
// from the analytic form by double Cauchy condensation: sum a_n < inf iff
// sum_m 2^m 2^{2^m} a_{2^{2^m}} < inf, whose log-terms are linear in m on the
// boundary and geometric elsewhere.
struct LogPowerOracle {
    double a = 0, b = 0, c = 0;

    [[nodiscard]] double ln_term(double log2x) const {
        const double lnx = log2x * std::log(2.0);
        const double geo = a == 0 ? 0.0 : a * std::exp2(log2x) * std::log(2.0);
        return geo + b * lnx + c * std::log1p(lnx);
    }

    // r < 0 encodes infinity
    [[nodiscard]] bool in_lr(double r) const {
        if (a != 0) return a < 0;
        auto lt = [&](double m) { return std::log(2.0) * (m + std::exp2(m)) + r * ln_term(std::exp2(m)); };
        return lt(41) - lt(40) < -1e-3;
    }
    [[nodiscard]] bool in_c0() const {
        if (a != 0) return a < 0;
        return ln_term(std::exp2(40)) < ln_term(std::exp2(30)) - 1e-3;
    }
    [[nodiscard]] bool in_linf() const {
        if (a != 0) return a < 0;
        return ln_term(std::exp2(40)) <= ln_term(std::exp2(30)) + 1e-9;
    }
};

}  // namespace gsembed::testing
