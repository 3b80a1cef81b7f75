#pragma once

// Compactness, nuclearity and entropy-rate decisions for embeddings
//   id : A^sigma_{p1,q1} -> A^tau_{p2,q2}
// on bounded domains, reduced to membership of a criterion sequence in l_r/c0.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsembed/rational.hpp"
#include "gsembed/seqdsl.hpp"

namespace gsembed::embanalyzer {

using seqdsl::Expr;

class AnalyzerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scale { B, F };

struct EmbeddingProblem {
    Expr sigma;
    Expr tau;
    Exponent p1;
    Exponent q1;
    Exponent p2;
    Exponent q2;
    int d = 1;
    Scale scale = Scale::B;

    [[nodiscard]] bool banach() const { return p1.is_banach() && q1.is_banach() && p2.is_banach() && q2.is_banach(); }
};

/// Checks d >= 1, finite p for F, and admissibility of sigma and tau on a window.
void validate(const EmbeddingProblem& prob);

enum class Status { holds, fails, inconclusive };
[[nodiscard]] std::string to_string(Status s);

enum class TargetKind { ell_r, c0, ell_inf };

struct Target {
    TargetKind kind = TargetKind::ell_r;
    Exponent r;
    [[nodiscard]] std::string str() const;
};

struct Verdict {
    Status status = Status::inconclusive;
    Expr tested_sequence;
    Target target;
    nlohmann::json evidence = nlohmann::json::object();
    std::vector<std::string> citations;
};

Exponent tong(const Exponent& r1, const Exponent& r2);
Exponent dual_star(const Exponent& r1, const Exponent& r2);

Rational delta(const Rational& s1, const Exponent& p1, const Rational& s2, const Exponent& p2, int d);
/// Requires purely geometric sigma and tau (constants and tables allowed).
Rational delta(const EmbeddingProblem& prob);

/// Geometric rate of a profile that is geometric up to bounded factors.
std::optional<Rational> geometric_rate(const Expr& e);

enum class Kind { compact, nuclear };

struct Criterion {
    Expr sequence;
    Exponent target;
    bool c0 = false;
};

/// sigma^{-1} tau 2^{jd(1/p1-1/p2)} 2^{jd/e} with e = p* (compact) or
/// t(p1,p2) (nuclear); target q* or t(q1,q2).
Criterion criterion_sequence(const EmbeddingProblem& prob, Kind kind);

/// r = inf with c0 == false means l_inf.
Verdict ellr_membership(const Expr& e, const Exponent& r, bool c0);

Verdict compactness(const EmbeddingProblem& prob);
/// B scale: Tong criterion. F scale: routed to f_space_nuclearity.
Verdict nuclearity(const EmbeddingProblem& prob);
Verdict f_space_nuclearity(const EmbeddingProblem& prob);

/// delta-interval (d/p*, d/t(p1,p2)] of compact but not nuclear embeddings.
struct Band {
    Rational lo;
    Rational hi;
    bool empty = false;
    std::optional<Rational> delta;
    [[nodiscard]] bool contains(const Rational& x) const { return !empty && lo < x && x <= hi; }
};

Band compact_not_nuclear_band(const EmbeddingProblem& prob);

enum class Residual { none, ratio, integral, edmunds_netrusov };
enum class Validity { non_limiting, limiting_catalog, inconclusive };
[[nodiscard]] std::string to_string(Residual r);
[[nodiscard]] std::string to_string(Validity v);

/// e_k ~ k^{-u} (1+log k)^{-v} times the residual factor.
struct RateFormula {
    std::optional<Rational> u;
    std::optional<Rational> v;
    Residual residual = Residual::none;
    Validity validity = Validity::inconclusive;
    std::string detail;
    std::vector<std::string> citations;

    [[nodiscard]] std::string str() const;
};

RateFormula entropy_rate(const EmbeddingProblem& prob);

struct AValue {
    double value = 0.0;
    double argmax = 0.0;
    bool truncated = false;
    bool divergent = false;
    /// eventual decrease proven from the canonical rate of tau/sigma
    bool certified = false;
};

/// Supremum over u in {k 2^i : 0 <= i <= u_max_factor}.
AValue en_A(long long k, const EmbeddingProblem& prob, int u_max_factor = 48);

struct Classification {
    Verdict compact;
    std::optional<Verdict> nuclear;
    std::optional<RateFormula> entropy;
    std::optional<Band> band;
};

Classification classify(const EmbeddingProblem& prob);

}  // namespace gsembed::embanalyzer
