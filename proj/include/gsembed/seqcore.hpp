#pragma once

// Admissibility, Boyd indices, equivalence and the standardization procedure
// for smoothness sequences.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsembed/seqdsl.hpp"

namespace gsembed::seqcore {

using seqdsl::BoydIndex;
using seqdsl::Expr;

class SeqCoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// d0 <= gamma_{j+1}/gamma_j <= d1. With exact == false the bounds hold on the
/// window j < window only.
struct AdmissibilityCertificate {
    double d0 = 0.0;
    double d1 = 0.0;
    int window = 0;
    bool exact = false;
};

AdmissibilityCertificate certify_admissible(const Expr& e, int window);

struct BoydBracket {
    BoydIndex lower;
    BoydIndex upper;
    /// true when the values come from truncated sup/inf ratios and are
    /// one-sided estimates widened into intervals
    bool numeric = false;
};

/// Exact indices for closed-form profiles, otherwise numeric_boyd_bracket.
BoydBracket boyd_indices(const Expr& e, int K = 256);

/// Brackets from truncated sup/inf ratios at j = K/4 and K/2, widened by their
/// drift. Requires K >= 64.
BoydBracket numeric_boyd_bracket(const Expr& e, int K = 256);

enum class Tri { yes, no, undecided };
[[nodiscard]] std::string to_string(Tri t);

struct EquivalenceResult {
    Tri verdict = Tri::undecided;
    /// c_lo <= e1/e2 <= c_hi on the window, inflated by 10% (only for yes)
    double c_lo = 0.0;
    double c_hi = 0.0;
    std::optional<std::int64_t> witness;
    bool exact = false;
    std::string reason;
};

EquivalenceResult equivalent(const Expr& e1, const Expr& e2, int window = 64);

struct StandardizationInput {
    Expr sigma;
    Expr N;
    /// Defaults to the least integer with lambda0^kappa0 >= 2.
    std::optional<int> kappa0;
};

struct StandardizationResult {
    Expr beta;
    int kappa0 = 0;
    double lambda0 = 0.0;
    double mu0 = 0.0;
    double mu1 = 0.0;
    std::vector<std::int64_t> k_of_j;
};

/// beta_j = sigma_{k(j)}, k(j) = min{k >= 0 : 2^{j-1} <= N_{k+kappa0}}, as a
/// table of `prefix_len` exact values followed by an equivalent closed form.
StandardizationResult standardize(const StandardizationInput& in, std::size_t prefix_len = 64);

/// Thrown when omega violates the two-sided power bounds on the window.
class FomegaViolation : public SeqCoreError {
public:
    FomegaViolation(double t1, double t2, const std::string& which);
    double t1;
    double t2;
};

struct EdmundsNetrusovResult {
    Expr sigma;
    double L = 0.0;
    double c = 0.0;
    AdmissibilityCertificate certificate;
};

/// `omega` is written as a function of u = log2(1/t) in the sequence DSL (the
/// index variable j plays the role of u), so t^s is `2^(-s*j)` and
/// 1 + log2(1/t) is `(1+j)^1`. Returns sigma_j = 1/omega(2^{-j}).
/// When L and c are not supplied, L is the steepest log-slope on the window
/// and c = 1.
EdmundsNetrusovResult from_edmunds_netrusov(const Expr& omega, std::optional<double> L = std::nullopt,
                                            std::optional<double> c = std::nullopt, int window = 64);

/// Lower Boyd index > 0.
Tri is_almost_strongly_increasing(const Expr& e);

/// Node-wise reciprocal 1/gamma, keeping closed forms closed.
Expr reciprocal(const Expr& e);

}  // namespace gsembed::seqcore
