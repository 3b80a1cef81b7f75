#pragma once

// Finite sections of the diagonal embedding
//   id_beta : l_{q1}(beta_j l_{p1}^{M_j}) -> l_{q2}(l_{p2}^{M_j}),  j = 0..L,
// with operator norms, nuclear norms and entropy-number bounds.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsembed/embanalyzer.hpp"
#include "gsembed/rational.hpp"

namespace gsembed::seqspacelab {

class LabError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Caps {
    std::int64_t norm_n = 1'000'000;
    std::int64_t entropy_n = 20;
    int entropy_k = 40;
};

struct FiniteSection {
    int L = 0;
    std::vector<double> beta;
    std::vector<std::int64_t> M;
    Exponent p1;
    Exponent q1;
    Exponent p2;
    Exponent q2;
    /// {"kind": "manual"} or {"kind": "from_problem", "problem": ..., "c": ...}
    nlohmann::json provenance = {{"kind", "manual"}};

    [[nodiscard]] std::int64_t dimension() const;
    [[nodiscard]] bool banach() const { return p1.is_banach() && q1.is_banach() && p2.is_banach() && q2.is_banach(); }
};

/// Checks sizes, positivity and finiteness.
void validate(const FiniteSection& s);

FiniteSection manual_section(std::vector<double> beta, std::vector<std::int64_t> M, Exponent p1, Exponent q1,
                             Exponent p2, Exponent q2);

/// beta_j = sigma_j tau_j^{-1} 2^{-jd(1/p1-1/p2)}, M_j = round(c 2^{jd}), c >= 1.
FiniteSection finite_section(const embanalyzer::EmbeddingProblem& prob, int L, double c = 1.0,
                             std::int64_t cap = Caps{}.norm_n);

/// Mixed quasi-norm ||(||x_j||_p)_j||_q of a vector laid out block by block.
double mixed_norm(const std::vector<double>& x, const std::vector<std::int64_t>& M, const Exponent& p,
                  const Exponent& q);

double embedding_norm_closed(const FiniteSection& s);

/// Lower bound on the norm from a seeded coordinate search over the source
/// sphere. GSEMBED_SEED, when set, replaces `seed`.
double embedding_norm_search(const FiniteSection& s, int iters, std::uint64_t seed);

/// ||(beta_j^{-1} M_j^{1/t(p1,p2)})_j||_{t(q1,q2)}
double nuclear_norm_tong(const FiniteSection& s);

struct NuclearOracle {
    double value = 0.0;
    bool exact = false;
    char oracle_case = 'd';
    std::string method;
};

/// Exact in the identity (a), l_inf-source (b) and Hilbert (c) cases, otherwise
/// the coordinate-representation upper bound (d).
NuclearOracle nuclear_norm_oracle(const FiniteSection& s);
/// Case (d) regardless of applicability of the exact cases.
NuclearOracle nuclear_norm_coordinate_bound(const FiniteSection& s);

struct EntropyBound {
    int k = 1;
    double lower = 0.0;
    double upper = 0.0;
    std::string method_upper;
    std::string method_lower;
};

/// Upper bounds for k = 1..k_max: blockwise lattice/volumetric covers of the
/// first levels, the origin for the rest. Non-increasing in k by construction.
std::vector<double> entropy_upper_all(const FiniteSection& s, int k_max, const Caps& caps = {});
double entropy_upper(const FiniteSection& s, int k, const Caps& caps = {});
double entropy_lower(const FiniteSection& s, int k, const Caps& caps = {});
EntropyBound entropy_bounds(const FiniteSection& s, int k, const Caps& caps = {});

/// log of the Lebesgue volume of the unit ball of l_q(l_p^{M_j}).
double log_unit_ball_volume(const std::vector<std::int64_t>& M, const Exponent& p, const Exponent& q);

struct EntropyPropertyReport {
    std::vector<int> ks;
    std::vector<double> upper;
    std::vector<double> lower;
    double norm = 0.0;
    std::vector<std::string> violations;
    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Monotonicity, e_1 <= ||T||, lower <= upper and multiplicativity through the
/// factorization id_beta = id_{beta^{1/2}} o id_{beta^{1/2}} with intermediate
/// space carrying the source or the target exponents.
EntropyPropertyReport entropy_properties(const FiniteSection& s, const std::vector<int>& ks, const Caps& caps = {});

struct RateFit {
    std::vector<int> levels;
    std::vector<std::int64_t> ks;
    std::vector<double> log2_M;
    std::vector<double> log2_upper;
    std::vector<double> log2_lower;
    std::vector<double> log2_predicted;
    double slope = 0.0;
    double predicted_slope = 0.0;
    std::vector<double> residuals;
    bool non_decaying = false;
};

/// Caps used by rate_fit: four dyadic levels in d = 1 need n = 31.
inline Caps rate_fit_caps() { return Caps{1'000'000, 32, 64}; }

/// Least-squares slope of log2 e_{2 n_L} bounds against log2 M_L.
RateFit rate_fit_sections(const std::vector<FiniteSection>& sections, const Caps& caps = rate_fit_caps());
/// Requires the non-limiting regime.
RateFit rate_fit(const embanalyzer::EmbeddingProblem& prob, const std::vector<int>& Ls, double c = 1.0,
                 const Caps& caps = rate_fit_caps());

nlohmann::json to_json(const FiniteSection& s);
FiniteSection section_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NuclearOracle& o);
nlohmann::json to_json(const EntropyBound& b);
nlohmann::json to_json(const EntropyPropertyReport& r);
nlohmann::json to_json(const RateFit& r);

/// GSEMBED_SEED if set, otherwise `fallback`.
std::uint64_t resolve_seed(std::uint64_t fallback);

}  // namespace gsembed::seqspacelab
