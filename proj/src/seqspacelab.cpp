#include "gsembed/seqspacelab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <random>

#include "gsembed/report.hpp"
#include "gsembed/seqcore.hpp"

namespace gsembed::seqspacelab {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double as_double(const Exponent& e) { return e.is_infinite() ? kInf : e.to_double(); }

// ||x||_p for p in (0, inf], scaled to avoid overflow.
double lp_norm(const double* x, std::size_t n, double p) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    if (m == 0.0 || std::isinf(p)) return m;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::pow(std::abs(x[i]) / m, p);
    return m * std::pow(acc, 1.0 / p);
}

double lp_norm(const std::vector<double>& x, double p) { return lp_norm(x.data(), x.size(), p); }

// Norm of id: l_p1^m -> l_p2^m.
double block_factor(std::int64_t m, const Exponent& p1, const Exponent& p2) {
    if (p1 <= p2) return 1.0;
    double e = (p2.reciprocal() - p1.reciprocal()).to_double();
    return std::pow(static_cast<double>(m), e);
}

double closed_norm(const std::vector<double>& beta, const std::vector<std::int64_t>& M, const Exponent& p1,
                   const Exponent& q1, const Exponent& p2, const Exponent& q2) {
    std::vector<double> nu;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        if (M[j] == 0) continue;
        nu.push_back(block_factor(M[j], p1, p2) / beta[j]);
    }
    if (nu.empty()) return 0.0;
    if (q1 <= q2) return *std::max_element(nu.begin(), nu.end());
    Exponent r = Exponent::from_reciprocal(q2.reciprocal() - q1.reciprocal());
    return lp_norm(nu, as_double(r));
}

std::vector<std::size_t> block_of(const std::vector<std::int64_t>& M) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < M.size(); ++j) {
        for (std::int64_t i = 0; i < M[j]; ++i) out.push_back(j);
    }
    return out;
}

FiniteSection with_beta(const FiniteSection& s, std::vector<double> beta, const Exponent& p1, const Exponent& q1,
                        const Exponent& p2, const Exponent& q2) {
    FiniteSection t = s;
    t.beta = std::move(beta);
    t.p1 = p1;
    t.q1 = q1;
    t.p2 = p2;
    t.q2 = q2;
    t.provenance = {{"kind", "manual"}};
    return t;
}

void check_entropy_caps(const FiniteSection& s, int k, const Caps& caps) {
    validate(s);
    if (s.dimension() > caps.entropy_n) {
        throw LabError("entropy: dimension " + std::to_string(s.dimension()) + " exceeds cap " +
                       std::to_string(caps.entropy_n));
    }
    if (k < 1 || k > caps.entropy_k) {
        throw LabError("entropy: k must lie in [1, " + std::to_string(caps.entropy_k) + "]");
    }
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y, std::vector<double>* residuals) {
    const double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw LabError("rate fit needs at least two distinct block sizes");
    double slope = sxy / sxx;
    if (residuals) {
        residuals->clear();
        for (std::size_t i = 0; i < x.size(); ++i) residuals->push_back(y[i] - (my + slope * (x[i] - mx)));
    }
    return slope;
}

}  // namespace

std::int64_t FiniteSection::dimension() const { return std::accumulate(M.begin(), M.end(), std::int64_t{0}); }

void validate(const FiniteSection& s) {
    if (s.L < 0) throw LabError("section: L must be >= 0");
    if (s.beta.size() != static_cast<std::size_t>(s.L) + 1 || s.M.size() != s.beta.size()) {
        throw LabError("section: beta and M need L+1 entries");
    }
    for (double b : s.beta) {
        if (!(b > 0.0) || !std::isfinite(b)) throw LabError("section: beta entries must be positive and finite");
    }
    for (std::int64_t m : s.M) {
        if (m < 1) throw LabError("section: block sizes must be positive");
    }
}

FiniteSection manual_section(std::vector<double> beta, std::vector<std::int64_t> M, Exponent p1, Exponent q1,
                             Exponent p2, Exponent q2) {
    FiniteSection s;
    s.L = static_cast<int>(beta.size()) - 1;
    s.beta = std::move(beta);
    s.M = std::move(M);
    s.p1 = p1;
    s.q1 = q1;
    s.p2 = p2;
    s.q2 = q2;
    validate(s);
    return s;
}

FiniteSection finite_section(const embanalyzer::EmbeddingProblem& prob, int L, double c, std::int64_t cap) {
    if (L < 0) throw LabError("finite_section: L must be >= 0");
    if (!(c >= 1.0) || !std::isfinite(c)) throw LabError("finite_section: cube volume c must be >= 1");
    embanalyzer::validate(prob);
    FiniteSection s;
    s.L = L;
    s.p1 = prob.p1;
    s.q1 = prob.q1;
    s.p2 = prob.p2;
    s.q2 = prob.q2;
    const double shift = prob.d * (prob.p1.reciprocal() - prob.p2.reciprocal()).to_double();
    std::int64_t n = 0;
    for (int j = 0; j <= L; ++j) {
        double lb = seqdsl::eval(prob.sigma, j).log2 - seqdsl::eval(prob.tau, j).log2 - shift * j;
        double m = std::round(c * std::exp2(static_cast<double>(j) * prob.d));
        if (m > static_cast<double>(cap)) throw LabError("finite_section: block size exceeds cap");
        s.beta.push_back(std::exp2(lb));
        s.M.push_back(static_cast<std::int64_t>(m));
        n += s.M.back();
        if (n > cap) throw LabError("finite_section: total dimension exceeds cap " + std::to_string(cap));
    }
    s.provenance = {{"kind", "from_problem"}, {"problem", report::to_json(prob)}, {"c", c}};
    validate(s);
    return s;
}

double mixed_norm(const std::vector<double>& x, const std::vector<std::int64_t>& M, const Exponent& p,
                  const Exponent& q) {
    std::vector<double> blocks;
    std::size_t off = 0;
    for (std::int64_t m : M) {
        blocks.push_back(lp_norm(x.data() + off, static_cast<std::size_t>(m), as_double(p)));
        off += static_cast<std::size_t>(m);
    }
    return lp_norm(blocks, as_double(q));
}

double embedding_norm_closed(const FiniteSection& s) {
    validate(s);
    return closed_norm(s.beta, s.M, s.p1, s.q1, s.p2, s.q2);
}

double embedding_norm_search(const FiniteSection& s, int iters, std::uint64_t seed) {
    validate(s);
    if (iters < 1) throw LabError("embedding_norm_search: iters must be >= 1");
    const auto n = static_cast<std::size_t>(s.dimension());
    const auto blk = block_of(s.M);
    std::mt19937_64 rng(resolve_seed(seed));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    auto ratio = [&](const std::vector<double>& u) {
        double src = mixed_norm(u, s.M, s.p1, s.q1);
        if (src == 0.0) return 0.0;
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = u[i] / s.beta[blk[i]];
        return mixed_norm(y, s.M, s.p2, s.q2) / src;
    };

    std::vector<std::vector<double>> starts;
    starts.emplace_back(n, 1.0);
    std::size_t off = 0;
    std::vector<double> sparse(n, 0.0);
    for (std::int64_t m : s.M) {
        std::vector<double> e(n, 0.0);
        e[off] = 1.0;
        sparse[off] = 1.0;
        starts.push_back(std::move(e));
        off += static_cast<std::size_t>(m);
    }
    starts.push_back(sparse);
    for (int r = 0; r < 3; ++r) {
        std::vector<double> u(n);
        for (auto& v : u) v = unif(rng);
        starts.push_back(std::move(u));
    }

    // block ranges for whole-block moves
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    off = 0;
    for (std::int64_t m : s.M) {
        ranges.emplace_back(off, off + static_cast<std::size_t>(m));
        off += static_cast<std::size_t>(m);
    }

    double best = 0.0;
    for (auto x : starts) {
        double f = ratio(x);
        double step = 1.0;
        for (int it = 0; it < iters && step > 1e-7; ++it) {
            bool improved = false;
            auto try_move = [&](std::vector<double>& cand) {
                double g = ratio(cand);
                if (g > f * (1.0 + 1e-13)) {
                    f = g;
                    x = cand;
                    improved = true;
                }
            };
            double mean = 0.0;
            for (double v : x) mean += std::abs(v);
            mean /= static_cast<double>(n);
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<double> cand = x;
                if (x[i] == 0.0) {
                    cand[i] = step * mean;
                    try_move(cand);
                    continue;
                }
                for (double factor : {1.0 + step, 1.0 / (1.0 + step), 0.0}) {
                    cand = x;
                    cand[i] *= factor;
                    try_move(cand);
                }
            }
            for (const auto& [a, b] : ranges) {
                for (double factor : {1.0 + step, 1.0 / (1.0 + step)}) {
                    std::vector<double> cand = x;
                    for (std::size_t i = a; i < b; ++i) cand[i] *= factor;
                    try_move(cand);
                }
                // flatten / concentrate the block at fixed source block norm
                const auto m = b - a;
                double bn = lp_norm(x.data() + a, m, as_double(s.p1));
                if (bn == 0.0 || m == 1) continue;
                std::vector<double> flat = x;
                double c = bn / lp_norm(std::vector<double>(m, 1.0), as_double(s.p1));
                for (std::size_t i = a; i < b; ++i) flat[i] = c;
                try_move(flat);
                std::vector<double> peak = x;
                auto top = std::max_element(peak.begin() + static_cast<std::ptrdiff_t>(a),
                                            peak.begin() + static_cast<std::ptrdiff_t>(b),
                                            [](double u, double v) { return std::abs(u) < std::abs(v); });
                for (std::size_t i = a; i < b; ++i) peak[i] = 0.0;
                *top = bn;
                try_move(peak);
            }
            if (!improved) step *= 0.5;
        }
        best = std::max(best, f);
    }
    return best;
}

double nuclear_norm_tong(const FiniteSection& s) {
    validate(s);
    if (!s.banach()) throw LabError("nuclear norm: parameters must lie in [1, inf]");
    const double tp = embanalyzer::tong(s.p1, s.p2).reciprocal().to_double();
    const Exponent tq = embanalyzer::tong(s.q1, s.q2);
    std::vector<double> a;
    for (std::size_t j = 0; j < s.beta.size(); ++j) {
        a.push_back(std::pow(static_cast<double>(s.M[j]), tp) / s.beta[j]);
    }
    return lp_norm(a, as_double(tq));
}

NuclearOracle nuclear_norm_coordinate_bound(const FiniteSection& s) {
    validate(s);
    if (!s.banach()) throw LabError("nuclear norm: parameters must lie in [1, inf]");
    // T = sum_i e_i^* (x) T e_i with ||e_i^*||_{X*} = 1/beta_j and ||e_i||_Y = 1
    double total = 0.0;
    std::size_t off = 0;
    const auto n = static_cast<std::size_t>(s.dimension());
    for (std::size_t j = 0; j < s.M.size(); ++j) {
        std::vector<double> e(n, 0.0);
        e[off] = 1.0;
        double ey = mixed_norm(e, s.M, s.p2, s.q2);
        total += static_cast<double>(s.M[j]) * ey / s.beta[j];
        off += static_cast<std::size_t>(s.M[j]);
    }
    return NuclearOracle{total, false, 'd', "coordinate representation"};
}

NuclearOracle nuclear_norm_oracle(const FiniteSection& s) {
    validate(s);
    if (!s.banach()) throw LabError("nuclear norm: parameters must lie in [1, inf]");
    const bool single = s.L == 0;
    const double b0 = s.beta.front();
    const bool beta_const = std::all_of(s.beta.begin(), s.beta.end(), [&](double b) { return b == b0; });
    if (s.p1 == s.p2 && (single || s.q1 == s.q2) && beta_const) {
        // identity of an n-dimensional space, scaled by 1/beta
        return NuclearOracle{static_cast<double>(s.dimension()) / b0, true, 'a', "identity: n / beta"};
    }
    if (s.p1.is_infinite() && (single || s.q1.is_infinite())) {
        NuclearOracle o = nuclear_norm_coordinate_bound(s);
        o.exact = true;
        o.oracle_case = 'b';
        o.method = "l_inf source: sum_i ||T e_i||";
        return o;
    }
    const Exponent two = Exponent::finite(Rational(2));
    if (s.p1 == two && s.q1 == two && s.p2 == two && s.q2 == two) {
        double trace = 0.0;
        for (std::size_t j = 0; j < s.beta.size(); ++j) trace += static_cast<double>(s.M[j]) / s.beta[j];
        return NuclearOracle{trace, true, 'c', "Hilbert diagonal: trace norm"};
    }
    return nuclear_norm_coordinate_bound(s);
}

double log_unit_ball_volume(const std::vector<std::int64_t>& M, const Exponent& p, const Exponent& q) {
    auto log_vp = [&](double m) {
        if (p.is_infinite()) return m * std::log(2.0);
        double ip = p.reciprocal().to_double();
        return m * std::log(2.0 * std::tgamma(1.0 + ip)) - std::lgamma(1.0 + m * ip);
    };
    double total = 0.0;
    double n = 0.0;
    for (std::int64_t mj : M) {
        double m = static_cast<double>(mj);
        total += log_vp(m);
        if (!q.is_infinite()) total += std::lgamma(1.0 + m * q.reciprocal().to_double());
        n += m;
    }
    if (!q.is_infinite()) total -= std::lgamma(1.0 + n * q.reciprocal().to_double());
    return total;
}

namespace {

// Radius of a cover of beta^{-1} B_{p1}^m by 2^b balls of l_{p2}^m: one ball at
// the origin, an even lattice net on the cube [-1/beta, 1/beta]^m, or the
// volumetric count N <= (1 + 2/delta)^m for p1-balls (p1 >= 1).
double block_radius(double beta, std::int64_t m, const Exponent& p1, const Exponent& p2, int b) {
    const double delta = 1.0 / beta;
    const double C = block_factor(m, p1, p2);
    double r = C * delta;
    if (b == 0) return r;
    const std::int64_t base = b / m;
    const std::int64_t extra = b % m;
    std::vector<double> h(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) h[static_cast<std::size_t>(i)] = std::ldexp(delta, -static_cast<int>(base + (i < extra ? 1 : 0)));
    r = std::min(r, lp_norm(h, as_double(p2)));
    if (p1.is_banach()) {
        double grow = std::expm1(std::log(2.0) * b / static_cast<double>(m));
        r = std::min(r, C * delta * 2.0 / grow);
    }
    return r;
}

// Volumetric cover of K = T_A(B_X) restricted to the first `levels` blocks:
// a maximal eps-separated set in K has at most
//   (1 + eps/(2 rho))^m vol(K) / vol((eps/2) B_Y)
// points, where rho B_Y is contained in K. Needs X and Y Banach.
double head_volume_radius(const FiniteSection& s, std::size_t levels, int b) {
    std::vector<std::int64_t> M(s.M.begin(), s.M.begin() + static_cast<std::ptrdiff_t>(levels));
    std::vector<double> beta(s.beta.begin(), s.beta.begin() + static_cast<std::ptrdiff_t>(levels));
    std::vector<double> inv(beta.size());
    double m = 0.0;
    double log2_det = 0.0;
    for (std::size_t j = 0; j < levels; ++j) {
        inv[j] = 1.0 / beta[j];
        m += static_cast<double>(M[j]);
        log2_det -= static_cast<double>(M[j]) * std::log2(beta[j]);
    }
    const double rho = 1.0 / closed_norm(inv, M, s.p2, s.q2, s.p1, s.q1);
    const double log2_vol = log2_det + (log_unit_ball_volume(M, s.p1, s.q1) - log_unit_ball_volume(M, s.p2, s.q2)) / std::log(2.0);
    auto log2_count = [&](double eps) { return m * (std::log2(1.0 + eps / (2.0 * rho)) + std::log2(2.0 / eps)) + log2_vol; };
    const double top = closed_norm(beta, M, s.p1, s.q1, s.p2, s.q2);
    if (log2_count(top) > b) return top;
    double lo = std::log2(top) - 200.0;
    double hi = std::log2(top);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (log2_count(std::exp2(mid)) > b) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::exp2(hi);
}

}  // namespace

std::vector<double> entropy_upper_all(const FiniteSection& s, int k_max, const Caps& caps) {
    check_entropy_caps(s, k_max, caps);
    if (!s.p2.is_banach() || !s.q2.is_banach()) throw LabError("entropy_upper: target must be a Banach space");
    const std::size_t levels = s.beta.size();
    const double norm = embedding_norm_closed(s);
    const double q2 = as_double(s.q2);
    const bool sup = s.q2.is_infinite();
    const bool convex = s.p1.is_banach() && s.q1.is_banach();

    std::vector<double> out(static_cast<std::size_t>(k_max), norm);
    // Levels 0..J are covered block by block, the rest by the origin.
    for (std::size_t J = 0; J < levels; ++J) {
        std::vector<std::int64_t> tailM(s.M);
        for (std::size_t j = 0; j <= J; ++j) tailM[j] = 0;
        const double tail = closed_norm(s.beta, tailM, s.p1, s.q1, s.p2, s.q2);

        std::vector<int> bits(J + 1, 0);
        std::vector<double> r(J + 1);
        for (std::size_t j = 0; j <= J; ++j) r[j] = block_radius(s.beta[j], s.M[j], s.p1, s.p2, 0);
        for (int k = 1; k <= k_max; ++k) {
            if (k > 1) {
                std::size_t pick = 0;
                double best_gain = -1.0;
                for (std::size_t j = 0; j <= J; ++j) {
                    // best average gain over the next 1..M_j bits (nets plateau)
                    double gain = sup ? r[j] : 0.0;
                    for (std::int64_t t = 1; !sup && t <= std::min<std::int64_t>(s.M[j], 64); ++t) {
                        double next = block_radius(s.beta[j], s.M[j], s.p1, s.p2, bits[j] + static_cast<int>(t));
                        gain = std::max(gain, (std::pow(r[j], q2) - std::pow(next, q2)) / static_cast<double>(t));
                    }
                    if (gain > best_gain || (gain == best_gain && r[j] > r[pick])) {
                        best_gain = gain;
                        pick = j;
                    }
                }
                ++bits[pick];
                r[pick] = block_radius(s.beta[pick], s.M[pick], s.p1, s.p2, bits[pick]);
            }
            // errors on disjoint level sets combine in l_{q2}
            std::vector<double> parts = r;
            parts.push_back(tail);
            double radius = lp_norm(parts, q2);
            if (convex) radius = std::min(radius, lp_norm(std::vector<double>{head_volume_radius(s, J + 1, k - 1), tail}, q2));
            auto& slot = out[static_cast<std::size_t>(k - 1)];
            slot = std::min(slot, radius);
        }
    }
    for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::min(out[i], out[i - 1]);
    return out;
}

double entropy_upper(const FiniteSection& s, int k, const Caps& caps) { return entropy_upper_all(s, k, caps).back(); }

double entropy_lower(const FiniteSection& s, int k, const Caps& caps) {
    check_entropy_caps(s, k, caps);
    const double n = static_cast<double>(s.dimension());
    double log_det = 0.0;
    for (std::size_t j = 0; j < s.beta.size(); ++j) log_det -= static_cast<double>(s.M[j]) * std::log(s.beta[j]);
    double log_ratio = log_det + log_unit_ball_volume(s.M, s.p1, s.q1) - log_unit_ball_volume(s.M, s.p2, s.q2);
    return std::exp2(-(k - 1) / n) * std::exp(log_ratio / n);
}

EntropyBound entropy_bounds(const FiniteSection& s, int k, const Caps& caps) {
    EntropyBound b;
    b.k = k;
    b.upper = entropy_upper(s, k, caps);
    b.lower = entropy_lower(s, k, caps);
    const bool one_d = s.dimension() == 1;
    b.method_upper = one_d ? "exact-1d" : "greedy-net";
    b.method_lower = one_d ? "exact-1d" : "volume";
    return b;
}

EntropyPropertyReport entropy_properties(const FiniteSection& s, const std::vector<int>& ks, const Caps& caps) {
    if (ks.empty()) throw LabError("entropy_properties: empty k list");
    EntropyPropertyReport rep;
    rep.ks = ks;
    std::sort(rep.ks.begin(), rep.ks.end());
    const int kmax = rep.ks.back();
    auto up = entropy_upper_all(s, kmax, caps);
    rep.norm = embedding_norm_closed(s);
    constexpr double tol = 1e-9;
    for (int k : rep.ks) {
        rep.upper.push_back(up[static_cast<std::size_t>(k - 1)]);
        rep.lower.push_back(entropy_lower(s, k, caps));
        if (rep.lower.back() > rep.upper.back() * (1.0 + tol)) {
            rep.violations.push_back("lower > upper at k=" + std::to_string(k));
        }
    }
    for (std::size_t i = 1; i < up.size(); ++i) {
        if (up[i] > up[i - 1] * (1.0 + tol)) rep.violations.push_back("upper not monotone at k=" + std::to_string(i + 1));
    }
    if (up.front() > rep.norm * (1.0 + tol)) rep.violations.push_back("e_1 exceeds the operator norm");

    std::vector<double> root(s.beta.size());
    std::transform(s.beta.begin(), s.beta.end(), root.begin(), [](double b) { return std::sqrt(b); });
    std::vector<std::pair<Exponent, Exponent>> mids{{s.p1, s.q1}, {s.p2, s.q2}};
    for (const auto& [pm, qm] : mids) {
        if (!pm.is_banach() || !qm.is_banach()) continue;
        FiniteSection t1 = with_beta(s, root, s.p1, s.q1, pm, qm);
        FiniteSection t2 = with_beta(s, root, pm, qm, s.p2, s.q2);
        auto u1 = entropy_upper_all(t1, kmax, caps);
        auto u2 = entropy_upper_all(t2, kmax, caps);
        for (int k1 : rep.ks) {
            for (int k2 : rep.ks) {
                int k = k1 + k2 - 1;
                if (k > kmax) continue;
                double lhs = entropy_lower(s, k, caps);
                double rhs = u1[static_cast<std::size_t>(k1 - 1)] * u2[static_cast<std::size_t>(k2 - 1)];
                if (lhs > rhs * (1.0 + tol)) {
                    rep.violations.push_back("multiplicativity fails at k1=" + std::to_string(k1) +
                                             ", k2=" + std::to_string(k2));
                }
            }
        }
    }
    return rep;
}

RateFit rate_fit_sections(const std::vector<FiniteSection>& sections, const Caps& caps) {
    if (sections.size() < 2) throw LabError("rate_fit: need at least two levels");
    RateFit fit;
    for (const auto& s : sections) {
        validate(s);
        const std::int64_t n = s.dimension();
        const int k = static_cast<int>(2 * n);
        check_entropy_caps(s, k, caps);
        const double ML = static_cast<double>(s.M.back());
        const double a = (s.p1.reciprocal() - s.p2.reciprocal()).to_double();
        fit.levels.push_back(s.L);
        fit.ks.push_back(k);
        fit.log2_M.push_back(std::log2(ML));
        fit.log2_upper.push_back(std::log2(entropy_upper(s, k, caps)));
        fit.log2_lower.push_back(std::log2(entropy_lower(s, k, caps)));
        fit.log2_predicted.push_back(-std::log2(s.beta.back()) - a * std::log2(ML));
    }
    fit.slope = fit_slope(fit.log2_M, fit.log2_upper, &fit.residuals);
    fit.predicted_slope = fit_slope(fit.log2_M, fit.log2_predicted, nullptr);
    fit.non_decaying = fit.slope > -0.05;
    return fit;
}

RateFit rate_fit(const embanalyzer::EmbeddingProblem& prob, const std::vector<int>& Ls, double c, const Caps& caps) {
    embanalyzer::validate(prob);
    const Rational d(prob.d);
    Rational shift = -d * (prob.p1.reciprocal() - prob.p2.reciprocal() + embanalyzer::dual_star(prob.p1, prob.p2).reciprocal());
    std::vector<seqdsl::Expr> parts{prob.sigma, seqdsl::inverse(prob.tau)};
    if (!shift.is_zero()) parts.push_back(seqdsl::geometric(shift));
    if (seqcore::is_almost_strongly_increasing(seqdsl::product(std::move(parts))) != seqcore::Tri::yes) {
        throw LabError("rate_fit: the problem is not certified non-limiting");
    }
    std::vector<FiniteSection> sections;
    for (int L : Ls) sections.push_back(finite_section(prob, L, c, caps.entropy_n));
    return rate_fit_sections(sections, caps);
}

json to_json(const FiniteSection& s) {
    return {{"L", s.L},           {"beta", s.beta},     {"M", s.M},           {"p1", s.p1.str()},
            {"q1", s.q1.str()},   {"p2", s.p2.str()},   {"q2", s.q2.str()},   {"dimension", s.dimension()},
            {"provenance", s.provenance}};
}

FiniteSection section_from_json(const json& j) {
    auto ex = [&](const char* key) {
        if (!j.contains(key)) throw LabError(std::string("section: missing '") + key + "'");
        const json& v = j.at(key);
        if (v.is_string()) return Exponent::parse(v.get<std::string>());
        if (v.is_number_integer()) return Exponent::finite(Rational(v.get<std::int64_t>()));
        return Exponent::parse(v.dump());
    };
    if (!j.contains("beta") || !j.contains("M")) throw LabError("section: beta and M are required");
    FiniteSection s = manual_section(j.at("beta").get<std::vector<double>>(), j.at("M").get<std::vector<std::int64_t>>(),
                                     ex("p1"), ex("q1"), ex("p2"), ex("q2"));
    if (j.contains("L") && j.at("L").get<int>() != s.L) throw LabError("section: L does not match the block count");
    return s;
}

json to_json(const NuclearOracle& o) {
    return {{"value", o.value}, {"kind", o.exact ? "exact" : "upper_bound"}, {"case", std::string(1, o.oracle_case)},
            {"method", o.method}};
}

json to_json(const EntropyBound& b) {
    return {{"k", b.k},
            {"lower", b.lower},
            {"upper", b.upper},
            {"method_upper", b.method_upper},
            {"method_lower", b.method_lower}};
}

json to_json(const EntropyPropertyReport& r) {
    return {{"ks", r.ks},   {"upper", r.upper},           {"lower", r.lower},
            {"norm", r.norm}, {"violations", r.violations}, {"ok", r.ok()}};
}

json to_json(const RateFit& r) {
    return {{"levels", r.levels},
            {"k", r.ks},
            {"log2_M", r.log2_M},
            {"log2_upper", r.log2_upper},
            {"log2_lower", r.log2_lower},
            {"log2_predicted", r.log2_predicted},
            {"slope", r.slope},
            {"predicted_slope", r.predicted_slope},
            {"residuals", r.residuals},
            {"non_decaying", r.non_decaying}};
}

std::uint64_t resolve_seed(std::uint64_t fallback) {
    if (const char* env = std::getenv("GSEMBED_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw LabError("GSEMBED_SEED must be a non-negative integer");
        }
    }
    return fallback;
}

}  // namespace gsembed::seqspacelab
