#include "gsembed/seqcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gsembed::seqcore {

using namespace seqdsl;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// Sign shared by all log-type exponents of a profile, or nullopt if mixed.
std::optional<int> common_log_sign(const SequenceProfile& p) {
    int sign = 0;
    auto merge = [&](int s) {
        if (s == 0) return true;
        if (sign == 0) {
            sign = s;
            return true;
        }
        return sign == s;
    };
    if (p.log_exponent && !merge(p.log_exponent->sign())) return std::nullopt;
    for (const auto& sv : p.sv_factors) {
        int s = std::visit(overloaded{
                               [](const IterLog& n) { return n.exponent.sign(); },
                               [](const ExpLogPow& n) { return n.coeff.sign(); },
                               [](const auto&) { return 0; },
                           },
                           sv.node().v);
        if (!merge(s)) return std::nullopt;
    }
    return sign;
}

struct WindowRatios {
    double min_log = std::numeric_limits<double>::infinity();
    double max_log = -std::numeric_limits<double>::infinity();
};

WindowRatios scan_ratios(const std::vector<double>& log2v) {
    WindowRatios w;
    for (std::size_t j = 0; j + 1 < log2v.size(); ++j) {
        double r = log2v[j + 1] - log2v[j];
        w.min_log = std::min(w.min_log, r);
        w.max_log = std::max(w.max_log, r);
    }
    return w;
}

void require_positive_values(const std::vector<double>& log2v) {
    for (double v : log2v) {
        if (!std::isfinite(v)) throw SeqCoreError("sequence evaluates to a non-positive or non-finite value");
    }
}

}  // namespace

std::string to_string(Tri t) {
    switch (t) {
        case Tri::yes: return "yes";
        case Tri::no: return "no";
        case Tri::undecided: return "undecided";
    }
    return "undecided";
}

AdmissibilityCertificate certify_admissible(const Expr& e, int window) {
    if (window < 8) throw SeqCoreError("admissibility window must be >= 8");
    auto log2v = log2_series(e, static_cast<std::size_t>(window) + 1);
    require_positive_values(log2v);
    WindowRatios w = scan_ratios(log2v);

    AdmissibilityCertificate cert{std::exp2(w.min_log), std::exp2(w.max_log), window, false};

    SequenceProfile p = canonicalize(e);
    if (p.canonical && p.rate) {
        if (auto sign = common_log_sign(p)) {
            // Every log-type ratio factor moves monotonically from its value at
            // j = 0 to 1, so the extremes are the first ratio and 2^rate.
            double first = log2v[1] - log2v[0];
            double limit = p.rate->to_double();
            cert.d0 = std::exp2(std::min(first, limit));
            cert.d1 = std::exp2(std::max(first, limit));
            cert.exact = true;
        }
    }
    return cert;
}

BoydBracket numeric_boyd_bracket(const Expr& e, int K) {
    if (K < 64) throw SeqCoreError("numeric Boyd bracketing needs K >= 64");
    auto log2v = log2_series(e, static_cast<std::size_t>(K) + 1);
    require_positive_values(log2v);

    auto sup_inf = [&](int j) {
        double hi = -std::numeric_limits<double>::infinity();
        double lo = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= K - j; ++k) {
            double r = log2v[static_cast<std::size_t>(j + k)] - log2v[static_cast<std::size_t>(k)];
            hi = std::max(hi, r);
            lo = std::min(lo, r);
        }
        return std::pair{hi / j, lo / j};
    };
    auto [up_q, lo_q] = sup_inf(K / 4);
    auto [up_h, lo_h] = sup_inf(K / 2);

    auto bracket = [&](double a, double b) {
        double width = 3.0 * std::abs(a - b) + 1.0 / 32.0;
        return BoydIndex{std::nullopt, std::min(a, b) - width, std::max(a, b) + width};
    };
    return BoydBracket{bracket(lo_q, lo_h), bracket(up_q, up_h), true};
}

BoydBracket boyd_indices(const Expr& e, int K) {
    SequenceProfile p = canonicalize(e);
    if (p.upper.exact && p.lower.exact) return BoydBracket{p.lower, p.upper, false};
    return numeric_boyd_bracket(e, K);
}

EquivalenceResult equivalent(const Expr& e1, const Expr& e2, int window) {
    if (window < 8) throw SeqCoreError("equivalence window must be >= 8");
    auto a = log2_series(e1, static_cast<std::size_t>(window));
    auto b = log2_series(e2, static_cast<std::size_t>(window));
    std::vector<double> ratio(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) ratio[j] = a[j] - b[j];
    auto [mn, mx] = std::minmax_element(ratio.begin(), ratio.end());

    auto witness = [&] {
        std::int64_t best = 0;
        double dev = -1.0;
        for (std::size_t j = 0; j < ratio.size(); ++j) {
            double d = std::abs(ratio[j] - ratio[0]);
            if (d > dev) {
                dev = d;
                best = static_cast<std::int64_t>(j);
            }
        }
        return best;
    };

    EquivalenceResult out;
    Expr t1 = strip_tables(e1);
    Expr t2 = strip_tables(e2);
    SequenceProfile p1 = canonicalize(t1);
    SequenceProfile p2 = canonicalize(t2);

    auto yes = [&](std::string why) {
        out.verdict = Tri::yes;
        out.exact = true;
        out.c_lo = std::exp2(*mn) / 1.1;
        out.c_hi = std::exp2(*mx) * 1.1;
        out.reason = std::move(why);
        return out;
    };
    auto no = [&](std::string why) {
        out.verdict = Tri::no;
        out.exact = true;
        out.witness = witness();
        out.reason = std::move(why);
        return out;
    };

    if (p1.opaque || p2.opaque) {
        out.reason = "no closed form for at least one sequence";
        return out;
    }
    if (*p1.upper.exact != *p2.upper.exact || *p1.lower.exact != *p2.lower.exact) {
        return no("Boyd indices differ");
    }
    if (p1.piecewise || p2.piecewise) {
        if (!p1.piecewise || !p2.piecewise) return no("oscillating and non-oscillating profiles");
        if (p1.piecewise->even != p2.piecewise->even || p1.piecewise->odd != p2.piecewise->odd) {
            return no("block slopes differ");
        }
        // same oscillating part; compare the remaining log-type factors
        std::vector<Expr> rest1{log_power(*p1.log_exponent)};
        std::vector<Expr> rest2{log_power(*p2.log_exponent)};
        for (const auto& s : p1.sv_factors) rest1.push_back(s);
        for (const auto& s : p2.sv_factors) rest2.push_back(s);
        t1 = product(std::move(rest1));
        t2 = product(std::move(rest2));
    }
    SequenceProfile q = canonicalize(product({t1, inverse(t2)}));
    if (q.rate && !q.rate->is_zero()) return no("geometric rates differ");
    if (q.log_exponent && !q.log_exponent->is_zero()) return no("ratio carries an unbounded (1+j) power");
    if (!q.sv_factors.empty()) return no("ratio carries an unbounded slowly varying factor");
    return yes("ratio is eventually constant");
}

// --- standardization -------------------------------------------------------

StandardizationResult standardize(const StandardizationInput& in, std::size_t prefix_len) {
    if (prefix_len == 0) throw SeqCoreError("prefix_len must be positive");
    AdmissibilityCertificate ncert = certify_admissible(in.N, 64);
    if (!(ncert.d0 > 1.0)) throw SeqCoreError("N is not strongly increasing (lambda0 <= 1)");
    const double lambda0 = ncert.d0;

    SequenceProfile np = canonicalize(in.N);
    int kappa0 = 0;
    if (in.kappa0) {
        kappa0 = *in.kappa0;
        if (kappa0 < 1 || std::pow(lambda0, kappa0) < 2.0 * (1.0 - 1e-12)) {
            throw SeqCoreError("kappa0 violates lambda0^kappa0 >= 2");
        }
    } else if (np.canonical && np.rate && np.sv_factors.empty() && np.log_exponent->is_zero()) {
        kappa0 = static_cast<int>(np.rate->reciprocal().ceil());
    } else {
        kappa0 = 1;
        while (std::pow(lambda0, kappa0) < 2.0 * (1.0 - 1e-12)) ++kappa0;
    }

    // k(j) by scanning; N is strictly increasing.
    std::vector<std::int64_t> k_of_j(prefix_len);
    std::int64_t k = 0;
    for (std::size_t j = 0; j < prefix_len; ++j) {
        double need = static_cast<double>(j) - 1.0;
        while (log2_at(in.N, static_cast<double>(k + kappa0)) < need - 1e-9) ++k;
        k_of_j[j] = k;
    }

    std::vector<double> prefix(prefix_len);
    for (std::size_t j = 0; j < prefix_len; ++j) {
        EvalResult v = eval(in.sigma, k_of_j[j]);
        if (v.scale != Scale::finite) throw SeqCoreError("sigma overflows inside the standardization prefix");
        prefix[j] = v.value;
    }

    Expr continuation;
    const bool pure_dyadic = np.canonical && np.rate && *np.rate == Rational(1) && np.log_exponent->is_zero() &&
                             np.sv_factors.empty();
    if (pure_dyadic) {
        // k(j) = j - const on the tail, and shifts preserve equivalence
        continuation = in.sigma;
    } else {
        if (!np.canonical || !np.rate || np.rate->sign() <= 0) {
            throw SeqCoreError("standardize: N must be 2^(c*j) times (1+j) / (1+log2(1+j)) powers");
        }
        Rational iter_n(0);
        for (const auto& sv : np.sv_factors) {
            const auto* it = std::get_if<IterLog>(&sv.node().v);
            if (!it) throw SeqCoreError("standardize: exp(log^k) factors in N are not supported");
            iter_n = it->exponent;
        }
        SequenceProfile sp = canonicalize(strip_tables(in.sigma));
        if (sp.opaque || sp.piecewise || !sp.rate) {
            throw SeqCoreError("standardize: sigma needs a closed-form profile when N is not 2^j");
        }
        const Rational c = *np.rate;
        const Rational a = *sp.rate;
        std::vector<Expr> parts;
        auto push_nonzero = [&](Expr e, const Rational& r) {
            if (!r.is_zero()) parts.push_back(std::move(e));
        };
        push_nonzero(geometric(a / c), a / c);
        Rational b = *sp.log_exponent - a * *np.log_exponent / c;
        push_nonzero(log_power(b), b);
        Rational iter_corr = -(a * iter_n) / c;
        // merge with an IterLog of sigma when present
        for (const auto& sv : sp.sv_factors) {
            if (const auto* it = std::get_if<IterLog>(&sv.node().v)) {
                iter_corr += it->exponent;
            } else {
                parts.push_back(sv);
            }
        }
        push_nonzero(iter_log(iter_corr), iter_corr);
        if (parts.empty()) {
            continuation = constant(1.0);
        } else if (parts.size() == 1) {
            continuation = parts.front();
        } else {
            continuation = product(std::move(parts));
        }
    }

    AdmissibilityCertificate scert = certify_admissible(in.sigma, 64);
    StandardizationResult out;
    out.beta = table(std::move(prefix), continuation);
    out.kappa0 = kappa0;
    out.lambda0 = lambda0;
    out.mu0 = std::min(1.0, std::pow(scert.d0, kappa0));
    out.mu1 = std::max(1.0, std::pow(scert.d1, kappa0));
    out.k_of_j = std::move(k_of_j);
    return out;
}

// --- Edmunds-Netrusov parameter functions -----------------------------------

FomegaViolation::FomegaViolation(double a, double b, const std::string& which)
    : SeqCoreError("omega violates the " + which + " bound at t1=" + std::to_string(a) + ", t2=" + std::to_string(b)),
      t1(a),
      t2(b) {}

Expr reciprocal(const Expr& e) {
    return std::visit(overloaded{
                          [](const Geometric& n) { return geometric(-n.rate); },
                          [](const LogPower& n) { return log_power(-n.exponent); },
                          [](const IterLog& n) { return iter_log(-n.exponent); },
                          [](const ExpLogPow& n) { return exp_log_pow(-n.coeff, n.power); },
                          [](const Table& n) {
                              std::vector<double> inv(n.prefix.size());
                              std::transform(n.prefix.begin(), n.prefix.end(), inv.begin(),
                                             [](double v) { return 1.0 / v; });
                              return table(std::move(inv), reciprocal(n.continuation));
                          },
                          [](const Product& n) {
                              std::vector<Expr> kids;
                              for (const auto& c : n.children) kids.push_back(reciprocal(c));
                              return product(std::move(kids));
                          },
                          [](const Power& n) { return power(n.child, -n.exponent); },
                          [](const Const& n) { return constant(1.0 / n.value); },
                          [&](const PiecewiseGeometric&) { return inverse(e); },
                      },
                      e.node().v);
}

EdmundsNetrusovResult from_edmunds_netrusov(const Expr& omega, std::optional<double> L, std::optional<double> c,
                                            int window) {
    if (window < 8) throw SeqCoreError("window must be >= 8");
    constexpr int kSteps = 4;  // grid spacing 1/4 in u = log2(1/t)
    const int n = window * kSteps + 1;
    std::vector<double> u(static_cast<std::size_t>(n));
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        u[static_cast<std::size_t>(i)] = static_cast<double>(i) / kSteps;
        w[static_cast<std::size_t>(i)] = log2_at(omega, u[static_cast<std::size_t>(i)]);
        if (!std::isfinite(w[static_cast<std::size_t>(i)])) throw SeqCoreError("omega is not positive and finite");
    }

    double ell = 0.0;
    double cc = 1.0;
    if (L && c) {
        ell = *L;
        cc = *c;
        if (!(ell > 0.0) || !(cc > 0.0)) throw SeqCoreError("L and c must be positive");
        const double lc = std::log2(cc);
        // t1 <= t2  <=>  u1 >= u2
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k <= i; ++k) {
                double u1 = u[static_cast<std::size_t>(i)];
                double u2 = u[static_cast<std::size_t>(k)];
                double w1 = w[static_cast<std::size_t>(i)];
                double w2 = w[static_cast<std::size_t>(k)];
                if (w1 + ell * u1 < lc + w2 + ell * u2 - 1e-9) throw FomegaViolation(std::exp2(-u1), std::exp2(-u2), "lower");
                if (lc + w1 - ell * u1 > w2 - ell * u2 + 1e-9) throw FomegaViolation(std::exp2(-u1), std::exp2(-u2), "upper");
            }
        }
    } else if (L || c) {
        throw SeqCoreError("supply both L and c, or neither");
    } else {
        for (int i = 0; i + 1 < n; ++i) {
            ell = std::max(ell, std::abs(w[static_cast<std::size_t>(i + 1)] - w[static_cast<std::size_t>(i)]) * kSteps);
        }
        ell = std::max(ell, 1e-12);
    }

    EdmundsNetrusovResult out;
    out.sigma = reciprocal(omega);
    out.L = ell;
    out.c = cc;
    out.certificate = AdmissibilityCertificate{cc * std::exp2(-ell), std::exp2(ell) / cc, window, false};
    return out;
}

Tri is_almost_strongly_increasing(const Expr& e) {
    BoydBracket b = boyd_indices(e);
    if (b.lower.exact) return b.lower.exact->sign() > 0 ? Tri::yes : Tri::no;
    if (b.lower.lo > 0.0) return Tri::yes;
    return Tri::undecided;
}

}  // namespace gsembed::seqcore
