#include "gsembed/embanalyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gsembed/seqcore.hpp"

namespace gsembed::embanalyzer {

using namespace seqdsl;
using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// Log-scale data of a profile in order of dominance: (1+j)^b, then
// exp(c log^kappa) by decreasing kappa, then (1+log(1+j))^b'.
struct LogScale {
    Rational b;
    std::vector<std::pair<Rational, Rational>> exp_log;  // (kappa, coeff)
    Rational iter;
};

LogScale log_scale(const SequenceProfile& p) {
    LogScale s;
    s.b = p.log_exponent.value_or(Rational(0));
    for (const auto& f : p.sv_factors) {
        std::visit(overloaded{
                       [&](const IterLog& n) { s.iter += n.exponent; },
                       [&](const ExpLogPow& n) { s.exp_log.emplace_back(n.power, n.coeff); },
                       [](const auto&) {},
                   },
                   f.node().v);
    }
    std::sort(s.exp_log.begin(), s.exp_log.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    return s;
}

int leading_sign(const Rational& first, const LogScale& s, const Rational& last) {
    if (first.sign() != 0) return first.sign();
    for (const auto& [k, c] : s.exp_log) {
        if (c.sign() != 0) return c.sign();
    }
    return last.sign();
}

json profile_json(const SequenceProfile& p) {
    json j;
    if (p.opaque) {
        j["opaque"] = true;
        return j;
    }
    if (p.rate) j["rate"] = p.rate->str();
    if (p.piecewise) j["piecewise"] = {{"even", p.piecewise->even.str()}, {"odd", p.piecewise->odd.str()}};
    j["log_exponent"] = p.log_exponent.value_or(Rational(0)).str();
    json sv = json::array();
    for (const auto& f : p.sv_factors) sv.push_back(render(f));
    j["sv_factors"] = sv;
    return j;
}

Target make_target(const Exponent& r, bool c0) {
    if (!r.is_infinite()) return Target{TargetKind::ell_r, r};
    return Target{c0 ? TargetKind::c0 : TargetKind::ell_inf, r};
}

// Drops bounded factors and rebuilds the closed form; leaves tables and
// two-oscillation products untouched.
Expr simplify(const Expr& e) {
    SequenceProfile p = canonicalize(e);
    if (p.opaque) return e;
    std::vector<Expr> parts;
    if (p.piecewise) {
        if (!(p.piecewise->even < p.piecewise->odd)) return e;  // not expressible as pw2
        parts.push_back(piecewise(p.piecewise->even, p.piecewise->odd));
    } else if (p.rate && !p.rate->is_zero()) {
        parts.push_back(geometric(*p.rate));
    }
    if (p.log_exponent && !p.log_exponent->is_zero()) parts.push_back(log_power(*p.log_exponent));
    for (const auto& f : p.sv_factors) parts.push_back(f);
    if (parts.empty()) return constant(1.0);
    if (parts.size() == 1) return parts.front();
    return product(std::move(parts));
}

std::string sign_word(int s) { return s < 0 ? "negative" : (s > 0 ? "positive" : "zero"); }

Verdict decide_log_scale(Verdict v, const LogScale& s, const Target& t, bool on_blocks) {
    int lead = 0;
    std::string rule;
    switch (t.kind) {
        case TargetKind::ell_r: {
            Rational r = t.r.value();
            Rational first = on_blocks ? s.b : s.b * r + Rational(1);
            lead = leading_sign(first, s, s.iter * r + Rational(1));
            v.status = lead < 0 ? Status::holds : Status::fails;
            rule = on_blocks ? "sum over block peaks of (1+j)^(b*r) sv^r" : "b*r + 1 = " + first.str();
            v.evidence["comparison"] = {{"b", s.b.str()}, {"r", r.str()}, {"rule", rule}, {"leading_sign", sign_word(lead)}};
            break;
        }
        case TargetKind::c0:
            lead = leading_sign(s.b, s, s.iter);
            v.status = lead < 0 ? Status::holds : Status::fails;
            v.evidence["comparison"] = {{"b", s.b.str()}, {"rule", "tends to 0 iff leading log-scale sign < 0"},
                                        {"leading_sign", sign_word(lead)}};
            break;
        case TargetKind::ell_inf:
            lead = leading_sign(s.b, s, s.iter);
            v.status = lead <= 0 ? Status::holds : Status::fails;
            v.evidence["comparison"] = {{"b", s.b.str()}, {"rule", "bounded iff leading log-scale sign <= 0"},
                                        {"leading_sign", sign_word(lead)}};
            break;
    }
    return v;
}

// log2 of sum_{j<n} 2^{r*x_j} computed stably.
double log2_sum_pow(const std::vector<double>& x, std::size_t n, double r) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) m = std::max(m, r * x[j]);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += std::exp2(r * x[j] - m);
    return m + std::log2(acc);
}

Verdict decide_numeric(Verdict v, const Expr& e, const Target& t) {
    constexpr std::size_t J = std::size_t{1} << 14;
    constexpr double band = 1.0 / 64.0;
    auto x = log2_series(e, J);
    // Peak growth over [J/4, J) and peak-to-peak log growth across two
    // four-fold ranges; each range holds block ends of both parities.
    double a_hat = -std::numeric_limits<double>::infinity();
    double m_hi = -std::numeric_limits<double>::infinity();
    double m_lo = -std::numeric_limits<double>::infinity();
    for (std::size_t j = J / 16; j < J; ++j) {
        if (j >= J / 4) {
            a_hat = std::max(a_hat, x[j] / static_cast<double>(j));
            m_hi = std::max(m_hi, x[j]);
        } else {
            m_lo = std::max(m_lo, x[j]);
        }
    }
    double b_hat = (m_hi - m_lo) / 2.0;
    json num = {{"J", J}, {"slope_estimate", a_hat}, {"log_exponent_estimate", b_hat}, {"band", band}};
    if (t.kind == TargetKind::ell_r) {
        double r = t.r.to_double();
        num["log2_partial_sum_half"] = log2_sum_pow(x, J / 2, r);
        num["log2_partial_sum"] = log2_sum_pow(x, J, r);
    }
    v.evidence["method"] = "numeric";
    v.evidence["numeric"] = num;
    if (a_hat < -band) {
        v.status = Status::holds;
        return v;
    }
    if (a_hat > band) {
        v.status = Status::fails;
        return v;
    }
    double stat = b_hat;
    double boundary = 0.0;
    if (t.kind == TargetKind::ell_r) stat = b_hat * t.r.to_double() + 1.0;
    if (stat < boundary - band) {
        v.status = Status::holds;
    } else if (stat > boundary + band) {
        v.status = Status::fails;
    } else if (t.kind == TargetKind::ell_inf && stat < boundary) {
        v.status = Status::holds;
    } else {
        v.status = Status::inconclusive;
        v.evidence["unresolved"] = "estimated exponent within 1/64 of the membership boundary";
    }
    return v;
}

Exponent max_e(const Exponent& a, const Exponent& b) { return a < b ? b : a; }
Exponent min_e(const Exponent& a, const Exponent& b) { return a < b ? a : b; }

Verdict f_compactness(const EmbeddingProblem& prob) {
    EmbeddingProblem suff = prob;
    suff.scale = Scale::B;
    suff.q1 = max_e(prob.p1, prob.q1);
    suff.q2 = min_e(prob.p2, prob.q2);
    EmbeddingProblem nec = suff;
    nec.q1 = min_e(prob.p1, prob.q1);
    nec.q2 = max_e(prob.p2, prob.q2);

    Verdict vs = compactness(suff);
    Verdict vn = compactness(nec);
    Verdict out = vs;
    out.evidence = json::object();
    out.evidence["tag"] = "via-B-sandwich";
    out.evidence["sufficient"] = {{"q1", suff.q1.str()}, {"q2", suff.q2.str()}, {"status", to_string(vs.status)}};
    out.evidence["necessary"] = {{"q1", nec.q1.str()}, {"q2", nec.q2.str()}, {"status", to_string(vn.status)}};
    if (vs.status == Status::holds) {
        out.status = Status::holds;
    } else if (vn.status == Status::fails) {
        out.status = Status::fails;
        out = Verdict{Status::fails, vn.tested_sequence, vn.target, out.evidence, {}};
    } else {
        out.status = Status::inconclusive;
        out.evidence["unresolved"] = "q-dependent target differs between the two B-scale bounds";
    }
    out.citations = {"compactness-criterion", "b-f-sandwich"};
    return out;
}

}  // namespace

std::string to_string(Status s) {
    switch (s) {
        case Status::holds: return "holds";
        case Status::fails: return "fails";
        case Status::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string to_string(Residual r) {
    switch (r) {
        case Residual::none: return "none";
        case Residual::ratio: return "ratio";
        case Residual::integral: return "integral";
        case Residual::edmunds_netrusov: return "edmunds-netrusov";
    }
    return "none";
}

std::string to_string(Validity v) {
    switch (v) {
        case Validity::non_limiting: return "non_limiting";
        case Validity::limiting_catalog: return "limiting_catalog";
        case Validity::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string Target::str() const {
    switch (kind) {
        case TargetKind::ell_r: return "l_" + r.str();
        case TargetKind::c0: return "c0";
        case TargetKind::ell_inf: return "l_inf";
    }
    return "";
}

void validate(const EmbeddingProblem& prob) {
    if (prob.d < 1) throw AnalyzerError("dimension d must be a positive integer");
    if (prob.sigma.empty() || prob.tau.empty()) throw AnalyzerError("sigma and tau are required");
    if (prob.scale == Scale::F && (prob.p1.is_infinite() || prob.p2.is_infinite())) {
        throw AnalyzerError("F-scale requires finite p1 and p2");
    }
    try {
        (void)seqcore::certify_admissible(prob.sigma, 64);
        (void)seqcore::certify_admissible(prob.tau, 64);
    } catch (const seqcore::SeqCoreError& err) {
        throw AnalyzerError(std::string("admissibility: ") + err.what());
    }
}

Exponent tong(const Exponent& r1, const Exponent& r2) {
    if (!r1.is_banach() || !r2.is_banach()) throw AnalyzerError("tong: arguments must lie in [1, inf]");
    Rational diff = (r1.reciprocal() - r2.reciprocal()).positive_part();
    return Exponent::from_reciprocal(Rational(1) - diff);
}

Exponent dual_star(const Exponent& r1, const Exponent& r2) {
    return Exponent::from_reciprocal((r2.reciprocal() - r1.reciprocal()).positive_part());
}

Rational delta(const Rational& s1, const Exponent& p1, const Rational& s2, const Exponent& p2, int d) {
    return s1 - s2 - Rational(d) * (p1.reciprocal() - p2.reciprocal());
}

std::optional<Rational> geometric_rate(const Expr& e) {
    SequenceProfile p = canonicalize(strip_tables(e));
    if (p.opaque || p.piecewise || !p.rate) return std::nullopt;
    if (!p.log_exponent->is_zero() || !p.sv_factors.empty()) return std::nullopt;
    return p.rate;
}

Rational delta(const EmbeddingProblem& prob) {
    auto s1 = geometric_rate(prob.sigma);
    auto s2 = geometric_rate(prob.tau);
    if (!s1 || !s2) throw AnalyzerError("delta needs purely geometric sigma and tau; use the sequence criteria");
    return delta(*s1, prob.p1, *s2, prob.p2, prob.d);
}

Criterion criterion_sequence(const EmbeddingProblem& prob, Kind kind) {
    Exponent e;
    Exponent target;
    if (kind == Kind::compact) {
        e = dual_star(prob.p1, prob.p2);
        target = dual_star(prob.q1, prob.q2);
    } else {
        if (!prob.banach()) throw AnalyzerError("nuclearity is defined for Banach parameters 1 <= p, q <= inf");
        e = tong(prob.p1, prob.p2);
        target = tong(prob.q1, prob.q2);
    }
    Rational rate = Rational(prob.d) * (prob.p1.reciprocal() - prob.p2.reciprocal() + e.reciprocal());
    std::vector<Expr> parts{inverse(prob.sigma), prob.tau};
    if (!rate.is_zero()) parts.push_back(geometric(rate));
    Expr seq = simplify(product(std::move(parts)));
    return Criterion{seq, target, target.is_infinite()};
}

Verdict ellr_membership(const Expr& e, const Exponent& r, bool c0) {
    Verdict v;
    v.tested_sequence = e;
    v.target = make_target(r, c0);
    Expr stripped = strip_tables(e);
    SequenceProfile p = canonicalize(stripped);
    v.evidence["profile"] = profile_json(p);

    const Target target = v.target;
    if (p.opaque) return decide_numeric(std::move(v), stripped, target);

    if (p.piecewise) {
        // log2 gamma is piecewise linear with peaks at the block ends j = 2^l,
        // where it equals j times one of these two slopes.
        const Rational& ue = p.piecewise->even;
        const Rational& uo = p.piecewise->odd;
        Rational v_even = (Rational(2) * uo + ue) / Rational(3);
        Rational v_odd = (uo + Rational(2) * ue) / Rational(3);
        Rational vmax = max(v_even, v_odd);
        v.evidence["method"] = "piecewise-blocks";
        v.evidence["block_exponents"] = {{"even_ends", v_even.str()}, {"odd_ends", v_odd.str()}};
        if (vmax.sign() < 0) {
            v.status = Status::holds;
            v.evidence["comparison"] = "geometric decay along every block: max block exponent < 0";
            return v;
        }
        if (vmax.sign() > 0) {
            v.status = Status::fails;
            v.evidence["comparison"] = "geometric growth along block ends: max block exponent > 0";
            return v;
        }
        return decide_log_scale(std::move(v), log_scale(p), target, true);
    }

    v.evidence["method"] = "exact-profile";
    const Rational& a = *p.rate;
    if (a.sign() < 0) {
        v.status = Status::holds;
        v.evidence["comparison"] = "geometric rate " + a.str() + " < 0";
        return v;
    }
    if (a.sign() > 0) {
        v.status = Status::fails;
        v.evidence["comparison"] = "geometric rate " + a.str() + " > 0";
        return v;
    }
    return decide_log_scale(std::move(v), log_scale(p), target, false);
}

Verdict compactness(const EmbeddingProblem& prob) {
    validate(prob);
    if (prob.scale == Scale::F) return f_compactness(prob);
    Criterion c = criterion_sequence(prob, Kind::compact);
    Verdict v = ellr_membership(c.sequence, c.target, c.c0);
    v.evidence["kind"] = "compact";
    v.citations.push_back("compactness-criterion");
    if (c.c0) v.citations.push_back("c0-replacement");
    return v;
}

Verdict nuclearity(const EmbeddingProblem& prob) {
    validate(prob);
    if (!prob.banach()) throw AnalyzerError("nuclearity is defined for Banach parameters 1 <= p, q <= inf");
    if (prob.scale == Scale::F) return f_space_nuclearity(prob);
    Criterion c = criterion_sequence(prob, Kind::nuclear);
    Verdict v = ellr_membership(c.sequence, c.target, c.c0);
    v.evidence["kind"] = "nuclear";
    v.citations.push_back("nuclearity-tong-criterion");
    return v;
}

Verdict f_space_nuclearity(const EmbeddingProblem& prob) {
    validate(prob);
    if (prob.p1.is_infinite() || prob.p2.is_infinite()) throw AnalyzerError("F-scale requires finite p1 and p2");
    if (!prob.banach()) throw AnalyzerError("nuclearity is defined for Banach parameters 1 <= p, q <= inf");
    Criterion c = criterion_sequence(prob, Kind::nuclear);
    seqcore::BoydBracket b = seqcore::boyd_indices(c.sequence);
    Verdict v;
    v.tested_sequence = c.sequence;
    v.target = make_target(c.target, c.c0);
    auto idx = [](const BoydIndex& i) {
        json j = {{"lo", i.lo}, {"hi", i.hi}};
        if (i.exact) j["exact"] = i.exact->str();
        return j;
    };
    v.evidence["method"] = "boyd-indices";
    v.evidence["kind"] = "nuclear";
    v.evidence["boyd"] = {{"upper", idx(b.upper)}, {"lower", idx(b.lower)}, {"numeric", b.numeric}};
    if (b.upper.hi < 0.0) {
        v.status = Status::holds;
    } else if (b.lower.lo > 0.0) {
        v.status = Status::fails;
    } else {
        v.status = Status::inconclusive;
        v.evidence["unresolved"] = "Boyd indices of the criterion sequence do not have a common strict sign";
    }
    v.citations.push_back("f-nuclearity-boyd");
    return v;
}

Band compact_not_nuclear_band(const EmbeddingProblem& prob) {
    if (!prob.banach()) throw AnalyzerError("nuclearity is defined for Banach parameters 1 <= p, q <= inf");
    Band band;
    band.lo = Rational(prob.d) * dual_star(prob.p1, prob.p2).reciprocal();
    band.hi = Rational(prob.d) * tong(prob.p1, prob.p2).reciprocal();
    band.empty = !(band.lo < band.hi);
    if (!prob.sigma.empty() && !prob.tau.empty()) {
        if (geometric_rate(prob.sigma) && geometric_rate(prob.tau)) band.delta = delta(prob);
    }
    return band;
}

std::string RateFormula::str() const {
    if (validity == Validity::inconclusive) return "inconclusive";
    std::string out;
    if (u && !u->is_zero()) out += "k^(-" + u->str() + ")";
    if (v && !v->is_zero()) {
        if (!out.empty()) out += " * ";
        out += "(1+log k)^(" + (-*v).str() + ")";
    }
    if (residual != Residual::none && !detail.empty()) {
        if (!out.empty()) out += " * ";
        out += "[" + detail + "]";
    }
    return out.empty() ? "1" : out;
}

RateFormula entropy_rate(const EmbeddingProblem& prob) {
    Verdict comp = compactness(prob);
    if (comp.status == Status::fails) throw AnalyzerError("entropy_rate: the embedding is not compact");
    RateFormula f;
    if (comp.status == Status::inconclusive) {
        f.detail = "compactness undecided";
        return f;
    }

    const Exponent pstar = dual_star(prob.p1, prob.p2);
    const Exponent qstar = dual_star(prob.q1, prob.q2);
    const Rational d(prob.d);
    const Rational alpha = prob.p1.reciprocal() - prob.p2.reciprocal();

    Expr ratio = product({prob.sigma, inverse(prob.tau)});
    Rational shift = -d * (alpha + pstar.reciprocal());
    std::vector<Expr> parts{ratio};
    if (!shift.is_zero()) parts.push_back(geometric(shift));
    Expr inverse_criterion = product(std::move(parts));
    seqcore::Tri asi = seqcore::is_almost_strongly_increasing(inverse_criterion);

    SequenceProfile rp = canonicalize(strip_tables(ratio));
    const bool closed = !rp.opaque && !rp.piecewise && rp.rate.has_value();

    if (asi == seqcore::Tri::yes) {
        f.validity = Validity::non_limiting;
        f.citations = {"entropy-non-limiting"};
        if (closed) {
            f.u = *rp.rate / d;
            f.v = *rp.log_exponent;
            if (!rp.sv_factors.empty()) {
                f.residual = Residual::ratio;
                std::vector<Expr> inv;
                for (const auto& s : rp.sv_factors) inv.push_back(seqcore::reciprocal(s));
                Expr psi = inv.size() == 1 ? inv.front() : product(std::move(inv));
                f.detail = "Psi2/Psi1 at j = log2(k)/d: " + render(psi);
            }
        } else {
            f.residual = Residual::ratio;
            f.detail = "tau(k^(1/d))/sigma(k^(1/d))";
        }
        if (prob.scale == Scale::F) f.citations.push_back("b-f-sandwich");
        return f;
    }

    if (prob.scale == Scale::F || !closed) {
        f.detail = "limiting case outside the catalog";
        return f;
    }
    const Rational& a = *rp.rate;
    const Rational& b = *rp.log_exponent;

    if (prob.p1 == prob.p2 && a.is_zero()) {
        if (rp.sv_factors.empty()) {
            f.u = Rational(0);
            f.v = b - qstar.reciprocal();
            f.validity = Validity::limiting_catalog;
            f.citations = {"entropy-log-limiting"};
            return f;
        }
        std::vector<Expr> psi_parts;
        if (!b.is_zero()) psi_parts.push_back(log_power(b));
        for (const auto& s : rp.sv_factors) psi_parts.push_back(s);
        Expr psi = psi_parts.size() == 1 ? psi_parts.front() : product(std::move(psi_parts));
        f.validity = Validity::limiting_catalog;
        f.citations = {"entropy-cobos-kuehn-slowly-varying"};
        f.u = Rational(0);
        if (prob.q1 <= prob.q2) {
            f.v = b;
            f.residual = Residual::ratio;
            f.detail = "Psi(k^(1/d))^(-1), Psi at j = log2(t): " + render(psi);
        } else {
            f.residual = Residual::integral;
            f.detail = "(int_{k^(1/d)}^inf Psi(t)^(-q*) dt/t)^(1/q*), q* = " + qstar.str() +
                       ", Psi at j = log2(t): " + render(psi);
        }
        return f;
    }

    if (prob.p1 < prob.p2 && prob.q2 <= prob.q1 && rp.sv_factors.empty() && a == d * alpha &&
        b > qstar.reciprocal()) {
        const Rational threshold = qstar.reciprocal() + Rational(2) * alpha;
        f.validity = Validity::limiting_catalog;
        f.residual = Residual::edmunds_netrusov;
        f.citations = {"entropy-edmunds-netrusov"};
        if (b > threshold) {
            f.u = alpha;
            f.v = b - threshold;
            f.detail = "beta > 1/q* + 2 alpha";
        } else if (b == threshold) {
            f.u = alpha;
            f.v = -(alpha + qstar.reciprocal());
            f.detail = "beta = 1/q* + 2 alpha";
        } else {
            f.u = (b + qstar.reciprocal()) / Rational(2);
            f.v = Rational(0);
            f.detail = "beta < 1/q* + 2 alpha";
        }
        return f;
    }

    f.detail = asi == seqcore::Tri::no ? "lower Boyd index of the inverse criterion sequence is 0; no catalog entry"
                                       : "lower Boyd index of the inverse criterion sequence undecided";
    return f;
}

AValue en_A(long long k, const EmbeddingProblem& prob, int u_max_factor) {
    if (k < 1) throw AnalyzerError("en_A: k must be >= 1");
    if (u_max_factor < 1 || u_max_factor > 1000) throw AnalyzerError("en_A: u_max_factor out of range");
    const Rational alpha_r = prob.p1.reciprocal() - prob.p2.reciprocal();
    if (alpha_r.sign() <= 0) throw AnalyzerError("en_A: requires p1 < p2");
    if (prob.q2.reciprocal() - prob.q1.reciprocal() > -alpha_r) {
        throw AnalyzerError("en_A: requires 1/q2 - 1/q1 <= -(1/p1 - 1/p2)");
    }
    const double alpha = alpha_r.to_double();
    const double kd = static_cast<double>(k);
    const double d = prob.d;

    std::vector<double> lv(static_cast<std::size_t>(u_max_factor) + 1);
    for (int i = 0; i <= u_max_factor; ++i) {
        double lu = std::log2(kd) + i;  // log2 u
        double x = lu / d;
        double m = std::min(std::log1p(std::exp2(static_cast<double>(i))) / kd, 1.0);
        lv[static_cast<std::size_t>(i)] =
            log2_at(prob.tau, x) - log2_at(prob.sigma, x) + alpha * lu + alpha * std::log2(m);
    }
    auto it = std::max_element(lv.begin(), lv.end());
    auto imax = static_cast<int>(it - lv.begin());

    AValue out;
    out.value = std::exp2(*it);
    out.argmax = kd * std::exp2(static_cast<double>(imax));

    SequenceProfile p = canonicalize(strip_tables(product({prob.tau, inverse(prob.sigma)})));
    if (!p.opaque && !p.piecewise && p.rate) {
        Rational eventual = *p.rate / Rational(prob.d) + alpha_r;
        if (eventual.sign() > 0) {
            out.divergent = true;
        } else if (eventual.sign() < 0) {
            const std::size_t n = lv.size();
            bool tail_decreasing = n >= 4;
            for (std::size_t i = n - 3; tail_decreasing && i < n; ++i) tail_decreasing = lv[i] < lv[i - 1];
            out.certified = tail_decreasing && imax < u_max_factor;
        }
    }
    out.truncated = !out.certified;
    return out;
}

Classification classify(const EmbeddingProblem& prob) {
    Classification c;
    c.compact = compactness(prob);
    if (prob.banach()) {
        c.nuclear = nuclearity(prob);
        if (prob.scale == Scale::B && geometric_rate(prob.sigma) && geometric_rate(prob.tau)) {
            c.band = compact_not_nuclear_band(prob);
        }
    }
    if (c.compact.status == Status::holds) c.entropy = entropy_rate(prob);
    return c;
}

}  // namespace gsembed::embanalyzer
