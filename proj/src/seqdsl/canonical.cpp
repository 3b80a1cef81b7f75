#include "gsembed/seqdsl.hpp"

namespace gsembed::seqdsl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// Additive decomposition of log2 gamma, up to a bounded constant.
struct Decomposition {
    Rational rate;
    Rational log_exp;
    Rational iter_log_exp;
    // ExpLogPow coefficients keyed by their power (power -> summed coeff)
    std::vector<std::pair<Rational, Rational>> exp_log;
    std::optional<PiecewiseSlopes> piecewise;
    bool opaque = false;

    void scale(const Rational& r) {
        rate *= r;
        log_exp *= r;
        iter_log_exp *= r;
        for (auto& [k, a] : exp_log) a *= r;
        if (piecewise) {
            piecewise->even *= r;
            piecewise->odd *= r;
        }
    }

    void add(const Decomposition& o) {
        rate += o.rate;
        log_exp += o.log_exp;
        iter_log_exp += o.iter_log_exp;
        for (const auto& [k, a] : o.exp_log) add_exp_log(k, a);
        if (o.piecewise) {
            if (piecewise) {
                opaque = true;  // two oscillating factors have no closed form here
            } else {
                piecewise = o.piecewise;
            }
        }
        opaque = opaque || o.opaque;
    }

    void add_exp_log(const Rational& k, const Rational& a) {
        for (auto& [kk, aa] : exp_log) {
            if (kk == k) {
                aa += a;
                return;
            }
        }
        exp_log.emplace_back(k, a);
    }
};

Decomposition decompose(const Expr& e) {
    return std::visit(overloaded{
                          [](const Geometric& n) {
                              Decomposition d;
                              d.rate = n.rate;
                              return d;
                          },
                          [](const LogPower& n) {
                              Decomposition d;
                              d.log_exp = n.exponent;
                              return d;
                          },
                          [](const IterLog& n) {
                              Decomposition d;
                              d.iter_log_exp = n.exponent;
                              return d;
                          },
                          [](const ExpLogPow& n) {
                              Decomposition d;
                              d.exp_log.emplace_back(n.power, n.coeff);
                              return d;
                          },
                          [](const PiecewiseGeometric& n) {
                              Decomposition d;
                              d.piecewise = PiecewiseSlopes{n.s0, n.s1};
                              return d;
                          },
                          [](const Table&) {
                              Decomposition d;
                              d.opaque = true;
                              return d;
                          },
                          [](const Product& n) {
                              Decomposition d;
                              for (const auto& c : n.children) d.add(decompose(c));
                              return d;
                          },
                          [](const Power& n) {
                              Decomposition d = decompose(n.child);
                              d.scale(n.exponent);
                              return d;
                          },
                          [](const Const&) { return Decomposition{}; },
                      },
                      e.node().v);
}

}  // namespace

SequenceProfile canonicalize(const Expr& e) {
    Decomposition d = decompose(e);
    SequenceProfile p;
    if (d.opaque) {
        p.opaque = true;
        p.upper = BoydIndex::unknown();
        p.lower = BoydIndex::unknown();
        return p;
    }

    if (!d.iter_log_exp.is_zero()) p.sv_factors.push_back(iter_log(d.iter_log_exp));
    for (const auto& [k, a] : d.exp_log) {
        if (!a.is_zero()) p.sv_factors.push_back(exp_log_pow(a, k));
    }
    p.log_exponent = d.log_exp;

    if (d.piecewise) {
        // The geometric part shifts both slopes; log-type factors leave Boyd
        // indices unchanged.
        Rational even = d.piecewise->even + d.rate;
        Rational odd = d.piecewise->odd + d.rate;
        p.piecewise = PiecewiseSlopes{even, odd};
        p.upper = BoydIndex::of(max(even, odd));
        p.lower = BoydIndex::of(min(even, odd));
        return p;
    }

    p.rate = d.rate;
    p.upper = BoydIndex::of(d.rate);
    p.lower = BoydIndex::of(d.rate);
    p.canonical = p.sv_factors.size() <= 1;
    return p;
}

}  // namespace gsembed::seqdsl
