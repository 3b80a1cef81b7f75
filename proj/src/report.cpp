#include "gsembed/report.hpp"

#include <cmath>

namespace gsembed::report {

using namespace embanalyzer;

namespace {

Exponent exponent_from_json(const json& j, const char* key) {
    if (!j.contains(key)) throw AnalyzerError(std::string("problem: missing '") + key + "'");
    const json& v = j.at(key);
    if (v.is_string()) return Exponent::parse(v.get<std::string>());
    if (v.is_number_integer()) return Exponent::finite(Rational(v.get<std::int64_t>()));
    if (v.is_number()) {
        double x = v.get<double>();
        if (std::isinf(x)) return Exponent::infinity();
        return Exponent::parse(json(x).dump());
    }
    throw AnalyzerError(std::string("problem: '") + key + "' must be a number or string");
}

json rational_or_null(const std::optional<Rational>& r) { return r ? json(r->str()) : json(nullptr); }

}  // namespace

seqdsl::Expr expr_from_json(const json& j) {
    if (j.is_string()) return seqdsl::parse(j.get<std::string>());
    if (j.is_number()) {
        double v = j.get<double>();
        if (!(v > 0.0) || !std::isfinite(v)) throw AnalyzerError("constant sequence must be positive and finite");
        return seqdsl::constant(v);
    }
    if (j.is_object() && j.contains("prefix") && j.contains("then")) {
        auto prefix = j.at("prefix").get<std::vector<double>>();
        for (double v : prefix) {
            if (!(v > 0.0) || !std::isfinite(v)) throw AnalyzerError("table entries must be positive and finite");
        }
        return seqdsl::table(std::move(prefix), expr_from_json(j.at("then")));
    }
    throw AnalyzerError("sequence must be a DSL string or {\"prefix\": [...], \"then\": ...}");
}

json to_json(const EmbeddingProblem& prob) {
    return {
        {"sigma", seqdsl::render(prob.sigma)},
        {"tau", seqdsl::render(prob.tau)},
        {"p1", prob.p1.str()},
        {"q1", prob.q1.str()},
        {"p2", prob.p2.str()},
        {"q2", prob.q2.str()},
        {"d", prob.d},
        {"scale", prob.scale == Scale::B ? "B" : "F"},
    };
}

EmbeddingProblem problem_from_json(const json& j) {
    if (!j.is_object()) throw AnalyzerError("problem must be a JSON object");
    EmbeddingProblem p;
    if (!j.contains("sigma") || !j.contains("tau")) throw AnalyzerError("problem: sigma and tau are required");
    p.sigma = expr_from_json(j.at("sigma"));
    p.tau = expr_from_json(j.at("tau"));
    p.p1 = exponent_from_json(j, "p1");
    p.q1 = exponent_from_json(j, "q1");
    p.p2 = exponent_from_json(j, "p2");
    p.q2 = exponent_from_json(j, "q2");
    if (!j.contains("d")) throw AnalyzerError("problem: missing 'd'");
    p.d = j.at("d").get<int>();
    std::string scale = j.value("scale", "B");
    if (scale == "B") {
        p.scale = Scale::B;
    } else if (scale == "F") {
        p.scale = Scale::F;
    } else {
        throw AnalyzerError("problem: scale must be B or F");
    }
    return p;
}

json to_json(const RateFormula& f) {
    return {
        {"u", rational_or_null(f.u)},
        {"v", rational_or_null(f.v)},
        {"residual", to_string(f.residual)},
        {"validity", to_string(f.validity)},
        {"detail", f.detail},
        {"formula", f.str()},
    };
}

json to_json(const Band& b) {
    json j = {{"lo", b.lo.str()}, {"hi", b.hi.str()}, {"empty", b.empty}};
    if (b.delta) {
        j["delta"] = b.delta->str();
        j["delta_in_band"] = b.contains(*b.delta);
    }
    return j;
}

json verdict_report(const EmbeddingProblem& prob, const Verdict& v, const std::optional<RateFormula>& rate) {
    json cites = v.citations;
    if (rate) {
        for (const auto& c : rate->citations) cites.push_back(c);
    }
    return {
        {"problem", to_json(prob)},
        {"criterion_sequence", v.tested_sequence.empty() ? json(nullptr) : json(seqdsl::render(v.tested_sequence))},
        {"target", v.target.str()},
        {"status", to_string(v.status)},
        {"evidence", v.evidence},
        {"rate", rate ? to_json(*rate) : json(nullptr)},
        {"citations", cites},
    };
}

json classification_report(const EmbeddingProblem& prob, const Classification& c) {
    json j = verdict_report(prob, c.compact, c.entropy);
    j["nuclear"] = c.nuclear ? verdict_report(prob, *c.nuclear) : json(nullptr);
    if (j["nuclear"].is_object()) j["nuclear"].erase("problem");
    j["band"] = c.band ? to_json(*c.band) : json(nullptr);
    return j;
}

json to_json(const seqdsl::BoydIndex& b) {
    json j = {{"lo", b.lo}, {"hi", b.hi}};
    j["exact"] = b.exact ? json(b.exact->str()) : json(nullptr);
    return j;
}

json to_json(const seqcore::AdmissibilityCertificate& c) {
    return {{"d0", c.d0}, {"d1", c.d1}, {"window", c.window}, {"exact", c.exact}};
}

json to_json(const seqcore::BoydBracket& b) {
    return {{"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}, {"numeric", b.numeric}};
}

json to_json(const seqcore::EquivalenceResult& r) {
    json j = {{"verdict", seqcore::to_string(r.verdict)}, {"exact", r.exact}, {"reason", r.reason}};
    if (r.verdict == seqcore::Tri::yes) {
        j["c_lo"] = r.c_lo;
        j["c_hi"] = r.c_hi;
    }
    j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
    return j;
}

}  // namespace gsembed::report
