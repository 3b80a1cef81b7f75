#include "gsembed/repro.hpp"

#include <fstream>
#include <set>

#include "gsembed/report.hpp"

namespace gsembed::repro {

using nlohmann::json;
using namespace embanalyzer;

std::vector<ReproCase> parse_corpus(const json& j) {
    if (!j.is_array()) throw AnalyzerError("corpus: expected a JSON list of cases");
    static const std::set<std::string> kinds{"compact", "nuclear", "entropy"};
    static const std::set<std::string> provenances{"literature", "derived", "trivial"};
    std::vector<ReproCase> out;
    std::set<std::string> seen;
    for (const auto& c : j) {
        ReproCase rc;
        rc.id = c.at("id").get<std::string>();
        if (!seen.insert(rc.id).second) throw AnalyzerError("corpus: duplicate id '" + rc.id + "'");
        try {
            rc.problem = report::problem_from_json(c.at("problem"));
        } catch (const std::exception& err) {
            throw AnalyzerError("corpus case '" + rc.id + "': " + err.what());
        }
        const json& e = c.at("expected");
        rc.kind = e.at("kind").get<std::string>();
        if (!kinds.count(rc.kind)) throw AnalyzerError("corpus case '" + rc.id + "': unknown kind " + rc.kind);
        rc.expected_status = e.value("status", "holds");
        if (e.contains("rate")) {
            const json& r = e.at("rate");
            ExpectedRate er;
            if (r.contains("u") && !r.at("u").is_null()) er.u = r.at("u").get<std::string>();
            if (r.contains("v") && !r.at("v").is_null()) er.v = r.at("v").get<std::string>();
            er.residual = r.value("residual", "none");
            er.validity = r.at("validity").get<std::string>();
            rc.expected_rate = er;
        }
        rc.provenance = c.at("provenance").get<std::string>();
        if (!provenances.count(rc.provenance)) {
            throw AnalyzerError("corpus case '" + rc.id + "': provenance must be literature, derived or trivial");
        }
        rc.citation = c.value("citation", "");
        rc.note = c.value("note", "");
        out.push_back(std::move(rc));
    }
    return out;
}

std::vector<ReproCase> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw AnalyzerError("cannot open corpus file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& err) {
        throw AnalyzerError("corpus " + path + ": " + err.what());
    }
    return parse_corpus(j);
}

ReproResult run_case(const ReproCase& c) {
    ReproResult r;
    r.id = c.id;
    try {
        std::optional<RateFormula> rate;
        Verdict v = c.kind == "nuclear" ? nuclearity(c.problem) : compactness(c.problem);
        if (c.kind == "entropy" && v.status == Status::holds) rate = entropy_rate(c.problem);
        r.report = report::verdict_report(c.problem, v, rate);
        r.inconclusive = v.status == Status::inconclusive ||
                         (rate && rate->validity == Validity::inconclusive && c.expected_rate &&
                          c.expected_rate->validity != "inconclusive");

        std::vector<std::string> problems;
        if (to_string(v.status) != c.expected_status) {
            problems.push_back("status " + to_string(v.status) + ", expected " + c.expected_status);
        }
        if (c.expected_rate) {
            if (!rate) {
                problems.push_back("no rate computed");
            } else {
                const ExpectedRate& e = *c.expected_rate;
                auto str = [](const std::optional<Rational>& x) {
                    return x ? std::optional<std::string>(x->str()) : std::nullopt;
                };
                auto norm = [](const std::optional<std::string>& s) {
                    return s ? std::optional<std::string>(Rational::parse(*s).str()) : std::nullopt;
                };
                if (str(rate->u) != norm(e.u)) problems.push_back("rate u mismatch");
                if (str(rate->v) != norm(e.v)) problems.push_back("rate v mismatch");
                if (to_string(rate->residual) != e.residual) problems.push_back("rate residual mismatch");
                if (to_string(rate->validity) != e.validity) problems.push_back("rate validity mismatch");
            }
        }
        r.passed = problems.empty();
        for (const auto& p : problems) r.message += (r.message.empty() ? "" : "; ") + p;
    } catch (const std::exception& err) {
        r.passed = false;
        r.message = err.what();
    }
    return r;
}

json to_json(const ReproResult& r) {
    return {{"id", r.id}, {"passed", r.passed}, {"inconclusive", r.inconclusive}, {"message", r.message},
            {"report", r.report}};
}

}  // namespace gsembed::repro
