#pragma once

// JSON schemas shared by the CLI, the corpus runner and the Python module.

#include <optional>

#include <json.hpp>

#include "gsembed/embanalyzer.hpp"
#include "gsembed/seqcore.hpp"

namespace gsembed::report {

using nlohmann::json;

/// A DSL string, or a table object {"prefix": [...], "then": "<DSL>"}.
seqdsl::Expr expr_from_json(const json& j);

json to_json(const embanalyzer::EmbeddingProblem& prob);
/// Keys sigma, tau, p1, q1, p2, q2 (strings or numbers), d, optional scale.
embanalyzer::EmbeddingProblem problem_from_json(const json& j);

json to_json(const embanalyzer::RateFormula& f);
json to_json(const embanalyzer::Band& b);

/// {problem, criterion_sequence, target, status, evidence, rate, citations}
json verdict_report(const embanalyzer::EmbeddingProblem& prob, const embanalyzer::Verdict& v,
                    const std::optional<embanalyzer::RateFormula>& rate = std::nullopt);
json classification_report(const embanalyzer::EmbeddingProblem& prob, const embanalyzer::Classification& c);

json to_json(const seqdsl::BoydIndex& b);
json to_json(const seqcore::AdmissibilityCertificate& c);
json to_json(const seqcore::BoydBracket& b);
json to_json(const seqcore::EquivalenceResult& r);

}  // namespace gsembed::report
