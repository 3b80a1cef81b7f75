#pragma once

// Reproduction corpus: worked examples bound to runnable problems.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsembed/embanalyzer.hpp"

namespace gsembed::repro {

struct ExpectedRate {
    std::optional<std::string> u;
    std::optional<std::string> v;
    std::string residual;
    std::string validity;
};

struct ReproCase {
    std::string id;
    embanalyzer::EmbeddingProblem problem;
    /// compact | nuclear | entropy
    std::string kind;
    std::string expected_status;
    std::optional<ExpectedRate> expected_rate;
    std::string citation;
    /// literature | derived | trivial
    std::string provenance;
    std::string note;
};

std::vector<ReproCase> parse_corpus(const nlohmann::json& j);
std::vector<ReproCase> load_corpus(const std::string& path);

struct ReproResult {
    std::string id;
    bool passed = false;
    bool inconclusive = false;
    std::string message;
    nlohmann::json report;
};

ReproResult run_case(const ReproCase& c);

nlohmann::json to_json(const ReproResult& r);

}  // namespace gsembed::repro
