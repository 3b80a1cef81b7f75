#include "gsembed/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsembed/embanalyzer.hpp"
#include "gsembed/repro.hpp"
#include "gsembed/report.hpp"
#include "gsembed/seqcore.hpp"
#include "gsembed/seqspacelab.hpp"

#ifndef GSEMBED_DEFAULT_CORPUS
#define GSEMBED_DEFAULT_CORPUS "data/corpus.json"
#endif

namespace gsembed::cli {

using nlohmann::json;
namespace ea = embanalyzer;
namespace lab = seqspacelab;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

seqdsl::Expr read_expr(const std::string& text) {
    auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && text[first] == '{') return report::expr_from_json(json::parse(text));
    return seqdsl::parse(text);
}

json read_json_arg(const std::string& text) {
    auto first = text.find_first_not_of(" \t\n");
    if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return json::parse(text);
    std::ifstream in(text);
    if (!in) throw UsageError("cannot open " + text);
    json j;
    in >> j;
    return j;
}

json profile_json(const seqdsl::SequenceProfile& p) {
    json j = {{"canonical", p.canonical}, {"opaque", p.opaque}};
    j["rate"] = p.rate ? json(p.rate->str()) : json(nullptr);
    j["log_exponent"] = p.log_exponent ? json(p.log_exponent->str()) : json(nullptr);
    json sv = json::array();
    for (const auto& f : p.sv_factors) sv.push_back(seqdsl::render(f));
    j["sv_factors"] = sv;
    j["piecewise"] = p.piecewise ? json{{"even", p.piecewise->even.str()}, {"odd", p.piecewise->odd.str()}} : json(nullptr);
    j["upper"] = report::to_json(p.upper);
    j["lower"] = report::to_json(p.lower);
    return j;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    if (out.empty()) throw UsageError("expected a comma-separated integer list");
    return out;
}

struct ProblemFlags {
    std::string scale = "B";
    std::string sigma;
    std::string tau;
    std::string p1, q1, p2, q2;
    int dim = 0;
};

ea::EmbeddingProblem make_problem(const ProblemFlags& f) {
    ea::EmbeddingProblem p;
    p.sigma = read_expr(f.sigma);
    p.tau = read_expr(f.tau);
    p.p1 = Exponent::parse(f.p1);
    p.q1 = Exponent::parse(f.q1);
    p.p2 = Exponent::parse(f.p2);
    p.q2 = Exponent::parse(f.q2);
    p.d = f.dim;
    if (f.scale == "B") {
        p.scale = ea::Scale::B;
    } else if (f.scale == "F") {
        p.scale = ea::Scale::F;
    } else {
        throw UsageError("--scale must be B or F");
    }
    return p;
}

struct SectionFlags {
    std::string section;
    std::string from_problem;
    int L = 3;
    double c = 1.0;
};

lab::FiniteSection make_section(const SectionFlags& f) {
    if (!f.section.empty() == !f.from_problem.empty()) {
        throw UsageError("give exactly one of --section or --from-problem");
    }
    if (!f.section.empty()) return lab::section_from_json(read_json_arg(f.section));
    return lab::finite_section(report::problem_from_json(read_json_arg(f.from_problem)), f.L, f.c);
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Embeddings of function spaces of generalised smoothness: compactness, nuclearity, entropy numbers"};
    app.name(args.empty() ? "gsembed" : args.front());
    app.require_subcommand(1);

    int code = kOk;
    std::function<void()> action;

    // seq -------------------------------------------------------------------
    auto* seq = app.add_subcommand("seq", "Sequence DSL and sequence tools");
    seq->require_subcommand(1);
    std::string expr_text;
    std::string expr_text2;

    auto* s_parse = seq->add_subcommand("parse", "Parse and canonicalize an expression");
    s_parse->add_option("expr", expr_text, "DSL expression or table JSON")->required();
    s_parse->callback([&] {
        action = [&] {
            auto e = read_expr(expr_text);
            emit(out, {{"input", expr_text},
                       {"render", seqdsl::render(e)},
                       {"depth", seqdsl::depth(e)},
                       {"profile", profile_json(seqdsl::canonicalize(e))}});
        };
    });

    std::int64_t j_from = 0;
    std::int64_t j_count = 8;
    auto* s_eval = seq->add_subcommand("eval", "Evaluate gamma_j");
    s_eval->add_option("expr", expr_text, "DSL expression")->required();
    s_eval->add_option("--from", j_from, "first index")->check(CLI::NonNegativeNumber);
    s_eval->add_option("--count", j_count, "number of terms")->check(CLI::Range(1, 100000));
    s_eval->callback([&] {
        action = [&] {
            auto e = read_expr(expr_text);
            json values = json::array();
            for (std::int64_t j = j_from; j < j_from + j_count; ++j) {
                auto r = seqdsl::eval(e, j);
                const char* scale = r.scale == seqdsl::Scale::finite ? "finite"
                                    : r.scale == seqdsl::Scale::overflow ? "overflow"
                                                                          : "underflow";
                json v = {{"j", j}, {"log2", r.log2}, {"scale", scale}};
                v["value"] = r.scale == seqdsl::Scale::finite ? json(r.value) : json(nullptr);
                values.push_back(v);
            }
            emit(out, {{"render", seqdsl::render(e)}, {"values", values}});
        };
    });

    int boyd_k = 256;
    auto* s_boyd = seq->add_subcommand("boyd", "Lower and upper Boyd indices");
    s_boyd->add_option("expr", expr_text, "DSL expression")->required();
    s_boyd->add_option("--K", boyd_k, "truncation for numeric bracketing")->check(CLI::Range(64, 1 << 16));
    s_boyd->callback([&] {
        action = [&] {
            auto e = read_expr(expr_text);
            json j = report::to_json(seqcore::boyd_indices(e, boyd_k));
            j["render"] = seqdsl::render(e);
            j["almost_strongly_increasing"] = seqcore::to_string(seqcore::is_almost_strongly_increasing(e));
            emit(out, j);
        };
    });

    int window = 64;
    auto* s_adm = seq->add_subcommand("admissible", "Certify d0 <= gamma_{j+1}/gamma_j <= d1");
    s_adm->add_option("expr", expr_text, "DSL expression")->required();
    s_adm->add_option("--window", window, "window length J")->check(CLI::Range(8, 1 << 20));
    s_adm->callback([&] {
        action = [&] {
            auto e = read_expr(expr_text);
            json j = report::to_json(seqcore::certify_admissible(e, window));
            j["render"] = seqdsl::render(e);
            emit(out, j);
        };
    });

    auto* s_eq = seq->add_subcommand("equivalent", "Decide gamma ~ gamma'");
    s_eq->add_option("expr", expr_text, "first expression")->required();
    s_eq->add_option("other", expr_text2, "second expression")->required();
    s_eq->add_option("--window", window, "window length J")->check(CLI::Range(8, 1 << 20));
    s_eq->callback([&] {
        action = [&] {
            auto r = seqcore::equivalent(read_expr(expr_text), read_expr(expr_text2), window);
            emit(out, report::to_json(r));
            if (r.verdict == seqcore::Tri::undecided) code = kInconclusive;
        };
    });

    std::string n_text;
    std::optional<int> kappa0;
    std::size_t prefix = 64;
    auto* s_std = seq->add_subcommand("standardize", "beta_j = sigma_{k(j)} for a frequency sequence N");
    s_std->add_option("--sigma", expr_text, "smoothness sequence")->required();
    s_std->add_option("--N", n_text, "strongly increasing frequency sequence")->required();
    s_std->add_option("--kappa0", kappa0, "override kappa0");
    s_std->add_option("--prefix", prefix, "tabulated prefix length")->check(CLI::Range(1, 4096));
    s_std->callback([&] {
        action = [&] {
            seqcore::StandardizationInput in{read_expr(expr_text), read_expr(n_text), kappa0};
            auto r = seqcore::standardize(in, prefix);
            emit(out, {{"beta", seqdsl::render(r.beta)},
                       {"kappa0", r.kappa0},
                       {"lambda0", r.lambda0},
                       {"mu0", r.mu0},
                       {"mu1", r.mu1},
                       {"k_of_j", r.k_of_j}});
        };
    });

    std::optional<double> en_L;
    std::optional<double> en_c;
    auto* s_en = seq->add_subcommand("omega", "sigma_j = 1/omega(2^-j) from an Edmunds-Netrusov function (j = log2(1/t))");
    s_en->add_option("omega", expr_text, "omega as a function of j = log2(1/t)")->required();
    s_en->add_option("--L", en_L, "exponent L");
    s_en->add_option("--c", en_c, "constant c");
    s_en->add_option("--window", window, "window length")->check(CLI::Range(8, 4096));
    s_en->callback([&] {
        action = [&] {
            auto r = seqcore::from_edmunds_netrusov(read_expr(expr_text), en_L, en_c, window);
            emit(out, {{"sigma", seqdsl::render(r.sigma)},
                       {"L", r.L},
                       {"c", r.c},
                       {"certificate", report::to_json(r.certificate)}});
        };
    });

    // analyze ---------------------------------------------------------------
    ProblemFlags pf;
    std::string kind = "classify";
    auto* an = app.add_subcommand("analyze", "Compactness, nuclearity and entropy rate of an embedding");
    an->add_option("--scale", pf.scale, "B or F")->check(CLI::IsMember({"B", "F"}));
    an->add_option("--sigma", pf.sigma, "source smoothness sequence")->required();
    an->add_option("--tau", pf.tau, "target smoothness sequence")->required();
    an->add_option("--p1", pf.p1, "source integrability")->required();
    an->add_option("--q1", pf.q1, "source fine index")->required();
    an->add_option("--p2", pf.p2, "target integrability")->required();
    an->add_option("--q2", pf.q2, "target fine index")->required();
    an->add_option("--dim", pf.dim, "dimension d")->required()->check(CLI::PositiveNumber);
    an->add_option("--kind", kind, "compact|nuclear|entropy|classify")
        ->check(CLI::IsMember({"compact", "nuclear", "entropy", "classify"}));
    an->callback([&] {
        action = [&] {
            auto prob = make_problem(pf);
            if (kind == "compact" || kind == "nuclear") {
                auto v = kind == "compact" ? ea::compactness(prob) : ea::nuclearity(prob);
                emit(out, report::verdict_report(prob, v));
                if (v.status == ea::Status::inconclusive) code = kInconclusive;
            } else if (kind == "entropy") {
                auto v = ea::compactness(prob);
                std::optional<ea::RateFormula> rate;
                if (v.status == ea::Status::holds) rate = ea::entropy_rate(prob);
                emit(out, report::verdict_report(prob, v, rate));
                if (v.status == ea::Status::fails) throw ea::AnalyzerError("entropy: the embedding is not compact");
                if (v.status == ea::Status::inconclusive || rate->validity == ea::Validity::inconclusive) {
                    code = kInconclusive;
                }
            } else {
                auto c = ea::classify(prob);
                emit(out, report::classification_report(prob, c));
                bool undecided = c.compact.status == ea::Status::inconclusive ||
                                 (c.nuclear && c.nuclear->status == ea::Status::inconclusive) ||
                                 (c.entropy && c.entropy->validity == ea::Validity::inconclusive);
                if (undecided) code = kInconclusive;
            }
        };
    });

    // lab -------------------------------------------------------------------
    auto* lb = app.add_subcommand("lab", "Finite sections of the sequence-space embedding");
    lb->require_subcommand(1);
    SectionFlags sf;
    auto add_section_flags = [&](CLI::App* c) {
        c->add_option("--section", sf.section, "section JSON (inline or file)");
        c->add_option("--from-problem", sf.from_problem, "analyzer problem JSON (inline or file)");
        c->add_option("--L", sf.L, "top level for --from-problem")->check(CLI::NonNegativeNumber);
        c->add_option("--c", sf.c, "cube volume for --from-problem");
    };
    int iters = 200;
    std::uint64_t seed = 1;
    auto* l_norm = lb->add_subcommand("norm", "Operator norm: closed form and search oracle");
    add_section_flags(l_norm);
    l_norm->add_option("--iters", iters, "search passes")->check(CLI::PositiveNumber);
    l_norm->add_option("--seed", seed, "search seed (GSEMBED_SEED overrides)");
    l_norm->callback([&] {
        action = [&] {
            auto s = make_section(sf);
            json j = {{"section", lab::to_json(s)}, {"closed", lab::embedding_norm_closed(s)}};
            if (s.dimension() <= 4096) {
                j["search"] = lab::embedding_norm_search(s, iters, seed);
                j["seed"] = lab::resolve_seed(seed);
            } else {
                j["search"] = nullptr;
            }
            emit(out, j);
        };
    });

    auto* l_nuc = lb->add_subcommand("nuclear", "Nuclear norm: Tong formula and oracle");
    add_section_flags(l_nuc);
    l_nuc->callback([&] {
        action = [&] {
            auto s = make_section(sf);
            emit(out, {{"section", lab::to_json(s)},
                       {"tong", lab::nuclear_norm_tong(s)},
                       {"oracle", lab::to_json(lab::nuclear_norm_oracle(s))},
                       {"operator_norm", lab::embedding_norm_closed(s)}});
        };
    });

    std::string ks_text = "1,2,3,4";
    auto* l_ent = lb->add_subcommand("entropy", "Entropy-number bounds and property checks");
    add_section_flags(l_ent);
    l_ent->add_option("--k", ks_text, "comma-separated k values");
    l_ent->callback([&] {
        action = [&] {
            auto s = make_section(sf);
            auto ks = parse_int_list(ks_text);
            json bounds = json::array();
            for (int k : ks) bounds.push_back(lab::to_json(lab::entropy_bounds(s, k)));
            auto props = lab::entropy_properties(s, ks);
            emit(out, {{"section", lab::to_json(s)}, {"bounds", bounds}, {"properties", lab::to_json(props)}});
            if (!props.ok()) throw lab::LabError("entropy property violation");
        };
    });

    std::string levels_text = "1,2,3,4";
    auto* l_rate = lb->add_subcommand("ratefit", "Slope of entropy bounds against block size");
    l_rate->add_option("--from-problem", sf.from_problem, "analyzer problem JSON (inline or file)")->required();
    l_rate->add_option("--levels", levels_text, "comma-separated top levels");
    l_rate->add_option("--c", sf.c, "cube volume");
    l_rate->callback([&] {
        action = [&] {
            auto prob = report::problem_from_json(read_json_arg(sf.from_problem));
            auto fit = lab::rate_fit(prob, parse_int_list(levels_text), sf.c);
            json j = lab::to_json(fit);
            j["problem"] = report::to_json(prob);
            j["slope_ratio"] = fit.predicted_slope != 0.0 ? json(fit.slope / fit.predicted_slope) : json(nullptr);
            emit(out, j);
        };
    });

    // reproduce ---------------------------------------------------------------
    std::string case_id;
    std::string corpus = GSEMBED_DEFAULT_CORPUS;
    auto* rep = app.add_subcommand("reproduce", "Run reproduction corpus cases");
    rep->add_option("id", case_id, "case id or 'all'")->required();
    rep->add_option("--corpus", corpus, "corpus JSON file");
    rep->callback([&] {
        action = [&] {
            auto cases = repro::load_corpus(corpus);
            json results = json::array();
            int passed = 0;
            int failed = 0;
            int inconclusive = 0;
            bool found = false;
            for (const auto& c : cases) {
                if (case_id != "all" && c.id != case_id) continue;
                found = true;
                auto r = repro::run_case(c);
                json j = repro::to_json(r);
                j["provenance"] = c.provenance;
                j["citation"] = c.citation;
                results.push_back(j);
                if (r.passed) {
                    ++passed;
                } else {
                    ++failed;
                }
                if (r.inconclusive) ++inconclusive;
            }
            if (!found) throw UsageError("no corpus case with id '" + case_id + "'");
            emit(out, {{"results", results}, {"passed", passed}, {"failed", failed}, {"inconclusive", inconclusive}});
            if (failed > 0) {
                code = kError;
            } else if (inconclusive > 0) {
                code = kInconclusive;
            }
        };
    });

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    if (argv.empty()) argv.push_back("gsembed");
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kError;
    }

    try {
        if (action) action();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    return code;
}

}  // namespace gsembed::cli
