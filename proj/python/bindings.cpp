#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gsembed/cli.hpp"
#include "gsembed/report.hpp"
#include "gsembed/seqcore.hpp"
#include "gsembed/seqspacelab.hpp"

namespace py = pybind11;
using nlohmann::json;
using namespace gsembed;
namespace ea = gsembed::embanalyzer;
namespace lab = gsembed::seqspacelab;

namespace {

// Structured results cross the boundary as JSON text; the Python package decodes them.
std::string dump(const json& j) { return j.dump(); }

seqdsl::Expr expr(const std::string& text) { return report::expr_from_json(json(text)); }

ea::EmbeddingProblem problem(const std::string& problem_json) {
    return report::problem_from_json(json::parse(problem_json));
}

lab::FiniteSection section(const std::string& section_json) { return lab::section_from_json(json::parse(section_json)); }

std::string analyze(const std::string& problem_json, const std::string& kind) {
    auto prob = problem(problem_json);
    if (kind == "compact") return dump(report::verdict_report(prob, ea::compactness(prob)));
    if (kind == "nuclear") return dump(report::verdict_report(prob, ea::nuclearity(prob)));
    if (kind == "entropy") {
        auto v = ea::compactness(prob);
        std::optional<ea::RateFormula> rate;
        if (v.status == ea::Status::holds) rate = ea::entropy_rate(prob);
        return dump(report::verdict_report(prob, v, rate));
    }
    if (kind == "classify") return dump(report::classification_report(prob, ea::classify(prob)));
    throw std::invalid_argument("kind must be compact, nuclear, entropy or classify");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "gsembed native core";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const std::runtime_error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def("render", [](const std::string& text) { return seqdsl::render(expr(text)); });
    m.def("eval", [](const std::string& text, std::int64_t j) {
        auto r = seqdsl::eval(expr(text), j);
        std::optional<double> value;
        if (r.scale == seqdsl::Scale::finite) value = r.value;
        return py::make_tuple(value, r.log2);
    });
    m.def("boyd", [](const std::string& text, int K) { return dump(report::to_json(seqcore::boyd_indices(expr(text), K))); },
          py::arg("expr"), py::arg("K") = 256);
    m.def(
        "admissible",
        [](const std::string& text, int window) {
            return dump(report::to_json(seqcore::certify_admissible(expr(text), window)));
        },
        py::arg("expr"), py::arg("window") = 64);
    m.def(
        "equivalent",
        [](const std::string& a, const std::string& b, int window) {
            return dump(report::to_json(seqcore::equivalent(expr(a), expr(b), window)));
        },
        py::arg("a"), py::arg("b"), py::arg("window") = 64);
    m.def(
        "standardize",
        [](const std::string& sigma, const std::string& N, std::optional<int> kappa0, std::size_t prefix) {
            auto r = seqcore::standardize({expr(sigma), expr(N), kappa0}, prefix);
            return dump({{"beta", seqdsl::render(r.beta)},
                         {"kappa0", r.kappa0},
                         {"lambda0", r.lambda0},
                         {"mu0", r.mu0},
                         {"mu1", r.mu1},
                         {"k_of_j", r.k_of_j}});
        },
        py::arg("sigma"), py::arg("N"), py::arg("kappa0") = py::none(), py::arg("prefix") = 64);

    m.def("tong", [](const std::string& r1, const std::string& r2) {
        return ea::tong(Exponent::parse(r1), Exponent::parse(r2)).str();
    });
    m.def("dual_star", [](const std::string& r1, const std::string& r2) {
        return ea::dual_star(Exponent::parse(r1), Exponent::parse(r2)).str();
    });
    m.def("analyze", &analyze, py::arg("problem"), py::arg("kind") = "classify");

    m.def(
        "section_from_problem",
        [](const std::string& problem_json, int L, double c) {
            return dump(lab::to_json(lab::finite_section(problem(problem_json), L, c)));
        },
        py::arg("problem"), py::arg("L"), py::arg("c") = 1.0);
    m.def(
        "lab_norm",
        [](const std::string& s, int iters, std::uint64_t seed) {
            auto sec = section(s);
            return dump({{"closed", lab::embedding_norm_closed(sec)},
                         {"search", lab::embedding_norm_search(sec, iters, seed)},
                         {"seed", lab::resolve_seed(seed)}});
        },
        py::arg("section"), py::arg("iters") = 200, py::arg("seed") = 1);
    m.def("lab_nuclear", [](const std::string& s) {
        auto sec = section(s);
        return dump({{"operator_norm", lab::embedding_norm_closed(sec)},
                     {"tong", lab::nuclear_norm_tong(sec)},
                     {"oracle", lab::to_json(lab::nuclear_norm_oracle(sec))}});
    });
    m.def("lab_entropy", [](const std::string& s, const std::vector<int>& ks) {
        auto sec = section(s);
        json bounds = json::array();
        for (int k : ks) bounds.push_back(lab::to_json(lab::entropy_bounds(sec, k)));
        return dump({{"bounds", bounds}, {"properties", lab::to_json(lab::entropy_properties(sec, ks))}});
    });

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"gsembed"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out, err;
        int code = cli::run(argv, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
