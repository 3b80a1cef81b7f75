#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gsembed/cli.hpp"

using nlohmann::json;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "gsembed");
    std::ostringstream out, err;
    CliRun r;
    r.code = gsembed::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

json load(const std::string& rel) {
    std::ifstream in(std::string(GSEMBED_TEST_DATA) + "/" + rel);
    REQUIRE_MESSAGE(in.good(), "missing test data " << rel);
    return json::parse(in);
}

bool type_ok(const std::string& t, const json& v) {
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer();
    if (t == "boolean") return v.is_boolean();
    if (t == "array") return v.is_array();
    if (t == "object") return v.is_object();
    if (t == "null") return v.is_null();
    return false;
}

// Shapes: "type|type", "@ref", or a nested object of required keys.
// The key "@" merges a named shape into the current object.
void validate(const json& shape, const json& v, const json& types, const std::string& path,
              std::vector<std::string>& errs) {
    if (shape.is_string()) {
        std::string alts = shape.get<std::string>();
        std::vector<std::string> opts;
        std::size_t pos = 0;
        while (true) {
            auto bar = alts.find('|', pos);
            opts.push_back(alts.substr(pos, bar - pos));
            if (bar == std::string::npos) break;
            pos = bar + 1;
        }
        std::vector<std::string> sub_errs;
        for (const auto& o : opts) {
            if (o.front() == '@') {
                std::vector<std::string> e;
                validate(types.at(o.substr(1)), v, types, path, e);
                if (e.empty()) return;
                sub_errs.insert(sub_errs.end(), e.begin(), e.end());
            } else if (type_ok(o, v)) {
                return;
            }
        }
        errs.push_back(path + ": expected " + alts + ", got " + v.dump().substr(0, 60));
        for (auto& e : sub_errs) errs.push_back("  " + e);
        return;
    }
    if (!v.is_object()) {
        errs.push_back(path + ": expected object");
        return;
    }
    for (const auto& [key, sub] : shape.items()) {
        if (key == "@") {
            validate(types.at(sub.get<std::string>().substr(1)), v, types, path, errs);
            continue;
        }
        if (!v.contains(key)) {
            errs.push_back(path + "." + key + ": missing");
            continue;
        }
        validate(sub, v.at(key), types, path + "." + key, errs);
    }
}

void compare(const json& want, const json& got, const std::string& path, std::vector<std::string>& errs) {
    if (want.is_number() && got.is_number()) {
        double a = want.get<double>(), b = got.get<double>();
        if (std::fabs(a - b) > 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)})) {
            errs.push_back(path + ": " + want.dump() + " != " + got.dump());
        }
        return;
    }
    if (want.type() != got.type()) {
        errs.push_back(path + ": type differs");
        return;
    }
    if (want.is_object()) {
        for (const auto& [k, v] : want.items()) {
            if (!got.contains(k)) errs.push_back(path + "." + k + ": missing");
            else compare(v, got.at(k), path + "." + k, errs);
        }
        for (const auto& [k, v] : got.items()) {
            if (!want.contains(k)) errs.push_back(path + "." + k + ": unexpected");
        }
    } else if (want.is_array()) {
        if (want.size() != got.size()) {
            errs.push_back(path + ": length " + std::to_string(got.size()) + " != " + std::to_string(want.size()));
            return;
        }
        for (std::size_t i = 0; i < want.size(); ++i) compare(want[i], got[i], path + "[" + std::to_string(i) + "]", errs);
    } else if (want != got) {
        errs.push_back(path + ": " + want.dump() + " != " + got.dump());
    }
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += x + "\n";
    return s;
}

}  // namespace

TEST_CASE("golden outputs and schemas") {
    unsetenv("GSEMBED_SEED");
    json manifest = load("golden/manifest.json");
    json schemas = load("schemas.json");
    const json& types = schemas.at("$types");
    REQUIRE(manifest.size() >= 10);
    std::set<std::string> covered;
    for (const auto& c : manifest) {
        const std::string name = c.at("name");
        CAPTURE(name);
        auto r = run_cli(c.at("args").get<std::vector<std::string>>());
        CHECK(r.code == c.at("exit").get<int>());
        json got;
        REQUIRE_NOTHROW(got = json::parse(r.out));

        std::vector<std::string> errs;
        validate(schemas.at(c.at("schema").get<std::string>()), got, types, "$", errs);
        CHECK_MESSAGE(errs.empty(), join(errs));
        covered.insert(c.at("schema").get<std::string>());

        errs.clear();
        compare(load("golden/" + name + ".json"), got, "$", errs);
        CHECK_MESSAGE(errs.empty(), join(errs));
    }
    for (const char* sub : {"seq parse", "seq eval", "seq boyd", "seq admissible", "seq standardize", "analyze",
                            "lab nuclear", "lab entropy", "reproduce"}) {
        CHECK(covered.count(sub));
    }
}

TEST_CASE("hand-checked values") {
    auto compact = json::parse(run_cli({"analyze", "--sigma", "2^(2*j)", "--tau", "1", "--p1", "1", "--q1", "1", "--p2",
                                        "inf", "--q2", "inf", "--dim", "1", "--kind", "compact"})
                                   .out);
    CHECK(compact["status"] == "holds");
    CHECK(compact["target"] == "c0");

    auto boyd = json::parse(run_cli({"seq", "boyd", "pw2(s0=0,s1=1)"}).out);
    CHECK(boyd["lower"]["exact"] == "0");
    CHECK(boyd["upper"]["exact"] == "1");

    // s1 - s2 = 1 = d, p = q = 2: not nuclear
    auto nuc = json::parse(run_cli({"analyze", "--sigma", "2^(j)", "--tau", "1", "--p1", "2", "--q1", "2", "--p2", "2",
                                    "--q2", "2", "--dim", "1", "--kind", "nuclear"})
                               .out);
    CHECK(nuc["status"] == "fails");

    // (s1-s2)/d = 1, b = 3 - 1
    auto ent = json::parse(run_cli({"analyze", "--sigma", "2^(2*j) * (1+j)^3", "--tau", "(1+j)^1", "--p1", "2", "--q1",
                                    "2", "--p2", "2", "--q2", "2", "--dim", "2", "--kind", "entropy"})
                               .out);
    CHECK(ent["rate"]["u"] == "1");
    CHECK(ent["rate"]["v"] == "2");

    // trace norm sum_j M_j / beta_j with M_j = beta_j = 2^j
    auto lab = json::parse(run_cli({"lab", "nuclear", "--section",
                                    R"({"beta":[1,2,4,8],"M":[1,2,4,8],"p1":2,"q1":2,"p2":2,"q2":2})"})
                               .out);
    CHECK(lab["oracle"]["value"].get<double>() == doctest::Approx(4.0));
    CHECK(lab["operator_norm"].get<double>() == doctest::Approx(1.0));

    auto ev = json::parse(run_cli({"seq", "eval", "(1+j)^2", "--from", "3", "--count", "2"}).out);
    CHECK(ev["values"][0]["value"].get<double>() == doctest::Approx(16.0));
    CHECK(ev["values"][1]["value"].get<double>() == doctest::Approx(25.0));
}

TEST_CASE("exit codes") {
    const std::vector<std::string> base{"analyze", "--tau", "1", "--p1", "1", "--q1", "1", "--p2", "2", "--q2", "2"};
    auto with = [&](std::vector<std::string> extra) {
        auto a = base;
        a.insert(a.end(), extra.begin(), extra.end());
        return run_cli(a);
    };

    CHECK(with({"--sigma", "2^(2*j)", "--dim", "1"}).code == gsembed::cli::kOk);
    // verdict fails is still a successful run
    CHECK(with({"--sigma", "1", "--dim", "1"}).code == gsembed::cli::kOk);
    CHECK(with({"--sigma", "2^(j/2)*(1+j)^1", "--dim", "1", "--kind", "entropy"}).code == gsembed::cli::kInconclusive);

    auto malformed = with({"--sigma", "2^(j", "--dim", "1"});
    CHECK(malformed.code == gsembed::cli::kError);
    CHECK_FALSE(malformed.err.empty());

    CHECK(with({"--sigma", "2^(j)"}).code == gsembed::cli::kError);
    CHECK(with({"--sigma", "2^(j)", "--dim", "1", "--bogus"}).code == gsembed::cli::kError);
    CHECK(with({"--sigma", "2^(j)", "--dim", "1", "--kind", "volume"}).code == gsembed::cli::kError);
    CHECK(with({"--sigma", "2^(j)", "--dim", "0"}).code == gsembed::cli::kError);
    CHECK(run_cli({}).code == gsembed::cli::kError);
    CHECK(run_cli({"frobnicate"}).code == gsembed::cli::kError);
    CHECK(run_cli({"seq", "boyd", "2^(j)", "--K", "8"}).code == gsembed::cli::kError);
    CHECK(run_cli({"reproduce", "no-such-case"}).code == gsembed::cli::kError);
    CHECK(run_cli({"lab", "norm"}).code == gsembed::cli::kError);
    CHECK(run_cli({"lab", "entropy", "--section", R"({"beta":[1],"M":[1],"p1":2,"q1":2,"p2":2,"q2":"1/2"})"}).code ==
          gsembed::cli::kError);
    CHECK(run_cli({"--help"}).code == gsembed::cli::kOk);
}

TEST_CASE("reproduce all") {
    auto r = run_cli({"reproduce", "all"});
    CHECK(r.code == gsembed::cli::kOk);
    auto j = json::parse(r.out);
    CHECK(j["failed"] == 0);
    CHECK(j["inconclusive"] == 0);
    CHECK(j["passed"].get<int>() == static_cast<int>(j["results"].size()));

    std::set<std::string> ids;
    for (const auto& c : j["results"]) ids.insert(c["id"].get<std::string>());
    for (const char* id : {"log-besov-limiting", "log-besov-nonlimiting", "cobos-kuehn-ratio", "cobos-kuehn-integral",
                           "slowly-varying-nonlimiting", "edmunds-netrusov-above", "edmunds-netrusov-equal",
                           "edmunds-netrusov-below", "log-nuclear-boundary-holds", "log-nuclear-c0-holds",
                           "classical-compact", "classical-nuclear"}) {
        CHECK_MESSAGE(ids.count(id), id);
    }
}

TEST_CASE("corpus provenance tags and malformed corpora") {
    std::ifstream in(GSEMBED_DEFAULT_CORPUS);
    REQUIRE(in.good());
    json corpus = json::parse(in);
    for (const auto& c : corpus) {
        CAPTURE(c.at("id").get<std::string>());
        CHECK(std::set<std::string>{"literature", "derived", "trivial"}.count(c.at("provenance").get<std::string>()));
        CHECK(c.contains("citation"));
    }

    auto tmp = (std::filesystem::temp_directory_path() / "gsembed_dup_corpus.json").string();
    {
        std::ofstream o(tmp);
        json bad = json::array({corpus[0], corpus[0]});
        o << bad.dump();
    }
    CHECK(run_cli({"reproduce", "all", "--corpus", tmp}).code == gsembed::cli::kError);
    std::remove(tmp.c_str());
    CHECK(run_cli({"reproduce", "all", "--corpus", "/nonexistent/corpus.json"}).code == gsembed::cli::kError);
}

TEST_CASE("GSEMBED_SEED overrides the lab seed") {
    const std::vector<std::string> args{"lab", "norm", "--section",
                                        R"({"beta":[1,2],"M":[2,3],"p1":1,"q1":2,"p2":2,"q2":1})", "--seed", "5"};
    unsetenv("GSEMBED_SEED");
    auto plain = json::parse(run_cli(args).out);
    CHECK(plain["seed"] == 5);
    setenv("GSEMBED_SEED", "77", 1);
    auto env = json::parse(run_cli(args).out);
    unsetenv("GSEMBED_SEED");
    CHECK(env["seed"] == 77);
    CHECK(env["search"].get<double>() <= env["closed"].get<double>() * (1 + 1e-9));
    CHECK(env["search"].get<double>() >= 0.99 * env["closed"].get<double>());
}
