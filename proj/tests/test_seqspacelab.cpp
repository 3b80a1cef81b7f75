#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gsembed/seqspacelab.hpp"
#include "support.hpp"

using namespace gsembed;
using namespace gsembed::seqspacelab;
using gsembed::testing::ex;
using gsembed::testing::problem;

namespace {

FiniteSection one_block(double beta, std::int64_t m, const char* p1, const char* p2, const char* q1 = "2",
                        const char* q2 = "2") {
    return manual_section({beta}, {m}, ex(p1), ex(q1), ex(p2), ex(q2));
}

FiniteSection random_section(std::mt19937_64& rng, std::int64_t max_n, bool banach = true) {
    static const char* pool[] = {"1", "4/3", "3/2", "2", "3", "4", "inf"};
    static const char* quasi[] = {"1/2", "2/3", "1", "2", "inf"};
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    auto e = [&] { return banach ? ex(pool[pick(7)]) : ex(quasi[pick(5)]); };
    std::vector<double> beta;
    std::vector<std::int64_t> M;
    std::int64_t n = 0;
    for (int j = 0, levels = pick(4) + 1; j < levels; ++j) {
        std::int64_t m = pick(static_cast<int>(std::clamp<std::int64_t>(max_n / 3, 1, 20))) + 1;
        if (n + m > max_n) break;
        n += m;
        M.push_back(m);
        beta.push_back(std::exp2(std::uniform_real_distribution<double>(-2, 3)(rng)));
    }
    return manual_section(beta, M, e(), e(), e(), e());
}

}  // namespace

TEST_CASE("finite sections from problems") {
    auto s = finite_section(problem("2^(j)", "1", "2", "2", "2", "2"), 3);
    CHECK(s.beta == std::vector<double>{1, 2, 4, 8});
    CHECK(s.M == std::vector<std::int64_t>{1, 2, 4, 8});
    CHECK(s.dimension() == 15);
    CHECK(s.provenance["kind"] == "from_problem");

    auto flat = finite_section(problem("2^(j) * (1+j)^2", "2^(j) * (1+j)^2", "3", "1", "3", "2"), 5);
    for (double b : flat.beta) CHECK(b == doctest::Approx(1.0));

    auto lg = finite_section(problem("2^(3/2*j) * (1+j)^1", "2^(j)", "1", "1", "2", "1", 1), 6);
    for (int j = 0; j <= 6; ++j) {
        // delta' = 1/2 - (1 - 1/2) = 0
        CHECK(lg.beta[static_cast<std::size_t>(j)] == doctest::Approx(1.0 + j));
    }

    auto c = finite_section(problem("1", "1", "2", "2", "2", "2", 2), 2, 1.5);
    CHECK(c.M == std::vector<std::int64_t>{2, 6, 24});

    CHECK_THROWS_AS(finite_section(problem("1", "1", "2", "2", "2", "2", 3), 10, 1.0, 1000), LabError);
    CHECK_THROWS_AS(finite_section(problem("1", "1", "2", "2", "2", "2"), 3, 0.5), LabError);
    CHECK_THROWS_AS(manual_section({1.0, -1.0}, {1, 1}, ex("1"), ex("1"), ex("1"), ex("1")), LabError);
    CHECK_THROWS_AS(manual_section({1.0}, {1, 1}, ex("1"), ex("1"), ex("1"), ex("1")), LabError);
}

TEST_CASE("mixed norms") {
    std::vector<double> x{3, 4, 1};
    std::vector<std::int64_t> M{2, 1};
    CHECK(mixed_norm(x, M, ex("2"), ex("1")) == doctest::Approx(6.0));
    CHECK(mixed_norm(x, M, ex("1"), ex("inf")) == doctest::Approx(7.0));
    CHECK(mixed_norm(x, M, ex("inf"), ex("2")) == doctest::Approx(std::sqrt(17.0)));
}

TEST_CASE("closed-form operator norms") {
    CHECK(embedding_norm_closed(one_block(1, 7, "2", "3")) == doctest::Approx(1.0));
    CHECK(embedding_norm_closed(one_block(1, 4, "2", "1")) == doctest::Approx(2.0));
    auto two = manual_section({1.0, 1.0 / 3.0}, {1, 1}, ex("2"), ex("inf"), ex("2"), ex("1"));
    CHECK(embedding_norm_closed(two) == doctest::Approx(4.0));
    auto sup = manual_section({1.0, 1.0 / 3.0}, {1, 1}, ex("2"), ex("1"), ex("2"), ex("2"));
    CHECK(embedding_norm_closed(sup) == doctest::Approx(3.0));
}

TEST_CASE("norm search is a lower bound and finds the extremizer") {
    auto s = one_block(1, 4, "2", "1");
    double v = embedding_norm_search(s, 400, 1);
    CHECK(v >= 1.98);
    CHECK(v <= 2.0 + 1e-9);

    auto half = s;
    half.beta = {2.0};
    CHECK(embedding_norm_search(half, 400, 1) == doctest::Approx(v / 2).epsilon(1e-9));
    CHECK(embedding_norm_search(s, 400, 9) == embedding_norm_search(s, 400, 9));

    std::mt19937_64 rng(12);
    for (int t = 0; t < 60; ++t) {
        auto r = random_section(rng, 64, false);
        double closed = embedding_norm_closed(r);
        double found = embedding_norm_search(r, 300, 5);
        INFO(to_json(r).dump());
        CHECK(found <= closed * (1 + 1e-9) + 1e-9);
        CHECK(found >= 0.99 * closed);
    }
}

TEST_CASE("Tong nuclear norms") {
    CHECK(nuclear_norm_tong(one_block(1, 9, "3", "3")) == doctest::Approx(9.0));
    CHECK(nuclear_norm_tong(one_block(1, 9, "inf", "1")) == doctest::Approx(9.0));
    for (int L : {0, 3, 7}) {
        std::vector<double> beta;
        std::vector<std::int64_t> M;
        for (int j = 0; j <= L; ++j) {
            beta.push_back(std::exp2(j));
            M.push_back(1);
        }
        // t(q1, q2) = 1 for q1 = inf, q2 = 1
        auto s = manual_section(beta, M, ex("2"), ex("inf"), ex("2"), ex("1"));
        CHECK(nuclear_norm_tong(s) == doctest::Approx(2.0 - std::exp2(-L)));
    }
    CHECK_THROWS_AS(nuclear_norm_tong(one_block(1, 2, "1/2", "1")), LabError);
}

TEST_CASE("nuclear-norm oracle cases") {
    auto b = nuclear_norm_oracle(one_block(1, 6, "inf", "1"));
    CHECK(b.exact);
    CHECK(b.oracle_case == 'b');
    CHECK(b.value == doctest::Approx(6.0));

    auto h = nuclear_norm_oracle(manual_section({1.0, 4.0, 0.5}, {1, 1, 1}, ex("2"), ex("2"), ex("2"), ex("2")));
    CHECK(h.exact);
    CHECK(h.value == doctest::Approx(1.0 + 0.25 + 2.0));

    auto a = nuclear_norm_oracle(manual_section({3.0, 3.0}, {2, 5}, ex("4"), ex("3"), ex("4"), ex("3")));
    CHECK(a.exact);
    CHECK(a.oracle_case == 'a');
    CHECK(a.value == doctest::Approx(7.0 / 3.0));

    auto d = nuclear_norm_coordinate_bound(one_block(1, 5, "2", "2"));
    CHECK_FALSE(d.exact);
    CHECK(d.value == doctest::Approx(5.0));

    std::mt19937_64 rng(99);
    for (int t = 0; t < 200; ++t) {
        auto s = random_section(rng, 30);
        double tong = nuclear_norm_tong(s);
        auto o = nuclear_norm_oracle(s);
        if (o.exact) {
            CHECK(o.value == doctest::Approx(tong).epsilon(1e-9));
        } else {
            CHECK(o.value >= tong * (1 - 1e-9));
        }
        CHECK(nuclear_norm_coordinate_bound(s).value >= tong * (1 - 1e-9));
        CHECK(tong >= embedding_norm_closed(s) * (1 - 1e-9));

        // R = lambda id on the target scales nu by lambda
        auto scaled = s;
        for (double& x : scaled.beta) x /= 2.5;
        CHECK(nuclear_norm_tong(scaled) == doctest::Approx(2.5 * tong).epsilon(1e-12));
    }
}

TEST_CASE("unit-ball volumes against elementary values") {
    auto vol = [](std::vector<std::int64_t> M, const char* p, const char* q) {
        return std::exp(log_unit_ball_volume(M, ex(p), ex(q)));
    };
    const double pi = std::numbers::pi;
    CHECK(vol({1}, "3", "2") == doctest::Approx(2.0));
    CHECK(vol({2}, "1", "1") == doctest::Approx(2.0));
    CHECK(vol({2}, "2", "5") == doctest::Approx(pi));
    CHECK(vol({2}, "inf", "1") == doctest::Approx(4.0));
    CHECK(vol({3}, "2", "2") == doctest::Approx(4.0 * pi / 3.0));
    // l_q(l_p^1 + l_p^1) is l_q^2
    CHECK(vol({1, 1}, "7", "2") == doctest::Approx(pi));
    CHECK(vol({1, 1}, "1", "inf") == doctest::Approx(4.0));
    // l_1(l_inf^2 + l_inf^1): {|a|_inf + |b| <= 1}, a in R^2: int_{-1}^{1} (2(1-|b|))^2 db = 8/3
    CHECK(vol({2, 1}, "inf", "1") == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("entropy bounds in one dimension are exact") {
    auto s = one_block(1, 1, "2", "3");
    for (int k = 1; k <= 12; ++k) {
        auto b = entropy_bounds(s, k);
        CHECK(b.upper == doctest::Approx(std::exp2(-(k - 1))));
        CHECK(b.lower == doctest::Approx(b.upper));
        CHECK(b.method_upper == "exact-1d");
    }
    CHECK(entropy_upper(one_block(0.5, 1, "1", "1"), 3) == doctest::Approx(0.5));
    CHECK(entropy_lower(one_block(1, 2, "2", "2"), 1) == doctest::Approx(1.0));
}

TEST_CASE("entropy bounds: sandwich, monotonicity, homogeneity") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 25; ++t) {
        auto s = random_section(rng, 8);
        auto up = entropy_upper_all(s, 24);
        double norm = embedding_norm_closed(s);
        CHECK(up[0] <= norm * (1 + 1e-9));
        for (int k = 1; k <= 24; ++k) {
            double lo = entropy_lower(s, k);
            CHECK(lo <= up[static_cast<std::size_t>(k - 1)] * (1 + 1e-9));
            if (k > 1) CHECK(up[static_cast<std::size_t>(k - 1)] <= up[static_cast<std::size_t>(k - 2)]);
        }
        auto doubled = s;
        for (double& b : doubled.beta) b *= 2;
        auto up2 = entropy_upper_all(doubled, 24);
        for (std::size_t i = 0; i < up.size(); ++i) CHECK(up2[i] == doctest::Approx(up[i] / 2).epsilon(1e-9));
    }
    CHECK_THROWS_AS(entropy_upper(manual_section({1.0}, {21}, ex("2"), ex("2"), ex("2"), ex("2")), 2), LabError);
    CHECK_THROWS_AS(entropy_upper(one_block(1, 2, "2", "2"), 41), LabError);
    CHECK_THROWS_AS(entropy_upper(one_block(1, 2, "2", "1/2"), 2), LabError);
}

TEST_CASE("entropy properties report") {
    auto s = manual_section({1.0, 2.0}, {2, 2}, ex("2"), ex("2"), ex("2"), ex("2"));
    auto r = entropy_properties(s, {1, 2, 3, 5, 8, 13});
    CHECK(r.ok());
    CHECK(r.upper.size() == 6);
    auto one = entropy_properties(one_block(1, 1, "1", "inf"), {1, 2, 3, 4});
    CHECK(one.ok());
    auto j = to_json(r);
    CHECK(j["violations"].empty());
}

TEST_CASE("entropy rate fit") {
    for (int ds : {1, 2}) {
        auto prob = problem("2^(" + std::to_string(ds) + "*j)", "1", "2", "2", "2", "2");
        auto f = rate_fit(prob, {1, 2, 3, 4});
        CHECK(f.predicted_slope == doctest::Approx(-ds));
        CHECK(f.slope <= 0.7 * f.predicted_slope);
        CHECK(f.slope >= 1.3 * f.predicted_slope);
        CHECK_FALSE(f.non_decaying);
    }
    std::vector<FiniteSection> flat;
    for (int L = 1; L <= 3; ++L) {
        std::vector<double> beta(static_cast<std::size_t>(L + 1), 1.0);
        std::vector<std::int64_t> M;
        for (int j = 0; j <= L; ++j) M.push_back(std::int64_t{1} << j);
        flat.push_back(manual_section(beta, M, ex("2"), ex("2"), ex("2"), ex("2")));
    }
    CHECK(rate_fit_sections(flat).non_decaying);
    CHECK_THROWS_AS(rate_fit(problem("(1+j)^1", "1", "2", "2", "2", "2"), {1, 2}), LabError);
}

TEST_CASE("section JSON round trip") {
    auto s = manual_section({1.0, 0.25}, {3, 1}, ex("1"), ex("inf"), ex("4/3"), ex("2"));
    auto back = section_from_json(to_json(s));
    CHECK(back.beta == s.beta);
    CHECK(back.M == s.M);
    CHECK(back.p2 == s.p2);
    CHECK(back.q1.is_infinite());
    CHECK_THROWS(section_from_json(nlohmann::json{{"beta", {1.0}}}));
}
