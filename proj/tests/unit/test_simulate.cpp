#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "resrwa/error.hpp"
#include "resrwa/simulate.hpp"

using namespace resrwa;

namespace {

// Two-sided one-sample KS statistic against Uniform(lo, hi).
double ks_uniform(Eigen::VectorXd x, double lo, double hi) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double f = (x[i] - lo) / (hi - lo);
        d = std::max({d, (static_cast<double>(i) + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

oracle::Polynomial moon_active_polynomial(const MoonActive& c) {
    oracle::Polynomial p(20);
    const auto mono = [](std::initializer_list<std::pair<int, int>> powers) {
        std::vector<int> e(20, 0);
        for (auto [var, power] : powers) e[static_cast<std::size_t>(var - 1)] += power;
        return e;
    };
    p.add(c.x1_x18, mono({{1, 1}, {18, 1}}));
    p.add(c.x1_x19, mono({{1, 1}, {19, 1}}));
    p.add(c.x19_sq, mono({{19, 2}}));
    p.add(c.x7_x12, mono({{7, 1}, {12, 1}}));
    return p;
}

}  // namespace

TEST_CASE("Ishigami values by substitution") {
    CHECK(ishigami_value(0.0, 1.3, 2.0) == doctest::Approx(7.0 * std::sin(1.3) * std::sin(1.3)));
    CHECK(ishigami_value(std::numbers::pi / 2, 0.0, 0.0) == doctest::Approx(1.0));
    for (double x : {-2.0, 0.3, 1.7}) CHECK(ishigami_value(x, x / 2, x / 3) == doctest::Approx(oracle::ishigami(x, x / 2, x / 3)));
}

TEST_CASE("datasets are deterministic") {
    const auto a = ishigami(500, 7);
    const auto b = ishigami(500, 7);
    CHECK(a.x == b.x);
    CHECK(a.y_g == b.y_g);
    CHECK(a.y_b == b.y_b);
    CHECK_FALSE(ishigami(500, 8).x == a.x);

    const auto terms = synthetic_small_terms(3);
    const auto m1 = moon(300, 3, SimModel::MoonC3, terms);
    const auto m2 = moon(300, 3, SimModel::MoonC3, terms);
    CHECK(m1.x == m2.x);
    CHECK(m1.y_b == m2.y_b);
}

TEST_CASE("first draws are pinned") {
    // Guards against accidental changes to the generator or its mapping.
    Rng rng(1);
    CHECK(rng.next() == 2469588189546311528ULL);
    Rng again(1);
    CHECK(again.uniform() == 0.13387664401253263);
}

TEST_CASE("uniform marginals pass a KS test") {
    // 28 columns at a family-wise alpha of 0.01: Bonferroni level 0.01 / 28.
    const double critical = std::sqrt(-0.5 * std::log(0.01 / 28.0 / 2.0)) / std::sqrt(3000.0);
    const auto ish = ishigami(3000, 1);
    for (Eigen::Index j = 0; j < ish.x.cols(); ++j) CHECK(ks_uniform(ish.x.col(j), -std::numbers::pi, std::numbers::pi) < critical);
    const auto m = moon(3000, 1, SimModel::MoonBase);
    for (Eigen::Index j = 0; j < m.x.cols(); ++j) CHECK(ks_uniform(m.x.col(j), 0.0, 1.0) < critical);
}

TEST_CASE("dichotomization") {
    const Eigen::Index n = 3000;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    const double half = dichotomize(zero, 5).mean();
    CHECK(std::abs(half - 0.5) < 3.0 * std::sqrt(0.25 / n));

    const Eigen::VectorXd big = Eigen::VectorXd::Constant(n, 800.0);
    CHECK(dichotomize(big, 5).minCoeff() == 1.0);

    const auto ds = ishigami(n, 9);
    const Eigen::VectorXd p = (1.0 + (-ds.y_g.array()).exp()).inverse();
    const double sigma = std::sqrt((p.array() * (1.0 - p.array())).sum()) / static_cast<double>(n);
    CHECK(std::abs(ds.y_b.mean() - p.mean()) < 3.0 * sigma);
    for (double v : ds.y_b) CHECK((v == 0.0 || v == 1.0));
}

TEST_CASE("C3 coefficients are three times the base") {
    CHECK(kMoonC3.x1_x18 == doctest::Approx(3 * kMoonBase.x1_x18).epsilon(1e-12));
    CHECK(kMoonC3.x1_x19 == doctest::Approx(3 * kMoonBase.x1_x19).epsilon(1e-12));
    CHECK(kMoonC3.x19_sq == doctest::Approx(3 * kMoonBase.x19_sq).epsilon(1e-12));
    CHECK(kMoonC3.x7_x12 == doctest::Approx(3 * kMoonBase.x7_x12).epsilon(1e-12));

    const auto base = moon(200, 4, SimModel::MoonBase);
    const auto c3 = moon(200, 4, SimModel::MoonC3);
    CHECK(base.x == c3.x);
    CHECK(testutil::max_abs_diff(c3.y_g, 3.0 * base.y_g) < 1e-10);
}

TEST_CASE("Moon at the origin") {
    const auto terms = synthetic_small_terms(2);
    const Eigen::RowVectorXd origin = Eigen::RowVectorXd::Zero(20);
    CHECK(moon_active_value(kMoonC3, origin) == 0.0);
    // Every small term has a variable factor, so the table vanishes too.
    CHECK(terms.evaluate(origin) == 0.0);
}

TEST_CASE("Moon variance matches the symbolic moments") {
    const auto ds = moon(1000000, 11, SimModel::MoonBase);
    const double mean = ds.y_g.mean();
    const double mc = (ds.y_g.array() - mean).square().sum() / static_cast<double>(ds.y_g.size() - 1);
    const double exact = moon_active_polynomial(kMoonBase).variance();
    CHECK(std::abs(mc - exact) < 0.02 * exact);
}

TEST_CASE("synthetic small-term composition") {
    const auto t = synthetic_small_terms(1);
    REQUIRE(t.terms.size() == 189);
    int mains = 0, quads = 0, inters = 0;
    for (const auto& s : t.terms) {
        CHECK(std::abs(s.coefficient) <= 0.5);
        switch (s.kind) {
            case SmallTermKind::Main: ++mains; break;
            case SmallTermKind::Quad:
                ++quads;
                CHECK(s.i != 19);
                break;
            case SmallTermKind::Inter:
                ++inters;
                CHECK(s.i < s.j);
                CHECK_FALSE((s.i == 1 && s.j == 18));
                CHECK_FALSE((s.i == 1 && s.j == 19));
                CHECK_FALSE((s.i == 7 && s.j == 12));
                break;
        }
    }
    CHECK(mains == 20);
    CHECK(quads == 19);
    CHECK(inters == 150);
    CHECK_FALSE(synthetic_small_terms(2).terms[0].coefficient == t.terms[0].coefficient);
}

TEST_CASE("small-term table round trip and errors") {
    const auto t = synthetic_small_terms(6);
    std::stringstream ss;
    write_small_terms(ss, t);
    const auto back = read_small_terms(ss);
    REQUIRE(back.terms.size() == t.terms.size());
    for (std::size_t i = 0; i < t.terms.size(); ++i) {
        CHECK(back.terms[i].kind == t.terms[i].kind);
        CHECK(back.terms[i].coefficient == t.terms[i].coefficient);
    }

    std::istringstream bad("term_kind,i,j,coefficient\nmain,1,0,0.1\ninter,2,2,0.3\n");
    try {
        read_small_terms(bad);
        FAIL("expected MalformedCoefficientTable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedCoefficientTable);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::istringstream short_row("main,1,0\n");
    CHECK_THROWS_AS(read_small_terms(short_row), Error);
}

TEST_CASE("dataset layout and argument checks") {
    const auto ds = moon(10, 1, SimModel::MoonC3, synthetic_small_terms(1));
    const auto t = ds.to_table();
    CHECK(t.cols() == 22);
    CHECK(t.names().front() == "X1");
    CHECK(t.names()[20] == "y_g");
    CHECK(t.names()[21] == "y_b");
    CHECK(ishigami(10, 1).to_table().cols() == 10);

    CHECK(parse_sim_model("moon-base") == SimModel::MoonBase);
    CHECK_THROWS_AS(parse_sim_model("oakley"), Error);
    CHECK_THROWS_AS(ishigami(0, 1), Error);
}
