#include <doctest.h>

#include <random>
#include <set>

#include "helpers.hpp"
#include "resrwa/design.hpp"
#include "resrwa/error.hpp"

using namespace resrwa;

namespace {

ColumnTable random_table(const std::vector<std::string>& names, Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    ColumnTable t;
    for (const auto& name : names) t.add(name, testutil::uniform_vector(n, -1.0, 1.0, gen));
    return t;
}

}  // namespace

TEST_CASE("main effect widths") {
    const auto data = random_table({"C1", "C2", "A", "B"}, 100, 1);
    const std::vector<VariableSpec> specs{{"C1", VariableRole::Control, 1},
                                          {"C2", VariableRole::Control, 1},
                                          {"A", VariableRole::Free, 3},
                                          {"B", VariableRole::Free, 3}};
    const DesignMatrix d = build_main_effects(data, specs);
    CHECK(d.cols() == 6);
    CHECK(d.groups.size() == 4);
    CHECK(d.groups[0].term == TermId::control("C1"));
    CHECK(d.groups[2].term == TermId::main("A"));
}

TEST_CASE("eight five-knot variables give eight groups of four") {
    std::vector<std::string> names;
    std::vector<VariableSpec> specs;
    for (int i = 1; i <= 8; ++i) {
        names.push_back("X" + std::to_string(i));
        specs.push_back({names.back(), VariableRole::Free, 5});
    }
    const DesignMatrix d = build_main_effects(random_table(names, 300, 2), specs);
    REQUIRE(d.groups.size() == 8);
    for (const auto& g : d.groups) CHECK(g.width == 4);
}

TEST_CASE("empty spec list") {
    const auto data = random_table({"A"}, 10, 3);
    const DesignMatrix d = build_main_effects(data, {});
    CHECK(d.cols() == 0);
    CHECK(d.groups.empty());
}

TEST_CASE("spec validation") {
    const std::vector<VariableSpec> dup{{"A", VariableRole::Free, 3}, {"A", VariableRole::Free, 3}};
    CHECK_THROWS_AS(validate_specs(dup), Error);
    const std::vector<VariableSpec> bad_k{{"A", VariableRole::Free, 2}};
    CHECK_THROWS_AS(validate_specs(bad_k), Error);
}

TEST_CASE("restricted interaction widths") {
    const auto data = random_table({"A", "B", "L1", "L2"}, 200, 4);
    const auto a3 = main_block(data, {"A", VariableRole::Free, 3});
    const auto b3 = main_block(data, {"B", VariableRole::Free, 3});
    CHECK(restricted_interaction(a3, b3).columns.cols() == 3);

    const auto a5 = main_block(data, {"A", VariableRole::Free, 5});
    const auto b5 = main_block(data, {"B", VariableRole::Free, 5});
    CHECK(restricted_interaction(a5, b5).columns.cols() == 7);
    CHECK(restricted_interaction_width(4, 4) == 7);

    const auto l1 = main_block(data, {"L1", VariableRole::Free, 1});
    const auto l2 = main_block(data, {"L2", VariableRole::Free, 1});
    const auto ll = restricted_interaction(l1, l2);
    REQUIRE(ll.columns.cols() == 1);
    CHECK(testutil::max_abs_diff(ll.columns.col(0), data.column("L1").cwiseProduct(data.column("L2"))) == 0.0);

    // Linear x 3-knot keeps both products.
    CHECK(restricted_interaction(l1, b3).columns.cols() == 2);
}

TEST_CASE("interaction is symmetric and never nonlinear x nonlinear") {
    const auto data = random_table({"A", "B"}, 150, 5);
    const auto a = main_block(data, {"A", VariableRole::Free, 4});
    const auto b = main_block(data, {"B", VariableRole::Free, 5});
    const auto ab = restricted_interaction(a, b);
    const auto ba = restricted_interaction(b, a);
    CHECK(ab.term == ba.term);
    CHECK(ab.labels == ba.labels);
    CHECK(testutil::max_abs_diff(ab.columns, ba.columns) == 0.0);
    for (const auto& l : ab.labels) CHECK_FALSE(l.doubly_nonlinear());
}

TEST_CASE("controls cannot interact") {
    const auto data = random_table({"C", "B"}, 50, 6);
    const auto c = main_block(data, {"C", VariableRole::Control, 1});
    const auto b = main_block(data, {"B", VariableRole::Free, 3});
    try {
        restricted_interaction(c, b);
        FAIL("expected ControlInInteraction");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ControlInInteraction);
    }
}

TEST_CASE("full model parameter count") {
    CHECK(count_full_model_parameters(10, 3) == 166);
    CHECK(count_full_model_parameters(10, 4) == 221);
    CHECK(count_full_model_parameters(1, 3) == 4);
}

TEST_CASE("group map round trip") {
    const auto data = random_table({"C", "A", "B", "D"}, 200, 7);
    const std::vector<VariableSpec> specs{{"C", VariableRole::Control, 1},
                                          {"A", VariableRole::Fixed, 3},
                                          {"B", VariableRole::Free, 4},
                                          {"D", VariableRole::Free, 1}};
    const TermCatalog catalog(data, specs);
    std::vector<TermId> terms{TermId::control("C"), TermId::main("A"), TermId::main("B"), TermId::main("D"),
                              TermId::interaction("A", "B"), TermId::interaction("B", "D")};
    const DesignMatrix d = catalog.design(terms);
    std::set<TermId> seen;
    for (Eigen::Index c = 0; c < d.cols(); ++c) {
        const TermGroup& g = d.group_of_column(c);
        CHECK(c >= g.first);
        CHECK(c < g.end());
        seen.insert(g.term);
        CHECK(d.find(g.term) == &g);
    }
    CHECK(seen.size() == terms.size());
    CHECK(catalog.interaction_variables() == std::vector<std::string>{"A", "B", "D"});
    CHECK_THROWS_AS(catalog.design({TermId::main("A"), TermId::main("A")}), Error);
}

TEST_CASE("term ids are canonical") {
    CHECK(TermId::interaction("X3", "X1") == TermId::interaction("X1", "X3"));
    CHECK(TermId::interaction("X3", "X1").label() == "X1 x X3");
    CHECK_THROWS_AS(TermId::interaction("A", "A"), Error);
}
