#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "chiron/bn/network.hpp"
#include "chiron/error.hpp"
#include "chiron/triage/model.hpp"
#include "support/brute_force.hpp"
#include "support/networks.hpp"
#include "support/random_network.hpp"

using namespace chiron;
using chiron::testing::make_node;

namespace {

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ErrorCode parse_error_code(std::string_view text) {
    try {
        bn::parse_network(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("parse_network accepted invalid input");
    return ErrorCode::Io;
}

bool has_kind(const bn::ValidationReport& report, bn::ViolationKind kind) {
    return std::any_of(report.begin(), report.end(), [&](const bn::Violation& v) { return v.kind == kind; });
}

}  // namespace

TEST_SUITE("bn-core") {

TEST_CASE("parse a single-node prior") {
    const auto spec = bn::parse_network(testing::kSingleNodeText);
    REQUIRE(spec.nodes.size() == 1);
    CHECK(spec.nodes[0].parents.empty());
    REQUIRE(spec.nodes[0].cpt.rows.size() == 1);
    CHECK(spec.nodes[0].cpt.rows[0] == std::vector<double>{0.3, 0.7});
    CHECK(spec == testing::single_node_network());
}

TEST_CASE("parse the shipped default network file") {
    const auto spec = bn::parse_network(read_text(CHIRON_DATA_DIR "/chiron-default.bn.json"));
    CHECK(spec.nodes.size() == 9);
    CHECK(bn::validate_network(spec).empty());
    CHECK(spec == triage::default_network());
}

TEST_CASE("row summing to 0.9 is a normalization error naming node and row") {
    const std::string text = R"({"name": "n", "version": "1", "nodes": [
        {"name": "A", "states": ["x", "y"], "parents": [], "cpt": [[0.5, 0.5]]},
        {"name": "B", "states": ["x", "y"], "parents": ["A"], "cpt": [[0.5, 0.5], [0.6, 0.3]]}]})";
    try {
        bn::parse_network(text);
        FAIL("expected a normalization error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Normalization);
        const std::string what = e.what();
        CHECK(what.find("'B'") != std::string::npos);
        CHECK(what.find("row 1") != std::string::npos);
    }
}

TEST_CASE("parse errors") {
    SUBCASE("syntax error reports a position") {
        try {
            bn::parse_network(R"({"name": "n", "version": )");
            FAIL("expected a syntax error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Syntax);
            CHECK(std::string(e.what()).find("byte") != std::string::npos);
        }
    }
    SUBCASE("wrong field type") {
        CHECK(parse_error_code(R"({"name": "n", "version": "1", "nodes": [{"name": "A", "states": "x",
            "parents": [], "cpt": [[1]]}]})") == ErrorCode::Syntax);
    }
    SUBCASE("unknown parent") {
        CHECK(parse_error_code(R"({"name": "n", "version": "1", "nodes": [
            {"name": "A", "states": ["x", "y"], "parents": ["Z"], "cpt": [[0.5, 0.5]]}]})") ==
              ErrorCode::UnknownReference);
    }
    SUBCASE("duplicate node") {
        CHECK(parse_error_code(R"({"name": "n", "version": "1", "nodes": [
            {"name": "A", "states": ["x", "y"], "parents": [], "cpt": [[0.5, 0.5]]},
            {"name": "A", "states": ["x", "y"], "parents": [], "cpt": [[0.5, 0.5]]}]})") == ErrorCode::DuplicateNode);
    }
    SUBCASE("cycle") {
        CHECK(parse_error_code(R"({"name": "n", "version": "1", "nodes": [
            {"name": "A", "states": ["x", "y"], "parents": ["B"], "cpt": [[0.5, 0.5], [0.5, 0.5]]},
            {"name": "B", "states": ["x", "y"], "parents": ["A"], "cpt": [[0.5, 0.5], [0.5, 0.5]]}]})") ==
              ErrorCode::InvalidNetwork);
    }
}

TEST_CASE("validate_network") {
    SUBCASE("valid chain") { CHECK(bn::validate_network(testing::chain_network(0.7, 0.2)).empty()); }

    SUBCASE("two-node cycle is listed") {
        bn::NetworkSpec spec{"c", "1",
                             {make_node("A", {"x", "y"}, {"B"}, {{0.5, 0.5}, {0.5, 0.5}}),
                              make_node("B", {"x", "y"}, {"A"}, {{0.5, 0.5}, {0.5, 0.5}})}};
        const auto report = bn::validate_network(spec);
        REQUIRE(report.size() == 1);
        CHECK(report[0].kind == bn::ViolationKind::Cycle);
        CHECK(report[0].message.find("A -> B -> A") != std::string::npos);
    }

    SUBCASE("entry 1.2 is a range violation") {
        bn::NetworkSpec spec{"r", "1", {make_node("A", {"x", "y"}, {}, {{1.2, -0.2}})}};
        const auto report = bn::validate_network(spec);
        CHECK(has_kind(report, bn::ViolationKind::ProbabilityRange));
        CHECK(report.front().row == std::optional<std::size_t>(0));
    }

    SUBCASE("every node invariant is reported") {
        bn::NetworkSpec spec{"bad",
                             "1",
                             {make_node("", {"x", "y"}, {}, {{0.5, 0.5}}),
                              make_node("One", {"x"}, {}, {{1.0}}),
                              make_node("Dup", {"x", "x"}, {}, {{0.5, 0.5}}),
                              make_node("Self", {"x", "y"}, {"Self"}, {{0.5, 0.5}, {0.5, 0.5}}),
                              make_node("Twice", {"x", "y"}, {"Dup", "Dup"}, {{0.5, 0.5}}),
                              make_node("Rows", {"x", "y"}, {"Dup"}, {{0.5, 0.5}}),
                              make_node("Width", {"x", "y"}, {}, {{0.2, 0.3, 0.5}}),
                              make_node("Dup", {"x", "y"}, {}, {{0.5, 0.5}})}};
        const auto report = bn::validate_network(spec);
        CHECK(has_kind(report, bn::ViolationKind::EmptyName));
        CHECK(has_kind(report, bn::ViolationKind::TooFewStates));
        CHECK(has_kind(report, bn::ViolationKind::DuplicateState));
        CHECK(has_kind(report, bn::ViolationKind::SelfParent));
        CHECK(has_kind(report, bn::ViolationKind::DuplicateParent));
        CHECK(has_kind(report, bn::ViolationKind::RowCount));
        CHECK(has_kind(report, bn::ViolationKind::RowWidth));
        CHECK(has_kind(report, bn::ViolationKind::DuplicateNode));
    }

    SUBCASE("row sum within tolerance is accepted, beyond it is not") {
        bn::NetworkSpec ok{"t", "1", {make_node("A", {"x", "y"}, {}, {{0.3, 0.7 + 5e-10}})}};
        bn::NetworkSpec bad{"t", "1", {make_node("A", {"x", "y"}, {}, {{0.3, 0.7 + 5e-9}})}};
        CHECK(bn::validate_network(ok).empty());
        CHECK(has_kind(bn::validate_network(bad), bn::ViolationKind::RowSum));
    }
}

TEST_CASE("cpt_row_index") {
    const std::vector<std::size_t> none;
    CHECK(bn::cpt_row_index(none, none) == 0);
    const std::vector<std::size_t> sizes_23{2, 3}, sizes_32{3, 2};
    CHECK(bn::cpt_row_index(sizes_23, std::vector<std::size_t>{1, 2}) == 5);
    CHECK(bn::cpt_row_index(sizes_32, std::vector<std::size_t>{2, 0}) == 4);
    CHECK_THROWS_AS(bn::cpt_row_index(sizes_23, std::vector<std::size_t>{1}), Error);
    CHECK_THROWS_AS(bn::cpt_row_index(sizes_23, std::vector<std::size_t>{2, 0}), Error);

    SUBCASE("bijection onto [0, row_count)") {
        const std::vector<std::size_t> sizes{3, 2, 4};
        std::set<std::size_t> seen;
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 2; ++b)
                for (std::size_t c = 0; c < 4; ++c) seen.insert(bn::cpt_row_index(sizes, std::vector{a, b, c}));
        CHECK(seen.size() == 24);
        CHECK(*seen.rbegin() == 23);
    }

    SUBCASE("node overload resolves parent sizes") {
        const auto spec = triage::default_network();
        const auto& hem = spec.node("SevereHemorrhage");
        // (LowerExt=Amputation, UpperExt=Normal, Torso=Normal)
        CHECK(bn::cpt_row_index(spec, hem, std::vector<std::size_t>{1, 2, 1}) == 11);
    }
}

TEST_CASE("joint_probability") {
    CHECK(bn::joint_probability(testing::single_node_network(), {{"A", 1}}) == 0.7);
    CHECK(bn::joint_probability(testing::chain_network(0.7, 0.2), {{"A", 0}, {"B", 0}}) ==
          doctest::Approx(0.35).epsilon(1e-15));

    SUBCASE("partial assignment is rejected") {
        try {
            bn::joint_probability(testing::chain_network(0.7, 0.2), {{"A", 0}});
            FAIL("expected rejection");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidArgument);
        }
    }
    SUBCASE("out-of-range state is rejected") {
        CHECK_THROWS_AS(bn::joint_probability(testing::single_node_network(), {{"A", 2}}), Error);
    }

    SUBCASE("default network matches the oracle cell-wise and sums to 1") {
        const auto spec = triage::default_network();
        const testing::BruteForce oracle(spec);
        std::vector<std::size_t> states(spec.nodes.size(), 0);
        double total = 0.0, worst = 0.0;
        std::size_t cells = 0;
        while (true) {
            bn::Assignment a;
            for (std::size_t i = 0; i < states.size(); ++i) a[spec.nodes[i].name] = states[i];
            const double p = bn::joint_probability(spec, a);
            worst = std::max(worst, std::abs(p - oracle.joint(states)));
            total += p;
            ++cells;
            std::size_t i = states.size();
            while (i > 0 && ++states[i - 1] == spec.nodes[i - 1].states.size()) states[--i] = 0;
            if (i == 0) break;
        }
        CHECK(cells == 6912);
        CHECK(worst < 1e-15);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }

    SUBCASE("a fixed cell of the default network") {
        // Present, Absent, Wound, Normal, Amputation, Normal, Closed, Absent, Abnormal
        const bn::Assignment a{{"SevereHemorrhage", 0}, {"RespiratoryDistress", 1}, {"HeadTrauma", 0},
                               {"TorsoTrauma", 1},      {"LowerExtTrauma", 1},      {"UpperExtTrauma", 2},
                               {"OcularAlertness", 1},  {"VerbalAlertness", 2},     {"MotorAlertness", 1}};
        CHECK(bn::joint_probability(triage::default_network(), a) == doctest::Approx(0.001161416221875).epsilon(1e-12));
    }
}

TEST_CASE("forward_sample") {
    SUBCASE("deterministic network yields its unique assignment") {
        bn::NetworkSpec spec{"d", "1",
                             {make_node("A", {"x", "y", "z"}, {}, {{0, 0, 1}}),
                              make_node("B", {"x", "y"}, {"A"}, {{1, 0}, {1, 0}, {0, 1}})}};
        for (std::uint64_t seed : {0u, 1u, 99u, 12345u}) {
            CHECK(bn::forward_sample(spec, seed) == bn::Assignment{{"A", 2}, {"B", 1}});
        }
    }
    SUBCASE("frequency of state 1 over 100000 samples") {
        const auto spec = testing::single_node_network();
        std::mt19937_64 rng(2024);
        int hits = 0;
        for (int i = 0; i < 100000; ++i) hits += bn::forward_sample(spec, rng).at("A") == 1;
        CHECK(std::abs(hits / 100000.0 - 0.7) < 0.01);
    }
    SUBCASE("reproducible for a fixed seed") {
        const auto spec = triage::default_network();
        for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK(bn::forward_sample(spec, seed) == bn::forward_sample(spec, seed));
    }
    SUBCASE("samples are drawn from the joint") {
        // Empirical P(SevereHemorrhage=Present) against the oracle's 0.415440075.
        const auto spec = triage::default_network();
        std::mt19937_64 rng(7);
        int hits = 0;
        for (int i = 0; i < 100000; ++i) hits += bn::forward_sample(spec, rng).at("SevereHemorrhage") == 0;
        CHECK(std::abs(hits / 100000.0 - 0.415440075) < 0.01);
    }
}

TEST_CASE("serialization") {
    SUBCASE("the shipped file is already canonical") {
        const auto text = read_text(CHIRON_DATA_DIR "/chiron-default.bn.json");
        CHECK(bn::serialize_network(bn::parse_network(text)) == text);
    }
    SUBCASE("single-node canonical text round-trips byte for byte") {
        CHECK(bn::serialize_network(bn::parse_network(testing::kSingleNodeText)) == testing::kSingleNodeText);
    }
    SUBCASE("canonicalization is idempotent and preserves the network") {
        const std::string messy = R"({"nodes":[{"cpt":[[0.1000000000000001,0.9]],"parents":[],"states":["a","b"],
            "name":"A"}],"version":"2","name":"m"})";
        const auto once = bn::serialize_network(bn::parse_network(messy));
        CHECK(bn::serialize_network(bn::parse_network(once)) == once);
        CHECK(once.find("\"name\": \"m\"") < once.find("\"nodes\""));
    }
    SUBCASE("random networks round-trip") {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            const auto spec = testing::random_network(seed);
            const auto text = bn::serialize_network(spec);
            const auto back = bn::parse_network(text);
            CHECK(bn::serialize_network(back) == text);
            for (std::size_t i = 0; i < spec.nodes.size(); ++i) {
                for (std::size_t r = 0; r < spec.nodes[i].cpt.rows.size(); ++r) {
                    for (std::size_t s = 0; s < spec.nodes[i].states.size(); ++s) {
                        CHECK(std::abs(back.nodes[i].cpt.rows[r][s] - spec.nodes[i].cpt.rows[r][s]) < 1e-11);
                    }
                }
            }
        }
    }
}

TEST_CASE("indexed network topological order respects parents") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const auto spec = testing::random_network(seed);
        const bn::IndexedNetwork net(spec);
        std::vector<std::size_t> position(net.size());
        const auto order = net.topological_order();
        REQUIRE(order.size() == net.size());
        for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
        for (std::size_t v = 0; v < net.size(); ++v) {
            for (auto p : net.parents(v)) CHECK(position[p] < position[v]);
        }
    }
}

}  // TEST_SUITE
