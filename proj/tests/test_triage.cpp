#include <doctest.h>

#include <set>

#include "chiron/bn/inference.hpp"
#include "chiron/error.hpp"
#include "chiron/triage/model.hpp"
#include "chiron/triage/vitals.hpp"
#include "support/brute_force.hpp"

using namespace chiron;
using triage::BandTag;
using triage::VitalField;

namespace {

double cpt_entry(const bn::NetworkSpec& spec, std::string_view node, std::vector<std::size_t> parents,
                 std::size_t state) {
    const auto& n = spec.node(node);
    return n.cpt.rows.at(bn::cpt_row_index(spec, n, parents)).at(state);
}

}  // namespace

TEST_SUITE("triage-model") {

TEST_CASE("vital vocabulary") {
    CHECK(triage::kAllVitals.size() == 9);
    const std::vector<std::pair<std::string_view, std::vector<std::string_view>>> expected{
        {"SevereHemorrhage", {"Present", "Absent"}},
        {"RespiratoryDistress", {"Present", "Absent"}},
        {"HeadTrauma", {"Wound", "Normal"}},
        {"TorsoTrauma", {"Wound", "Normal"}},
        {"LowerExtTrauma", {"Wound", "Amputation", "Normal"}},
        {"UpperExtTrauma", {"Wound", "Amputation", "Normal"}},
        {"OcularAlertness", {"Open", "Closed", "NT"}},
        {"VerbalAlertness", {"Normal", "Abnormal", "Absent", "NT"}},
        {"MotorAlertness", {"Normal", "Abnormal", "Absent", "NT"}},
    };
    for (std::size_t i = 0; i < 9; ++i) {
        const auto v = triage::kAllVitals[i];
        CHECK(triage::vital_name(v) == expected[i].first);
        CHECK(triage::vital_from_name(expected[i].first) == v);
        const auto states = triage::vital_states(v);
        CHECK(std::vector<std::string_view>(states.begin(), states.end()) == expected[i].second);
    }
    CHECK_FALSE(triage::vital_from_name("HeartRate"));
    CHECK(triage::vital_state_index(VitalField::LowerExtTrauma, "Amputation") == 1u);
    CHECK_FALSE(triage::vital_state_index(VitalField::HeadTrauma, "Amputation"));
    CHECK(triage::vital_group(VitalField::UpperExtTrauma) == triage::VitalGroup::Trauma);
    CHECK(triage::vital_group(VitalField::OcularAlertness) == triage::VitalGroup::Alertness);
}

TEST_CASE("default network structure") {
    const auto spec = triage::default_network();
    CHECK(bn::validate_network(spec).empty());
    REQUIRE(spec.nodes.size() == 9);
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& n : spec.nodes) {
        for (const auto& p : n.parents) edges.emplace(p, n.name);
    }
    const std::set<std::pair<std::string, std::string>> expected{
        {"LowerExtTrauma", "SevereHemorrhage"}, {"UpperExtTrauma", "SevereHemorrhage"},
        {"TorsoTrauma", "SevereHemorrhage"},    {"TorsoTrauma", "RespiratoryDistress"},
        {"HeadTrauma", "OcularAlertness"},      {"HeadTrauma", "VerbalAlertness"},
        {"HeadTrauma", "MotorAlertness"},       {"SevereHemorrhage", "VerbalAlertness"},
        {"SevereHemorrhage", "MotorAlertness"},
    };
    CHECK(edges == expected);
    for (auto v : triage::kAllVitals) {
        const auto& node = spec.node(triage::vital_name(v));
        const auto states = triage::vital_states(v);
        CHECK(node.states == std::vector<std::string>(states.begin(), states.end()));
    }
    CHECK_NOTHROW(triage::require_vital_nodes(spec));
}

TEST_CASE("every CPT entry of the default network is positive") {
    for (const auto& n : triage::default_network().nodes) {
        for (const auto& row : n.cpt.rows) {
            for (double p : row) CHECK(p > 0.0);
        }
    }
}

TEST_CASE("CPT anchors") {
    const auto spec = triage::default_network();
    CHECK(cpt_entry(spec, "OcularAlertness", {0}, 1) == 0.7);
    const double hem = cpt_entry(spec, "SevereHemorrhage", {1, 2, 1}, 0);
    CHECK(hem >= 0.80);
    CHECK(hem <= 0.95);
}

TEST_CASE("monotone influence of the modeled links") {
    const auto spec = triage::default_network();
    const auto prior = bn::posterior_all(spec, {});
    const auto head = bn::posterior_all(spec, {{"HeadTrauma", 0}});
    CHECK(head[6].distribution[1] > prior[6].distribution[1]);
    const auto amputation = bn::posterior_all(spec, {{"LowerExtTrauma", 1}});
    CHECK(amputation[0].distribution[0] > prior[0].distribution[0]);
}

TEST_CASE("bidirectional reasoning: hemorrhage raises amputation belief") {
    const auto spec = triage::default_network();
    const double before = bn::eliminate_posterior(spec, {}, "LowerExtTrauma").distribution[1];
    const double after = bn::eliminate_posterior(spec, {{"SevereHemorrhage", 0}}, "LowerExtTrauma").distribution[1];
    CHECK(after > before);
    CHECK(before == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(after == doctest::Approx(0.21520119357767784).epsilon(1e-12));
}

TEST_CASE("convention bands") {
    const auto strong = triage::convention_band(BandTag::Strong);
    CHECK(strong.low == 0.80);
    CHECK(strong.high == 0.95);
    const auto moderate = triage::convention_band(BandTag::Moderate);
    CHECK(moderate.low == 0.40);
    CHECK(moderate.high == 0.60);
    const auto weak = triage::convention_band(BandTag::Weak, 0.3);
    CHECK(weak.contains(0.2));
    CHECK(weak.contains(0.4));
    CHECK_FALSE(weak.contains(0.41));
    CHECK(strong.contains(0.8));
    CHECK_FALSE(strong.contains(0.79));
    CHECK(triage::band_tag_from_string("Moderate") == BandTag::Moderate);
    CHECK_THROWS_AS(triage::band_tag_from_string("Medium"), Error);
}

TEST_CASE("validate_convention") {
    const auto spec = triage::default_network();

    SUBCASE("shipped model and annotations are clean") {
        const auto annotations = triage::default_annotations();
        CHECK(annotations.size() == 9);
        CHECK(triage::validate_convention(spec, annotations).empty());
    }

    SUBCASE("unconstrained parents are averaged at their priors") {
        const triage::LinkAnnotation a{"SevereHemorrhage", "Present", {{"LowerExtTrauma", "Amputation"}}, BandTag::Strong};
        CHECK(triage::annotated_entry(spec, a) == doctest::Approx(0.894032).epsilon(1e-12));
    }

    SUBCASE("strong annotation against an entry of 0.5") {
        auto edited = spec;
        auto& hem = edited.nodes[0];
        const auto row = bn::cpt_row_index(edited, hem, std::vector<std::size_t>{1, 2, 1});
        hem.cpt.rows[row] = {0.5, 0.5};
        const std::vector<triage::LinkAnnotation> annotations{
            {"SevereHemorrhage",
             "Present",
             {{"LowerExtTrauma", "Amputation"}, {"UpperExtTrauma", "Normal"}, {"TorsoTrauma", "Normal"}},
             BandTag::Strong}};
        const auto violations = triage::validate_convention(edited, annotations);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].entry == 0.5);
        CHECK(violations[0].band.tag == BandTag::Strong);
        CHECK(violations[0].message.find("SevereHemorrhage") != std::string::npos);
        CHECK(violations[0].message.find("Strong") != std::string::npos);
    }

    SUBCASE("weak annotation equal to the baseline") {
        // VerbalAlertness=NT is 0.05 in every row and in the prior.
        const std::vector<triage::LinkAnnotation> annotations{
            {"VerbalAlertness", "NT", {{"HeadTrauma", "Wound"}}, BandTag::Weak}};
        CHECK(triage::validate_convention(spec, annotations).empty());
    }

    SUBCASE("unresolvable references") {
        CHECK_THROWS_AS(triage::validate_convention(
                            spec, std::vector<triage::LinkAnnotation>{{"Pulse", "High", {}, BandTag::Weak}}),
                        Error);
        CHECK_THROWS_AS(triage::validate_convention(spec, std::vector<triage::LinkAnnotation>{
                                                              {"OcularAlertness", "Blink", {}, BandTag::Weak}}),
                        Error);
        CHECK_THROWS_AS(triage::validate_convention(
                            spec, std::vector<triage::LinkAnnotation>{
                                      {"OcularAlertness", "Closed", {{"TorsoTrauma", "Wound"}}, BandTag::Weak}}),
                        Error);
    }
}

TEST_CASE("annotation file parsing") {
    const auto parsed = triage::parse_annotations(
        R"([{"child": "OcularAlertness", "child_state": "Closed", "given": {"HeadTrauma": "Wound"}, "tag": "Weak"}])");
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].given.at("HeadTrauma") == "Wound");
    CHECK(parsed[0].tag == BandTag::Weak);
    CHECK_THROWS_AS(triage::parse_annotations("[{\"child\": 1}]"), Error);
}

TEST_CASE("require_vital_nodes rejects a model missing a vital") {
    auto spec = triage::default_network();
    spec.nodes.pop_back();
    try {
        triage::require_vital_nodes(spec);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownModel);
    }
}

}  // TEST_SUITE
