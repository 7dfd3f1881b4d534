// Copyright 2026 The intentsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include "intentsim/metrics/metrics.hpp"
#include "intentsim/util/digest.hpp"
#include "intentsim/util/json_io.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace intentsim;
using namespace intentsim::testing;

namespace {

const NodeList kFour{{"1", "root"}, {"1.1", "a"}, {"1.2", "b"}, {"1.3", "c"}, {"1.4", "d"}};

Transcript ended(const IntentForest& f, std::set<NodeId> discovered, std::set<NodeId> emerging = {},
                 int trial = 0, const std::string& artifact = "x") {
    Transcript t;
    t.forest_document = forest_to_document(f);
    t.forest_ref = sha256_hex(canonical_dump(t.forest_document));
    t.artifact_id = artifact;
    t.trial = trial;
    t.initial_state = f.snapshot();
    discovered.insert("1");
    t.end_state = {std::move(discovered), std::move(emerging), {}};
    t.complete = true;
    return t;
}

std::string fenced(const Json& j) { return fenced_json(j); }

Transcript short_conversation(int turns) {
    NullPolicy null;
    SimulationConfig c;
    c.max_turns = turns;
    c.elicit_final_artifact = false;
    return run_conversation(chain_forest(2), null, rule_simulator(), c, {"chain", 0, 1});
}

}  // namespace

TEST_CASE("normalized discovery: emerging nodes earn half credit inside the span") {
    const auto f = make_forest(kFour, {"1"});
    const ModelRunSet runs{{"A", {ended(f, {"1.1", "1.2"}, {"1.3"})}},
                           {"B", {ended(f, {"1.1"}, {"1.4"})}},
                           {"C", {ended(f, {"1.1", "1.2", "1.3"})}}};
    const auto r = discovery_score(runs);
    CHECK(r.score.at("A") == 0.75);
    CHECK(r.score.at("B") == 0.0);
    CHECK(r.score.at("C") == 1.0);
    CHECK(r.skipped.empty());

    const auto u = discovery_score(runs, true);
    CHECK(u.score.at("A") == doctest::Approx(2.5 / 4).epsilon(1e-12));
    CHECK(u.score.at("B") == doctest::Approx(1.5 / 4).epsilon(1e-12));
}

TEST_CASE("normalized discovery skips degenerate instances and averages the rest") {
    const auto f = make_forest(kFour, {"1"});
    const ModelRunSet runs{{"A", {ended(f, {"1.1"}, {}, 0), ended(f, {"1.1"}, {"1.2"}, 1)}},
                           {"B", {ended(f, {}, {}, 0), ended(f, {"1.1"}, {}, 1)}}};
    const auto r = discovery_score(runs);
    CHECK(r.score.at("A") == 1.0);
    CHECK(r.score.at("B") == 0.0);
    CHECK(r.instances.at("A") == 1);
    CHECK(r.skipped == std::vector<std::string>{"x#1"});
}

TEST_CASE("discovery score preconditions") {
    const auto f = make_forest(kFour, {"1"});
    const auto g = make_forest({{"1", "other"}, {"1.1", "z"}}, {"1"});
    CHECK_THROWS_AS(discovery_score({{"A", {ended(f, {"1.1"})}}}), PreconditionError);
    CHECK_NOTHROW(discovery_score({{"A", {ended(f, {"1.1"})}}}, true));
    CHECK_THROWS_AS(discovery_score({{"A", {ended(f, {"1.1"})}}, {"B", {ended(f, {"1.1"}, {}, 1)}}}),
                    PreconditionError);
    CHECK_THROWS_AS(discovery_score({{"A", {ended(f, {"1.1"})}}, {"B", {ended(g, {"1.1"})}}}),
                    PreconditionError);
    CHECK_THROWS_AS(discovery_score({}), PreconditionError);
}

TEST_CASE("property: normalized discovery agrees with the mask oracle") {
    Rng rng(404);
    const auto f = make_forest(kFour, {"1"});
    const std::vector<NodeId> universe{"1.1", "1.2", "1.3", "1.4"};
    for (int round = 0; round < 500; ++round) {
        std::map<std::string, oracle::MaskOutcome> masks;
        std::map<std::string, DiscoveryOutcome> outcomes;
        const int models = 2 + static_cast<int>(rng.below(3));
        for (int m = 0; m < models; ++m) {
            const std::string name(1, static_cast<char>('A' + m));
            oracle::MaskOutcome mask;
            DiscoveryOutcome o;
            o.universe = {universe.begin(), universe.end()};
            for (std::size_t i = 0; i < universe.size(); ++i) {
                const auto roll = rng.below(3);
                if (roll == 0) {
                    mask.discovered |= 1ULL << i;
                    o.discovered.insert(universe[i]);
                } else if (roll == 1) {
                    mask.emerging |= 1ULL << i;
                    o.emerging.insert(universe[i]);
                }
            }
            masks[name] = mask;
            outcomes[name] = o;
        }
        std::map<std::string, double> expected;
        const bool scored = oracle::instance_discovery(masks, expected);
        for (const auto& [name, o] : outcomes) {
            bool degenerate = false;
            const double got = normalized_discovery(outcomes, name, &degenerate);
            CHECK(degenerate == !scored);
            if (scored) {
                CHECK(got == expected.at(name));
                CHECK(got >= 0.0);
                CHECK(got <= 1.0);
            }
        }
    }
}

TEST_CASE("satisfaction score drops leaves every model satisfied") {
    const InstanceKey k{"x", 0};
    const SatisfactionInput input{{"A", {{k, {{"1.1", 5}, {"1.2", 2}, {"1.3", 4}, {"1.4", std::nullopt}}}}},
                                  {"B", {{k, {{"1.1", 1}, {"1.2", 3}, {"1.3", 5}, {"1.4", 5}}}}}};
    const auto r = satisfaction_score(input);
    CHECK(r.score.at("A") == 0.5);
    CHECK(r.score.at("B") == 0.0);
    CHECK(r.unscored_leaves == 1);
    CHECK(r.excluded_leaves == 1);

    const SatisfactionInput all_five{{"A", {{k, {{"1.1", 5}}}}}, {"B", {{k, {{"1.1", 5}}}}}};
    const auto s = satisfaction_score(all_five);
    CHECK(s.skipped == std::vector<std::string>{"x#0"});
    CHECK(s.score.at("A") == 0.0);

    const SatisfactionInput missing{{"A", {{k, {{"1.1", 5}}}}}, {"B", {}}};
    CHECK_THROWS_AS(satisfaction_score(missing), PreconditionError);
}

TEST_CASE("judge_satisfaction") {
    const auto f = make_forest(kFour, {"1"});
    auto t = ended(f, {});
    auto backend = std::make_shared<ScriptedBackend>(std::vector<ScriptedBackend::Entry>{
        fenced({{"evaluations",
                 {{{"requirement_id", "1.1"}, {"score", 5}},
                  {{"requirement_id", "1.2"}, {"score", 7}},
                  {{"requirement_id", "1.3"}, {"score", 2}},
                  {{"requirement_id", "9"}, {"score", 2}}}}})});
    const auto judge = scripted_client(backend);

    SUBCASE("scores valid entries") {
        t.final_artifact = "a story about a cat";
        const auto s = judge_satisfaction(t, judge, "judge-satisfaction/t");
        CHECK(s.at("1.1") == std::optional<int>(5));
        CHECK_FALSE(s.at("1.2").has_value());
        CHECK(s.at("1.3") == std::optional<int>(2));
        CHECK_FALSE(s.at("1.4").has_value());
        CHECK(s.size() == 4);
        CHECK(backend->calls()[0].messages[0].text.find("a story about a cat") != std::string::npos);
    }
    SUBCASE("empty artifact scores 1 without a call") {
        t.final_artifact = "  ";
        const auto s = judge_satisfaction(t, judge, "judge-satisfaction/t");
        for (const auto& [leaf, score] : s) CHECK(score == std::optional<int>(1));
        CHECK(backend->call_count() == 0);
    }
    SUBCASE("missing artifact leaves every leaf unscored") {
        const auto s = judge_satisfaction(t, judge, "judge-satisfaction/t");
        for (const auto& [leaf, score] : s) CHECK_FALSE(score.has_value());
        CHECK(backend->call_count() == 0);
    }
}

TEST_CASE("interactivity rescaling") {
    CHECK(rescale_interactivity(3).score == 1.0);
    CHECK(rescale_interactivity(1).score == 0.0);
    CHECK(rescale_interactivity(2.5).score == 0.75);
    const auto high = rescale_interactivity(4);
    CHECK(high.score == 1.0);
    CHECK(high.clamped);
    CHECK(high.raw == 4.0);
    CHECK(rescale_interactivity(0).score == 0.0);
    CHECK_FALSE(rescale_interactivity(2).clamped);

    const auto t = short_conversation(2);
    auto ok = std::make_shared<ScriptedBackend>(std::vector<ScriptedBackend::Entry>{fenced({{"interactivity", 2.5}})});
    CHECK(interactivity_score(t, scripted_client(ok), "judge-interactivity/t").score == 0.75);
    auto bad = std::make_shared<ScriptedBackend>(std::vector<ScriptedBackend::Entry>{"no", "still no"});
    const auto failed = interactivity_score(t, scripted_client(bad), "judge-interactivity/t");
    CHECK_FALSE(failed.parsed);
    const auto prompt = ok->calls()[0].messages[0].text;
    CHECK(prompt.find("{chat_history}") == std::string::npos);
}

TEST_CASE("classify_turns maps annotator labels per turn") {
    const auto t = short_conversation(3);
    auto backend = std::make_shared<ScriptedBackend>(std::vector<ScriptedBackend::Entry>{fenced_yaml(
        {{"labels", {{{"turn", 1}, {"label", "Single"}}, {{"turn", 2}, {"label", "multiple"}}, {{"turn", 7}, {"label", "single"}}}}})});
    const auto labels = classify_turns(t, scripted_client(backend), "behavior-annotation/t");
    REQUIRE(labels.size() == 3);
    CHECK(labels[0] == TurnLabel::Convergent);
    CHECK(labels[1] == TurnLabel::Divergent);
    CHECK(labels[2] == TurnLabel::Unknown);
}

TEST_CASE("trigram distribution") {
    const auto h1 = trigram_distribution(parse_labels("CCCCC"));
    CHECK(h1.ccc == 3);
    CHECK(h1.total() == 3);
    const auto h2 = trigram_distribution(parse_labels("CDCDC"));
    CHECK(h2.alternating == 3);
    const auto h3 = trigram_distribution(parse_labels("CCDDD"));
    CHECK(h3.two_consecutive == 2);
    CHECK(h3.ddd == 1);
    const auto h4 = trigram_distribution(parse_labels("CC?CC"));
    CHECK(h4.skipped == 3);
    CHECK(h4.total() == 0);
    CHECK_THROWS_AS(trigram_distribution(parse_labels("CD")), PreconditionError);
    CHECK_THROWS_AS(parse_labels("CX"), PreconditionError);
}

TEST_CASE("property: trigram histogram matches the enumerated oracle") {
    Rng rng(9);
    for (int round = 0; round < 300; ++round) {
        std::string letters;
        const auto n = 3 + rng.below(10);
        for (std::uint64_t i = 0; i < n; ++i) letters += rng.below(2) == 0 ? 'C' : 'D';
        const auto h = trigram_distribution(parse_labels(letters));
        const auto expected = oracle::trigram_counts(letters);
        CAPTURE(letters);
        CHECK(h.ccc == expected.at("CCC"));
        CHECK(h.ddd == expected.at("DDD"));
        CHECK(h.two_consecutive == expected.at("two"));
        CHECK(h.alternating == expected.at("alt"));
        CHECK(h.total() == static_cast<int>(n) - 2);
    }
}

TEST_CASE("unnormalized discovery and token means") {
    const auto f = make_forest(kFour, {"1"});
    CHECK(unnormalized_discovery(ended(f, {"1.1", "1.2", "1.3", "1.4"})) == 1.0);
    CHECK(unnormalized_discovery(ended(f, {})) == 0.0);
    const auto single = make_forest({{"1", "only"}}, {"1"});
    CHECK(unnormalized_discovery(ended(single, {})) == 0.0);
    CHECK(mean_output_tokens({short_conversation(2)}) == 0.0);
}
