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

// Acceptance gate: one PASS/FAIL line per criterion, tolerances and time limits
// pinned below. Exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include "intentsim/builder/hierarchy_builder.hpp"
#include "intentsim/cli/commands.hpp"
#include "intentsim/cli/config.hpp"
#include "intentsim/dataset/dataset.hpp"
#include "intentsim/metrics/metrics.hpp"
#include "intentsim/util/digest.hpp"
#include "intentsim/util/json_io.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace intentsim;
using namespace intentsim::testing;

namespace {

constexpr double kPenaltyTolerance = 1e-12;
constexpr double kThresholdTolerance = 1e-12;
constexpr double kAc1Seconds = 1.0;
constexpr double kAc2Seconds = 60.0;
constexpr double kAc3Seconds = 5.0;
constexpr double kAc4Seconds = 5.0;
constexpr double kAc5Seconds = 1.0;
constexpr int kAc2Conversations = 1000;
constexpr int kAc2MaxNodes = 20;
constexpr int kAc2Turns = 5;
constexpr int kAc4RunSets = 200;
constexpr int kAc7Repeats = 3;
constexpr const char* kLiveConfigEnv = "INTENTSIM_LIVE_CONFIG";

// Collects the first few failure messages of one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (notes_.size() < 3) notes_.push_back(what);
    }
    bool ok() const { return failures_ == 0; }
    std::string detail() const {
        std::string out = std::to_string(failures_) + " failure(s)";
        for (const auto& n : notes_) out += "; " + n;
        return out;
    }

private:
    int failures_ = 0;
    std::vector<std::string> notes_;
};

struct Outcome {
    std::string status;  // PASS, FAIL or SKIP
    std::string detail;
};

Outcome verdict(const Check& c, const std::string& pass_detail) {
    return c.ok() ? Outcome{"PASS", pass_detail} : Outcome{"FAIL", c.detail()};
}

std::string num(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

std::vector<std::pair<std::string, IntentForest>> fixture_forests() {
    std::vector<std::pair<std::string, IntentForest>> out;
    for (const char* name : {"harbor_story.txt", "budget_email.md"}) {
        const auto artifact = read_text_file(fixture_dir() / "artifacts" / name);
        const auto built = build_forest(artifact, "text", name, rule_client(), {4, 17});
        out.emplace_back(name, built.forest);
    }
    return out;
}

SimulationConfig sim_config(int turns, bool elicit = false) {
    SimulationConfig c;
    c.max_turns = turns;
    c.p = 0.25;
    c.elicit_final_artifact = elicit;
    return c;
}

Outcome ac1() {
    Check c;
    for (const auto& [tokens, expected] : oracle::penalty_table()) {
        const double got = efficiency_penalty(tokens, 250.0, 1e-3);
        c.expect(std::abs(got - expected) <= kPenaltyTolerance,
                 "tokens " + std::to_string(tokens) + ": " + num(got) + " vs " + num(expected));
    }
    c.expect(efficiency_penalty(1249, 250.0, 1e-3) > -1.0, "cap reached before 1250 tokens");
    c.expect(efficiency_penalty(1250, 250.0, 1e-3) == -1.0, "cap not reached at 1250 tokens");
    return verdict(c, std::to_string(oracle::penalty_table().size()) + " grid points within 1e-12");
}

Outcome ac2() {
    Check c;
    Rng rng(20260);
    long turns_checked = 0;
    for (int conv = 0; conv < kAc2Conversations; ++conv) {
        auto f = random_forest(rng, kAc2MaxNodes);
        for (int turn = 0; turn < kAc2Turns; ++turn) {
            std::map<NodeId, DiscoveryStatus> before_state;
            for (const auto& n : f.nodes()) before_state[n.id] = n.state;
            const auto before = f.snapshot();
            const auto delta = apply_updates(f, random_legal_evaluation(f, rng), 0.25);
            const auto after = f.snapshot();
            ++turns_checked;
            const std::string where = "conversation " + std::to_string(conv) + " turn " + std::to_string(turn + 1);
            for (const auto& n : f.nodes()) {
                c.expect(static_cast<int>(n.state) >= static_cast<int>(before_state[n.id]), where + ": " + n.id + " regressed");
                if (n.parent && n.state != DiscoveryStatus::Undiscovered) {
                    c.expect(f.node(*n.parent).state == DiscoveryStatus::Discovered,
                             where + ": " + n.id + " ahead of its parent");
                }
                c.expect(!n.satisfied || n.state == DiscoveryStatus::Discovered, where + ": " + n.id + " satisfied but not Discovered");
                c.expect(n.threshold >= 0.0 && n.threshold <= n.initial_threshold, where + ": " + n.id + " threshold out of range");
            }
            c.expect(delta.discovery_gain ==
                         static_cast<int>(after.discovered.size()) - static_cast<int>(before.discovered.size()),
                     where + ": discovery_gain mismatch");
        }
    }
    return verdict(c, std::to_string(kAc2Conversations) + " conversations, " + std::to_string(turns_checked) + " turns");
}

Outcome ac3() {
    Check c;
    std::vector<std::pair<std::string, IntentForest>> forests;
    for (int d = 1; d <= 6; ++d) forests.emplace_back("chain" + std::to_string(d), chain_forest(d));
    for (auto& f : fixture_forests()) forests.push_back(std::move(f));

    for (const auto& [name, f] : forests) {
        // One tree is evaluated per turn, so a forest needs the sum of its tree depths.
        int bound = 0;
        for (const auto& root : f.root_ids()) bound += f.tree_depth(root);
        OraclePolicy oracle;
        NullPolicy null;
        const auto o = run_conversation(f, oracle, rule_simulator(), sim_config(bound), {name, 0, 1});
        const auto n = run_conversation(f, null, rule_simulator(), sim_config(bound), {name, 0, 1});
        c.expect(o.complete && o.end_state.discovered.size() == f.size(),
                 name + ": oracle discovered " + std::to_string(o.end_state.discovered.size()) + "/" +
                     std::to_string(f.size()) + " in " + std::to_string(bound) + " turns");
        int null_rd = 0;
        for (const auto& t : n.turns) null_rd += t.reward.r_d;
        c.expect(null_rd == 0, name + ": null r_d = " + std::to_string(null_rd));
        const bool has_hidden = f.snapshot().discovered.size() < f.size();
        if (has_hidden) {
            c.expect(unnormalized_discovery(o) == 1.0, name + ": oracle unnormalized " + num(unnormalized_discovery(o)));
            c.expect(unnormalized_discovery(n) == 0.0, name + ": null unnormalized " + num(unnormalized_discovery(n)));
        }
        if (f.root_ids().size() == 1) {
            c.expect(static_cast<std::size_t>(bound) == f.depth(), name + ": single-tree bound differs from depth");
        }
    }
    return verdict(c, std::to_string(forests.size()) + " forests (6 chains, 2 built fixtures)");
}

// Independent per-instance score by bitmask arithmetic, averaged in instance order.
Outcome ac4() {
    Check c;
    Rng rng(4404);
    int bound_cases = 0;
    for (int set = 0; set < kAc4RunSets; ++set) {
        ModelRunSet runs;
        std::map<std::string, double> oracle_sum;
        std::map<std::string, int> oracle_count;
        const int instances = 1 + static_cast<int>(rng.below(4));
        for (int inst = 0; inst < instances; ++inst) {
            auto f = random_forest(rng, 16);
            const auto initial = f.snapshot();
            std::vector<NodeId> universe;
            for (const auto& n : f.nodes()) {
                if (!initial.discovered.contains(n.id)) universe.push_back(n.id);
            }
            const Json doc = forest_to_document(f);
            std::map<std::string, oracle::MaskOutcome> masks;
            for (const char* model : {"A", "B", "C"}) {
                oracle::MaskOutcome m;
                Transcript t;
                t.forest_document = doc;
                t.forest_ref = sha256_hex(canonical_dump(doc));
                t.artifact_id = "set" + std::to_string(set);
                t.trial = inst;
                t.initial_state = initial;
                t.end_state.discovered = initial.discovered;
                for (std::size_t i = 0; i < universe.size(); ++i) {
                    const auto roll = rng.below(3);
                    if (roll == 0) {
                        m.discovered |= 1ULL << i;
                        t.end_state.discovered.insert(universe[i]);
                    } else if (roll == 1) {
                        m.emerging |= 1ULL << i;
                        t.end_state.emerging.insert(universe[i]);
                    }
                }
                masks[model] = m;
                runs[model].push_back(std::move(t));
            }
            // Bound cases: a model equal to the intersection scores 0, to the union 1.
            if (inst == 0 && set % 4 == 0) {
                const auto all = masks["A"].discovered & masks["B"].discovered & masks["C"].discovered;
                const auto any = masks["A"].discovered | masks["B"].discovered | masks["C"].discovered;
                const char* target = set % 8 == 0 ? "A" : "C";
                const std::uint64_t value = set % 8 == 0 ? all : any;
                masks[target] = {value, 0};
                auto& t = runs[target].back();
                t.end_state.discovered = initial.discovered;
                t.end_state.emerging.clear();
                for (std::size_t i = 0; i < universe.size(); ++i) {
                    if (value & (1ULL << i)) t.end_state.discovered.insert(universe[i]);
                }
            }
            std::map<std::string, double> scores;
            if (oracle::instance_discovery(masks, scores)) {
                if (inst == 0 && set % 4 == 0) {
                    ++bound_cases;
                    const char* target = set % 8 == 0 ? "A" : "C";
                    c.expect(scores[target] == (set % 8 == 0 ? 0.0 : 1.0), "oracle bound case wrong");
                }
                for (const auto& [model, s] : scores) {
                    oracle_sum[model] += s;
                    ++oracle_count[model];
                }
            }
        }
        const auto report = discovery_score(runs);
        for (const char* model : {"A", "B", "C"}) {
            const double expected = oracle_count[model] > 0 ? oracle_sum[model] / oracle_count[model] : 0.0;
            c.expect(report.score.at(model) == expected,
                     "set " + std::to_string(set) + " model " + model + ": " + num(report.score.at(model)) + " vs " + num(expected));
        }
    }
    c.expect(bound_cases > 10, "too few bound cases exercised: " + std::to_string(bound_cases));
    return verdict(c, std::to_string(kAc4RunSets) + " run sets exact, " + std::to_string(bound_cases) + " bound cases");
}

Outcome ac5() {
    Check c;
    struct Case {
        const char* labels;
        TrigramHistogram expected;
    };
    const std::vector<Case> cases{{"CCCCC", {3, 0, 0, 0, 0}},
                                  {"CDCDC", {0, 0, 0, 3, 0}},
                                  {"CCDDD", {0, 1, 2, 0, 0}},
                                  {"DDDDD", {0, 3, 0, 0, 0}}};
    for (const auto& k : cases) {
        const auto got = trigram_distribution(parse_labels(k.labels));
        c.expect(got == k.expected, std::string(k.labels) + " histogram mismatch");
        const auto hand = oracle::trigram_counts(k.labels);
        c.expect(hand.at("CCC") == got.ccc && hand.at("DDD") == got.ddd && hand.at("two") == got.two_consecutive &&
                     hand.at("alt") == got.alternating,
                 std::string(k.labels) + " disagrees with the enumerated oracle");
    }
    return verdict(c, "4 sequences exact");
}

Outcome ac6() {
    Check c;
    // Direct updater trace.
    auto f = make_forest({{"1", "root"}, {"1.1", "child"}}, {"1"}, {{"1.1", 0.7}});
    auto probe = [](std::vector<std::string> variants) {
        EvaluationResult e;
        e.classification = Classification::Artifact;
        e.evaluation_type = EvaluationType::Satisfaction;
        e.frontier_tree = "1";
        e.judgments = {{"1", true, {}, "", true}, {"1.1", false, std::move(variants), "", false}};
        return e;
    };
    apply_updates(f, probe({"child x"}), 0.25);
    c.expect(std::abs(f.node("1.1").threshold - 0.45) <= kThresholdTolerance,
             "after one variant: theta = " + num(f.node("1.1").threshold));
    c.expect(f.node("1.1").state == DiscoveryStatus::Undiscovered, "advanced on a sub-threshold exposure");
    apply_updates(f, probe({"child x", "child y"}), 0.25);
    c.expect(f.node("1.1").state == DiscoveryStatus::Emerging, "two variants at theta 0.45 did not advance");
    c.expect(f.node("1.1").threshold == 0.7, "threshold not reset: " + num(f.node("1.1").threshold));

    // Same trajectory through a scripted conversation and the rule evaluator.
    auto g = chain_forest(2);
    g.node("1.1").threshold = g.node("1.1").initial_threshold = 0.7;
    const std::string one = "includes an animal level1\nincludes an animal pet dog";
    const std::string two = "includes an animal level1\nincludes an animal pet dog\nincludes an animal pet bird";
    ScriptedPolicy scripted({one, two}, std::nullopt);
    const auto t = run_conversation(g, scripted, rule_simulator(), sim_config(2), {"trace", 0, 1});
    c.expect(t.turns.size() == 2, "conversation did not run 2 turns");
    if (t.turns.size() == 2) {
        const auto& d1 = t.turns[0].delta;
        c.expect(d1.threshold_changes.size() == 1 &&
                     std::abs(d1.threshold_changes[0].new_threshold - 0.45) <= kThresholdTolerance,
                 "scripted turn 1 did not lower theta to 0.45");
        const auto& d2 = t.turns[1].delta;
        c.expect(d2.transitions.size() == 1 && d2.transitions[0].to == DiscoveryStatus::Emerging &&
                     d2.transitions[0].cause == TransitionCause::Tangential,
                 "scripted turn 2 did not advance tangentially");
        c.expect(d2.threshold_changes.size() == 1 && d2.threshold_changes[0].new_threshold == 0.7,
                 "scripted turn 2 did not reset theta");
    }
    return verdict(c, "0.7 -> 0.45 -> advance + reset, direct and scripted");
}

Outcome ac7() {
    Check c;
    TempDir dir("intentsim-acceptance-replay");
    const auto artifacts = (fixture_dir() / "artifacts").string();
    const auto cassette = (dir.path() / "cassette.jsonl").string();

    // Replay config: every role points at a closed local port, so any backend
    // call would fail instead of silently reaching a model.
    Json roles = Json::object();
    for (const char* role : {"builder", "evaluator", "user", "judge", "assistant"}) {
        roles[role] = {{"backend", "openai"}, {"model", "rule"}, {"base_url", "http://127.0.0.1:9"}};
    }
    const auto replay_config = dir.path() / "replay.json";
    write_file_atomic(replay_config, Json{{"roles", roles}, {"framework", {{"n_trials", 2}}}}.dump(2));
    const auto record_config = dir.path() / "record.json";
    write_file_atomic(record_config, Json{{"framework", {{"n_trials", 2}}}}.dump(2));

    auto pipeline = [&](const fs::path& out, const std::string& mode, const fs::path& cfg) {
        const std::vector<std::string> common{"--mode", mode, "--cassette", cassette, "--config", cfg.string()};
        auto run = [&](std::vector<std::string> args) {
            args.insert(args.end(), common.begin(), common.end());
            std::string log, err;
            const int code = run_cli_args(args, &log, &err);
            c.expect(code == kExitOk, mode + " " + args[0] + " exited " + std::to_string(code) + ": " + err + log);
        };
        const auto hier = (out / "hierarchies").string();
        run({"build", artifacts, "--out", out.string()});
        run({"simulate", hier, "--policy", "oracle", "--out", (out / "oracle").string()});
        run({"simulate", hier, "--policy", "null", "--out", (out / "null").string()});
        run({"evaluate", "oracle=" + (out / "oracle" / "transcripts").string(),
             "null=" + (out / "null" / "transcripts").string(), "--out", (out / "eval").string()});
        run({"synthesize", hier, "--policy-a", "oracle", "--policy-b", "null", "--out", (out / "synth").string()});
    };

    pipeline(dir.path() / "record", "record", record_config);
    std::vector<std::map<std::string, std::string>> snapshots;
    for (int i = 0; i < kAc7Repeats; ++i) {
        const auto out = dir.path() / ("replay" + std::to_string(i));
        pipeline(out, "replay", replay_config);
        c.expect(fs::is_directory(out), "replay " + std::to_string(i) + " wrote nothing");
        snapshots.push_back(fs::is_directory(out) ? snapshot_tree(out) : std::map<std::string, std::string>{});
    }
    for (int i = 1; i < kAc7Repeats; ++i) {
        c.expect(snapshots[i] == snapshots[0], "replay " + std::to_string(i) + " differs from replay 0");
    }
    c.expect(snapshots[0].size() >= 10, "replay produced only " + std::to_string(snapshots[0].size()) + " files");
    return verdict(c, std::to_string(kAc7Repeats) + " replays byte-identical over " + std::to_string(snapshots[0].size()) +
                          " files");
}

Outcome ac8() {
    Check c;
    std::vector<PreferencePair> pairs;
    for (const auto& [name, f] : fixture_forests()) {
        OraclePolicy strong;
        NullPolicy weak;
        const auto run = run_synthesis(forest_for_trial(f, 0), {&strong, &weak}, rule_simulator(), sim_config(5),
                                       {name, 0, trial_seed(f, 0)});
        c.expect(run.transcript.complete, name + ": synthesis aborted: " + run.transcript.abort_reason);
        pairs.insert(pairs.end(), run.pairs.begin(), run.pairs.end());
    }
    const auto result = emit_dpo(pairs);
    for (const auto& p : result.records) {
        c.expect(p.chosen_reward.total >= p.rejected_reward.total, "pair with chosen < rejected emitted");
    }
    c.expect(result.summary.dropped == 0, std::to_string(result.summary.dropped) + " inverted pairs");
    c.expect(result.summary.emitted > 0, "no pairs emitted");
    c.expect(result.summary.chosen_mean > result.summary.rejected_mean,
             "chosen mean " + num(result.summary.chosen_mean) + " <= rejected mean " + num(result.summary.rejected_mean));
    return verdict(c, std::to_string(result.summary.emitted) + " pairs, chosen mean " + num(result.summary.chosen_mean) +
                          " > rejected mean " + num(result.summary.rejected_mean));
}

// Credentialed smoke run; skipped unless a live configuration is provided.
Outcome ac9() {
    const char* path = std::getenv(kLiveConfigEnv);
    if (!path || !*path) return {"SKIP", std::string(kLiveConfigEnv) + " not set; live smoke excluded from CI"};
    Check c;
    RunConfig config = load_run_config(path);
    config.mode = GatewayMode::Live;
    config.validate();
    const RoleClients clients(config);
    const auto sim = clients.simulator();
    for (const char* name : {"harbor_story.txt", "budget_email.md"}) {
        try {
            const auto artifact = read_text_file(fixture_dir() / "artifacts" / name);
            const auto built = build_forest(artifact, config.artifact_type, name, clients.client("builder"),
                                            {config.framework.abstraction_depth, config.seed});
            GatewayPolicy assistant(clients.client("assistant"), "", "live");
            const auto t = run_conversation(built.forest, assistant, sim, sim_config(5), {name, 0, built.forest.rng_seed});
            int parsed = 0;
            for (const auto& turn : t.turns) parsed += turn.evaluation.warnings.empty() ? 1 : 0;
            c.expect(t.complete && t.turns.size() == 5, std::string(name) + ": did not complete 5 turns");
            c.expect(parsed >= 4, std::string(name) + ": clean verdicts on " + std::to_string(parsed) + "/5 turns");
        } catch (const std::exception& e) {
            c.expect(false, std::string(name) + ": " + e.what());
        }
    }
    return verdict(c, "2 domains, 5 turns each");
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* name;
        std::function<Outcome()> run;
        double limit_seconds;  // 0 = no limit
    };
    const std::vector<Criterion> criteria{
        {"AC1", "reward oracle", ac1, kAc1Seconds},
        {"AC2", "state-machine properties", ac2, kAc2Seconds},
        {"AC3", "oracle/null policy bounds", ac3, kAc3Seconds},
        {"AC4", "normalized discovery equivalence", ac4, kAc4Seconds},
        {"AC5", "trigram analysis", ac5, kAc5Seconds},
        {"AC6", "tangential mechanics", ac6, 0.0},
        {"AC7", "replay determinism", ac7, 0.0},
        {"AC8", "dataset validity", ac8, 0.0},
        {"AC9", "live smoke", ac9, 0.0},
    };
    bool failed = false;
    for (const auto& k : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = k.run();
        } catch (const std::exception& e) {
            o = {"FAIL", std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.status == "PASS" && k.limit_seconds > 0.0 && seconds >= k.limit_seconds) {
            o = {"FAIL", "took " + num(seconds) + " s, limit " + num(k.limit_seconds) + " s"};
        }
        failed = failed || o.status == "FAIL";
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(3);
        line << o.status << " " << k.id << " " << k.name << " (" << seconds << " s): " << o.detail;
        std::cout << line.str() << std::endl;
    }
    return failed ? 1 : 0;
}
