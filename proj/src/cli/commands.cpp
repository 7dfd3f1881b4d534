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

#include "intentsim/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "intentsim/builder/hierarchy_builder.hpp"
#include "intentsim/dataset/dataset.hpp"
#include "intentsim/gateway/prompts.hpp"
#include "intentsim/metrics/metrics.hpp"
#include "intentsim/orchestrator/orchestrator.hpp"

namespace intentsim {

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Returns the first error
// message per index (empty on success).
template <typename Fn>
std::vector<std::string> parallel_for(std::size_t n, int jobs, Fn fn) {
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (const std::exception& e) {
                errors[i] = e.what();
                if (errors[i].empty()) errors[i] = "unknown error";
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
    if (threads <= 1) {
        worker();
        return errors;
    }
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();
    return errors;
}

std::vector<fs::path> collect_files(const std::vector<fs::path>& inputs, const std::set<std::string>& extensions) {
    std::vector<fs::path> files;
    for (const auto& input : inputs) {
        if (fs::is_directory(input)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(input)) {
                if (entry.is_regular_file() && extensions.contains(entry.path().extension().string())) {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::is_regular_file(input)) {
            files.push_back(input);
        } else {
            throw UsageError("input not found: " + input.string());
        }
    }
    if (files.empty()) throw UsageError("no input files");
    return files;
}

void write_json(const fs::path& path, const Json& value) {
    write_file_atomic(path, canonical_dump(value) + "\n");
}

std::string fixed(double v, int precision = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

struct LoadedForest {
    std::string id;
    IntentForest forest;
};

std::vector<LoadedForest> load_forests(const std::vector<fs::path>& inputs) {
    std::vector<LoadedForest> out;
    std::set<std::string> ids;
    for (const auto& path : collect_files(inputs, {".json"})) {
        try {
            const std::string id = path.stem().string();
            if (!ids.insert(id).second) throw UsageError("two hierarchies share the id '" + id + "'");
            out.push_back({id, parse_forest_text(read_text_file(path))});
        } catch (const SchemaError& e) {
            throw SchemaError(path.string() + ": " + e.what());
        }
    }
    return out;
}

std::vector<std::pair<std::string, std::vector<Transcript>>> load_runs(const std::vector<std::string>& specs) {
    std::vector<std::pair<std::string, std::vector<Transcript>>> runs;
    std::set<std::string> labels;
    for (const auto& spec : specs) {
        auto [label, dir] = parse_run_dir(spec);
        if (!labels.insert(label).second) throw UsageError("model label '" + label + "' given twice");
        if (!fs::is_directory(dir)) throw UsageError("transcript directory not found: " + dir.string());
        std::vector<Transcript> transcripts;
        for (const auto& path : collect_files({dir}, {".json"})) {
            try {
                transcripts.push_back(transcript_from_json(Json::parse(read_text_file(path))));
            } catch (const Json::exception& e) {
                throw SchemaError(path.string() + ": " + e.what());
            } catch (const SchemaError& e) {
                throw SchemaError(path.string() + ": " + e.what());
            }
        }
        runs.emplace_back(label, std::move(transcripts));
    }
    return runs;
}

std::string safe_label(std::string s) {
    for (char& c : s) {
        if (c == '/' || c == '#') c = '_';
    }
    return s;
}

// Same replies as the wrapped policy under another label.
class RelabeledPolicy : public AssistantPolicy {
public:
    RelabeledPolicy(std::unique_ptr<AssistantPolicy> inner, std::string label)
        : inner_(std::move(inner)), label_(std::move(label)) {}
    ChatResponse respond(const PolicyContext& context) override { return inner_->respond(context); }
    std::string label() const override { return label_; }

private:
    std::unique_ptr<AssistantPolicy> inner_;
    std::string label_;
};

}  // namespace

std::unique_ptr<AssistantPolicy> make_policy(const std::string& spec, const RoleClients& clients) {
    if (spec == "null") return std::make_unique<NullPolicy>();
    if (spec == "oracle") return std::make_unique<OraclePolicy>();
    if (spec.rfind("scripted:", 0) == 0) {
        const fs::path path = spec.substr(9);
        Json json;
        try {
            json = Json::parse(read_text_file(path));
        } catch (const std::exception& e) {
            throw UsageError("scripted policy " + path.string() + ": " + e.what());
        }
        return std::make_unique<ScriptedPolicy>(
            ScriptedPolicy::from_json(json, "scripted:" + safe_label(path.stem().string())));
    }
    if (spec.rfind("gateway:", 0) == 0) {
        const std::string rest = spec.substr(8);
        const auto colon = rest.find(':');
        const std::string role = rest.substr(0, colon);
        std::string system;
        if (colon != std::string::npos) {
            try {
                system = std::string(prompt_template(rest.substr(colon + 1)).text);
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
        }
        return std::make_unique<GatewayPolicy>(clients.client(role), system, "gateway:" + safe_label(rest));
    }
    throw UsageError("unknown policy '" + spec + "' (expected null, oracle, scripted:PATH or gateway:ROLE[:TEMPLATE])");
}

std::pair<std::string, fs::path> parse_run_dir(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq != std::string::npos) {
        if (eq == 0) throw UsageError("empty model label in '" + spec + "'");
        return {spec.substr(0, eq), fs::path(spec.substr(eq + 1))};
    }
    fs::path dir(spec);
    std::string label = dir.filename().string();
    if (label.empty()) label = dir.parent_path().filename().string();
    return {label, dir};
}

int cmd_build(const std::vector<fs::path>& inputs, const RunConfig& config, std::ostream& log) {
    const RoleClients clients(config);
    const auto files = collect_files(inputs, {".txt", ".md"});
    std::set<std::string> ids;
    for (const auto& f : files) {
        if (!ids.insert(f.stem().string()).second) throw UsageError("two artifacts share the id '" + f.stem().string() + "'");
    }
    fs::create_directories(config.out / "hierarchies");
    fs::create_directories(config.out / "build_logs");
    BuildOptions options{config.framework.abstraction_depth, config.seed};
    const auto errors = parallel_for(files.size(), config.jobs, [&](std::size_t i) {
        const std::string id = files[i].stem().string();
        auto result = build_forest(read_text_file(files[i]), config.artifact_type, id, clients.client("builder"), options);
        result.log["config_digest"] = config.digest();
        write_json(config.out / "hierarchies" / (id + ".json"), forest_to_document(result.forest));
        write_json(config.out / "build_logs" / (id + ".json"), result.log);
    });
    int failed = 0;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (errors[i].empty()) {
            log << "built " << files[i].stem().string() << "\n";
        } else {
            ++failed;
            log << "error: " << files[i].string() << ": " << errors[i] << "\n";
        }
    }
    return failed == 0 ? kExitOk : kExitFailure;
}

int cmd_simulate(const std::vector<fs::path>& hierarchies, const std::string& policy_spec,
                 const RunConfig& config, std::ostream& log) {
    const RoleClients clients(config);
    auto policy = make_policy(policy_spec, clients);
    const auto forests = load_forests(hierarchies);
    const int n = config.framework.n_trials;
    const auto sim = config.simulation();
    const auto sim_clients = clients.simulator();
    fs::create_directories(config.out / "transcripts");

    // One unit per (hierarchy, trial).
    std::vector<std::optional<Transcript>> results(forests.size() * static_cast<std::size_t>(n));
    const auto errors = parallel_for(results.size(), config.jobs, [&](std::size_t u) {
        const auto& lf = forests[u / static_cast<std::size_t>(n)];
        const int trial = static_cast<int>(u % static_cast<std::size_t>(n));
        const IntentForest forest = forest_for_trial(lf.forest, trial);
        results[u] = run_conversation(forest, *policy, sim_clients, sim,
                                      {lf.id, trial, trial_seed(lf.forest, trial)});
        write_json(config.out / "transcripts" / (lf.id + ".t" + std::to_string(trial) + ".json"),
                   to_json(*results[u]));
    });

    bool all_ok = true;
    Json per_forest = Json::object();
    for (std::size_t f = 0; f < forests.size(); ++f) {
        std::map<std::string, double> sums;
        int completed = 0;
        Json failures = Json::array();
        for (int trial = 0; trial < n; ++trial) {
            const std::size_t u = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(trial);
            if (!errors[u].empty()) {
                all_ok = false;
                failures.push_back({{"trial", trial}, {"error", errors[u]}});
                log << "error: " << forests[f].id << " trial " << trial << ": " << errors[u] << "\n";
                continue;
            }
            const Transcript& t = *results[u];
            if (!t.complete) {
                all_ok = false;
                failures.push_back({{"trial", trial}, {"error", t.abort_reason}});
                log << "aborted: " << forests[f].id << " trial " << trial << ": " << t.abort_reason << "\n";
                continue;
            }
            ++completed;
            const Json summary = transcript_summary(t);
            for (const auto& [k, v] : summary.items()) sums[k] += v.get<double>();
        }
        Json means = Json::object();
        for (const auto& [k, v] : sums) means[k] = v / completed;
        per_forest[forests[f].id] = {{"trials", n}, {"completed", completed}, {"means", means}, {"failures", failures}};
        log << forests[f].id << ": " << completed << "/" << n << " trials completed";
        if (completed > 0) {
            log << ", mean total reward " << fixed(means["total_reward"].get<double>())
                << ", unnormalized discovery " << fixed(means["unnormalized_discovery"].get<double>());
        }
        log << "\n";
    }
    write_json(config.out / "simulate_summary.json",
               {{"schema", "intentsim.simulate_summary"},
                {"version", 1},
                {"config_digest", config.digest()},
                {"policy", policy->label()},
                {"hierarchies", per_forest}});
    return all_ok ? kExitOk : kExitFailure;
}

int cmd_evaluate(const std::vector<std::string>& run_dirs, bool unnormalized, const RunConfig& config,
                 std::ostream& log) {
    if (run_dirs.empty()) throw UsageError("evaluate needs at least one transcript directory");
    if (run_dirs.size() < 2 && !unnormalized) {
        throw UsageError("normalized discovery needs at least two model directories; pass --unnormalized for one");
    }
    const RoleClients clients(config);
    const auto loaded = load_runs(run_dirs);
    ModelRunSet runs;
    for (const auto& [label, transcripts] : loaded) runs[label] = transcripts;
    const DiscoveryReport discovery = discovery_score(runs, unnormalized);

    // Judge calls, one unit per (model, transcript).
    struct Unit {
        std::string model;
        const Transcript* transcript;
        LeafScores leaves;
        InteractivityResult interactivity;
        std::vector<TurnLabel> labels;
    };
    std::vector<Unit> units;
    for (const auto& [label, transcripts] : runs) {
        for (const auto& t : transcripts) units.push_back({label, &t, {}, {}, {}});
    }
    const ChatClient& judge = clients.client("judge");
    const auto errors = parallel_for(units.size(), config.jobs, [&](std::size_t i) {
        Unit& u = units[i];
        const std::string scope = safe_label(u.model) + "/" + u.transcript->artifact_id + "/" +
                                  std::to_string(u.transcript->trial);
        u.leaves = judge_satisfaction(*u.transcript, judge, std::string(templates::kJudgeSatisfaction) + "/" + scope);
        u.interactivity = interactivity_score(*u.transcript, judge, std::string(templates::kJudgeInteractivity) + "/" + scope);
        if (u.transcript->turns.size() >= 3) {
            u.labels = classify_turns(*u.transcript, judge, std::string(templates::kBehaviorAnnotation) + "/" + scope);
        }
    });
    for (std::size_t i = 0; i < units.size(); ++i) {
        if (!errors[i].empty()) throw Error("judging " + units[i].model + "/" + units[i].transcript->artifact_id + ": " + errors[i]);
    }

    SatisfactionInput satisfaction_input;
    std::map<std::string, std::vector<InteractivityResult>> interactivity;
    std::map<std::string, TrigramHistogram> trigrams;
    std::map<std::string, int> trigram_excluded;
    for (const auto& u : units) {
        satisfaction_input[u.model][{u.transcript->artifact_id, u.transcript->trial}] = u.leaves;
        interactivity[u.model].push_back(u.interactivity);
        if (u.labels.size() >= 3) {
            trigrams[u.model] += trigram_distribution(u.labels);
        } else {
            ++trigram_excluded[u.model];
        }
    }
    const SatisfactionReport satisfaction = satisfaction_score(satisfaction_input);

    Json models = Json::object();
    std::ostringstream table;
    table << "model                    discovery  satisfaction  interactivity  mean_tokens  CCC  DDD  two  alt\n";
    for (const auto& [label, transcripts] : runs) {
        double inter_sum = 0.0;
        int inter_n = 0, clamped = 0, unparsed = 0;
        for (const auto& r : interactivity[label]) {
            if (!r.parsed) {
                ++unparsed;
                continue;
            }
            inter_sum += r.score;
            ++inter_n;
            if (r.clamped) ++clamped;
        }
        const double inter = inter_n > 0 ? inter_sum / inter_n : 0.0;
        const double tokens = mean_output_tokens(transcripts);
        const TrigramHistogram& h = trigrams[label];
        models[label] = {{"transcripts", transcripts.size()},
                         {"discovery", discovery.score.at(label)},
                         {"discovery_instances", discovery.instances.contains(label) ? discovery.instances.at(label) : 0},
                         {"satisfaction", satisfaction.score.contains(label) ? satisfaction.score.at(label) : 0.0},
                         {"satisfaction_instances", satisfaction.instances.contains(label) ? satisfaction.instances.at(label) : 0},
                         {"interactivity", inter},
                         {"interactivity_scored", inter_n},
                         {"interactivity_clamped", clamped},
                         {"interactivity_unparsed", unparsed},
                         {"mean_output_tokens", tokens},
                         {"trigrams", to_json(h)},
                         {"trigram_excluded_transcripts", trigram_excluded[label]}};
        std::string name = label;
        name.resize(std::max<std::size_t>(name.size(), 24), ' ');
        table << name << " " << fixed(models[label]["discovery"].get<double>()) << "      "
              << fixed(models[label]["satisfaction"].get<double>()) << "         " << fixed(inter) << "          "
              << fixed(tokens, 1) << "  " << h.ccc << "  " << h.ddd << "  " << h.two_consecutive << "  "
              << h.alternating << "\n";
    }
    table << "discovery: " << (unnormalized ? "unnormalized" : "normalized by per-instance bounds")
          << "; skipped instances " << discovery.skipped.size() << "\n";
    table << "satisfaction: skipped instances " << satisfaction.skipped.size() << ", unscored leaves "
          << satisfaction.unscored_leaves << ", leaves satisfied by every model " << satisfaction.excluded_leaves << "\n";
    table << "config digest " << config.digest() << "\n";

    const Json report{{"schema", "intentsim.report"},
                      {"version", 1},
                      {"config_digest", config.digest()},
                      {"judge_model", config.roles.at("judge").model},
                      {"discovery_mode", unnormalized ? "unnormalized" : "normalized"},
                      {"discovery_skipped", discovery.skipped},
                      {"satisfaction_skipped", satisfaction.skipped},
                      {"satisfaction_unscored_leaves", satisfaction.unscored_leaves},
                      {"satisfaction_excluded_leaves", satisfaction.excluded_leaves},
                      {"models", models}};
    fs::create_directories(config.out);
    write_json(config.out / "report.json", report);
    write_file_atomic(config.out / "report.txt", table.str());
    log << table.str();
    return kExitOk;
}

int cmd_synthesize(const std::vector<fs::path>& hierarchies, const std::string& policy_a,
                   const std::string& policy_b, const RunConfig& config, std::ostream& log) {
    const RoleClients clients(config);
    auto a = make_policy(policy_a, clients);
    auto b = make_policy(policy_b, clients);
    // Pair records and request tags need distinct labels.
    if (a->label() == b->label()) {
        const std::string label = a->label();
        a = std::make_unique<RelabeledPolicy>(std::move(a), label + ":a");
        b = std::make_unique<RelabeledPolicy>(std::move(b), label + ":b");
    }
    const auto forests = load_forests(hierarchies);
    auto sim = config.simulation();
    sim.elicit_final_artifact = false;
    const auto sim_clients = clients.simulator();

    std::vector<std::optional<SynthesisRun>> results(forests.size());
    const auto errors = parallel_for(forests.size(), config.jobs, [&](std::size_t i) {
        const IntentForest forest = forest_for_trial(forests[i].forest, 0);
        results[i] = run_synthesis(forest, {a.get(), b.get()}, sim_clients, sim,
                                   {forests[i].id, 0, trial_seed(forests[i].forest, 0)});
    });

    bool all_ok = true;
    std::vector<PreferencePair> pairs;
    std::vector<Transcript> transcripts;
    int skipped_turns = 0;
    fs::create_directories(config.out / "synthesis_transcripts");
    for (std::size_t i = 0; i < forests.size(); ++i) {
        if (!errors[i].empty()) {
            all_ok = false;
            log << "error: " << forests[i].id << ": " << errors[i] << "\n";
            continue;
        }
        const SynthesisRun& run = *results[i];
        if (!run.transcript.complete) {
            all_ok = false;
            log << "aborted: " << forests[i].id << ": " << run.transcript.abort_reason << "\n";
        }
        write_json(config.out / "synthesis_transcripts" / (forests[i].id + ".json"), to_json(run.transcript));
        pairs.insert(pairs.end(), run.pairs.begin(), run.pairs.end());
        transcripts.push_back(run.transcript);
        skipped_turns += run.skipped_turns;
    }
    const DpoResult dpo = emit_dpo(pairs, config.framework.pair_margin);
    const auto sft = emit_sft(transcripts, config.framework.include_final_artifact);
    write_file_atomic(config.out / "sft.jsonl", sft_to_jsonl(sft));
    write_file_atomic(config.out / "dpo.jsonl", dpo_to_jsonl(dpo.records));
    Json summary = to_json(dpo.summary);
    summary["schema"] = "intentsim.dataset_summary";
    summary["version"] = 1;
    summary["config_digest"] = config.digest();
    summary["sft_records"] = sft.size();
    summary["skipped_turns"] = skipped_turns;
    summary["policies"] = {a->label(), b->label()};
    write_json(config.out / "dataset_summary.json", summary);

    const auto& s = dpo.summary;
    log << "pairs " << s.emitted << " (dropped " << s.dropped << ", filtered " << s.filtered << ", ties " << s.ties
        << ", skipped turns " << skipped_turns << ")\n";
    log << "chosen reward " << fixed(s.chosen_mean) << " +- " << fixed(s.chosen_sd) << ", rejected reward "
        << fixed(s.rejected_mean) << " +- " << fixed(s.rejected_sd) << "\n";
    for (const auto& [policy, rate] : s.win_rate) log << "win rate " << policy << " " << fixed(rate) << "\n";
    log << "sft records " << sft.size() << "\n";
    return all_ok ? kExitOk : kExitFailure;
}

int cmd_analyze(const std::vector<std::string>& run_dirs, const RunConfig& config, std::ostream& log) {
    if (run_dirs.empty()) throw UsageError("analyze needs at least one transcript directory");
    const RoleClients clients(config);
    const auto runs = load_runs(run_dirs);
    const ChatClient& annotator = clients.client("judge");

    Json models = Json::object();
    std::ostringstream text;
    for (const auto& [label, transcripts] : runs) {
        std::vector<std::vector<TurnLabel>> labels(transcripts.size());
        const auto errors = parallel_for(transcripts.size(), config.jobs, [&](std::size_t i) {
            const Transcript& t = transcripts[i];
            if (t.turns.size() < 3) return;
            labels[i] = classify_turns(t, annotator,
                                       std::string(templates::kBehaviorAnnotation) + "/" + safe_label(label) + "/" +
                                           t.artifact_id + "/" + std::to_string(t.trial));
        });
        TrigramHistogram h;
        int excluded = 0;
        Json sequences = Json::object();
        for (std::size_t i = 0; i < transcripts.size(); ++i) {
            if (!errors[i].empty()) throw Error("annotating " + label + "/" + transcripts[i].artifact_id + ": " + errors[i]);
            if (labels[i].size() < 3) {
                ++excluded;
                continue;
            }
            std::string letters;
            for (auto l : labels[i]) letters.push_back(to_char(l));
            sequences[transcripts[i].artifact_id + "#" + std::to_string(transcripts[i].trial)] = letters;
            h += trigram_distribution(labels[i]);
        }
        const double total = h.total();
        auto share = [&](int k) { return total > 0 ? k / total : 0.0; };
        models[label] = {{"histogram", to_json(h)},
                         {"shares",
                          {{"CCC", share(h.ccc)},
                           {"DDD", share(h.ddd)},
                           {"two_consecutive", share(h.two_consecutive)},
                           {"alternating", share(h.alternating)}}},
                         {"excluded_transcripts", excluded},
                         {"sequences", sequences}};
        text << label << ": CCC " << fixed(share(h.ccc)) << ", DDD " << fixed(share(h.ddd)) << ", two-consecutive "
             << fixed(share(h.two_consecutive)) << ", alternating " << fixed(share(h.alternating)) << " over "
             << h.total() << " windows; excluded transcripts " << excluded << "\n";
    }
    fs::create_directories(config.out);
    write_json(config.out / "behavior.json", {{"schema", "intentsim.behavior"},
                                              {"version", 1},
                                              {"config_digest", config.digest()},
                                              {"models", models}});
    write_file_atomic(config.out / "behavior.txt", text.str());
    log << text.str();
    return kExitOk;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulated-user intent discovery: build intent forests, run conversations, score and synthesize data."};
    app.require_subcommand(1);

    struct Common {
        std::string config;
        std::string mode;
        std::string cassette;
        std::optional<std::uint64_t> seed;
        std::optional<int> jobs;
        std::string out;
    };
    Common common;
    std::vector<std::string> inputs;
    std::string policy, policy_a, policy_b, artifact_type;
    bool unnormalized = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", common.config, "run configuration (JSON)");
        cmd->add_option("--mode", common.mode, "live, record or replay")->check(CLI::IsMember({"live", "record", "replay"}));
        cmd->add_option("--cassette", common.cassette, "record/replay cassette file");
        cmd->add_option("--seed", common.seed, "root seed");
        cmd->add_option("--jobs", common.jobs, "parallel conversations")->check(CLI::PositiveNumber);
        cmd->add_option("--out", common.out, "output directory");
    };
    auto* build = app.add_subcommand("build", "build intent forests from artifact files");
    add_common(build);
    build->add_option("inputs", inputs, "artifact files or directories")->required();
    build->add_option("--artifact-type", artifact_type, "artifact type label, e.g. \"short story\"");

    auto* simulate = app.add_subcommand("simulate", "run simulated conversations");
    add_common(simulate);
    simulate->add_option("inputs", inputs, "hierarchy documents or directories")->required();
    simulate->add_option("--policy", policy, "null, oracle, scripted:PATH or gateway:ROLE[:TEMPLATE]")->required();

    auto* evaluate = app.add_subcommand("evaluate", "score transcripts of several models");
    add_common(evaluate);
    evaluate->add_option("inputs", inputs, "transcript directories, one per model ([label=]dir)")->required();
    evaluate->add_flag("--unnormalized", unnormalized, "report raw discovery (allows a single model)");

    auto* synthesize = app.add_subcommand("synthesize", "rank two policies per turn into SFT and DPO data");
    add_common(synthesize);
    synthesize->add_option("inputs", inputs, "hierarchy documents or directories")->required();
    synthesize->add_option("--policy-a", policy_a, "first policy")->required();
    synthesize->add_option("--policy-b", policy_b, "second policy")->required();

    auto* analyze = app.add_subcommand("analyze", "divergent/convergent trigram analysis");
    add_common(analyze);
    analyze->add_option("inputs", inputs, "transcript directories, one per model ([label=]dir)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        RunConfig config = common.config.empty() ? default_run_config() : load_run_config(common.config);
        if (!common.mode.empty()) config.mode = gateway_mode_from_string(common.mode);
        if (!common.cassette.empty()) config.cassette = common.cassette;
        if (common.seed) config.seed = *common.seed;
        if (common.jobs) config.jobs = *common.jobs;
        if (!common.out.empty()) config.out = common.out;
        if (!artifact_type.empty()) config.artifact_type = artifact_type;
        config.validate();

        std::vector<fs::path> paths(inputs.begin(), inputs.end());
        if (build->parsed()) return cmd_build(paths, config, out);
        if (simulate->parsed()) return cmd_simulate(paths, policy, config, out);
        if (evaluate->parsed()) return cmd_evaluate(inputs, unnormalized, config, out);
        if (synthesize->parsed()) return cmd_synthesize(paths, policy_a, policy_b, config, out);
        if (analyze->parsed()) return cmd_analyze(inputs, config, out);
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace intentsim
