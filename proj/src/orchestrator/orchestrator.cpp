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

#include "intentsim/orchestrator/orchestrator.hpp"

#include <algorithm>
#include <map>

#include "intentsim/metrics/metrics.hpp"
#include "intentsim/util/digest.hpp"

namespace intentsim {

namespace {

std::string scope_tag(std::string_view name, const ConversationLabel& label, const std::string& turn) {
    return std::string(name) + "/" + label.artifact_id + "/" + std::to_string(label.trial) + "/" + turn;
}

Transcript start_transcript(const IntentForest& forest, const std::string& policy,
                            const ConversationLabel& label) {
    Transcript t;
    t.forest_document = forest_to_document(forest);
    t.forest_ref = sha256_hex(canonical_dump(t.forest_document));
    t.artifact_id = label.artifact_id;
    t.policy = policy;
    t.seed = label.seed;
    t.trial = label.trial;
    t.initial_state = forest.snapshot();
    return t;
}

void check_config(const SimulationConfig& config) {
    if (config.max_turns < 1) throw PreconditionError("max_turns must be at least 1");
    if (!(config.p >= 0.0 && config.p <= 1.0)) throw PreconditionError("p must lie in [0, 1]");
}

// Ordering used for ranking: higher total, then fewer tokens, then earlier index.
bool ranks_before(const CandidateOutcome& a, std::size_t ia, const CandidateOutcome& b, std::size_t ib) {
    if (a.reward.total != b.reward.total) return a.reward.total > b.reward.total;
    if (a.reward.token_count != b.reward.token_count) return a.reward.token_count < b.reward.token_count;
    return ia < ib;
}

Ranking evaluate_candidates(IntentForest& forest, const std::vector<ChatMessage>& history,
                            const std::vector<ChatResponse>& candidates,
                            const std::vector<std::string>& policies, const ChatClient& evaluator,
                            const SimulationConfig& config, const std::string& tag) {
    Ranking ranking;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        CandidateOutcome out;
        out.response = candidates[k];
        out.policy = k < policies.size() ? policies[k] : "candidate-" + std::to_string(k);
        out.forest = forest;
        try {
            auto with_reply = history;
            with_reply.push_back({"assistant", out.response.text});
            out.evaluation = evaluate_response(out.forest, with_reply, evaluator, tag + "/c" + std::to_string(k));
            out.delta = apply_updates(out.forest, out.evaluation, config.p);
            out.reward = turn_reward(out.delta, out.response, config.reward);
            out.ok = true;
        } catch (const Error& e) {
            out.error = e.what();
        }
        ranking.outcomes.push_back(std::move(out));
    }
    std::vector<std::size_t> alive;
    for (std::size_t k = 0; k < ranking.outcomes.size(); ++k) {
        if (ranking.outcomes[k].ok) alive.push_back(k);
    }
    if (alive.empty()) return ranking;
    std::sort(alive.begin(), alive.end(), [&](std::size_t a, std::size_t b) {
        return ranks_before(ranking.outcomes[a], a, ranking.outcomes[b], b);
    });
    ranking.chosen = alive.front();
    if (alive.size() >= 2) ranking.rejected = alive.back();
    forest = ranking.outcomes[*ranking.chosen].forest;
    return ranking;
}

}  // namespace

Transcript run_conversation(const IntentForest& source, AssistantPolicy& policy,
                            const SimulatorClients& clients, const SimulationConfig& config,
                            const ConversationLabel& label) {
    check_config(config);
    IntentForest forest = source;
    Transcript t = start_transcript(forest, policy.label(), label);
    std::vector<ChatMessage> history{{"user", forest.initial_request}};
    std::string user_message = forest.initial_request;
    int user_attempts = 1;
    const StateDelta* last_delta = nullptr;
    const EvaluationResult* last_evaluation = nullptr;

    for (int turn = 1; turn <= config.max_turns; ++turn) {
        const std::string turn_label = std::to_string(turn);
        ChatResponse reply;
        try {
            reply = policy.respond({forest, history, turn,
                                    scope_tag("assistant", label, turn_label) + "/" + policy.label()});
        } catch (const std::exception& e) {
            t.abort_reason = "turn " + turn_label + ": policy failed: " + e.what();
            break;
        }
        history.push_back({"assistant", reply.text});

        Turn record;
        record.user_message = user_message;
        record.user_attempts = user_attempts;
        record.assistant = reply;
        try {
            record.evaluation = evaluate_response(forest, history, clients.evaluator,
                                                  scope_tag("response-evaluation", label, turn_label));
        } catch (const Error& e) {
            throw ConversationError(turn, e.what());
        }
        record.delta = apply_updates(forest, record.evaluation, config.p);
        record.reward = turn_reward(record.delta, reply, config.reward);
        for (const auto& w : record.evaluation.warnings) t.warnings.push_back("turn " + turn_label + ": " + w);
        t.turns.push_back(std::move(record));
        last_delta = &t.turns.back().delta;
        last_evaluation = &t.turns.back().evaluation;

        if (turn == config.max_turns) {
            t.complete = true;
            break;
        }
        try {
            const auto next = generate_user_message(forest, history, last_delta, last_evaluation,
                                                    clients.user,
                                                    scope_tag("user-response", label, std::to_string(turn + 1)));
            if (!next.leaked.empty()) {
                t.warnings.push_back("turn " + std::to_string(turn + 1) +
                                     ": user message regenerated after leaking an undiscovered intent");
            }
            user_message = next.text;
            user_attempts = next.attempts;
        } catch (const Error& e) {
            throw ConversationError(turn + 1, e.what());
        }
        history.push_back({"user", user_message});
    }
    t.end_state = forest.snapshot();
    if (t.complete && config.elicit_final_artifact) elicit_final_artifact(t, forest, policy);
    return t;
}

void elicit_final_artifact(Transcript& transcript, const IntentForest& final_forest,
                           AssistantPolicy& policy) {
    auto history = transcript.messages();
    history.push_back({"user", std::string(kFinalArtifactRequest)});
    const std::string tag = "assistant/" + transcript.artifact_id + "/" + std::to_string(transcript.trial) +
                            "/final/" + policy.label();
    const auto reply = policy.respond({final_forest, history, 0, tag});
    transcript.final_artifact = reply.text;
    if (reply.text.empty()) transcript.warnings.push_back("final artifact is empty");
}

std::uint64_t trial_seed(const IntentForest& forest, int trial) {
    return forest.rng_seed + static_cast<std::uint64_t>(trial);
}

IntentForest forest_for_trial(const IntentForest& forest, int trial) {
    IntentForest out = forest;
    if (trial > 0) out.sample_thresholds(trial_seed(forest, trial));
    out.reset_conversation_state();
    return out;
}

Json transcript_summary(const Transcript& t) {
    double r_d = 0.0;
    double total = 0.0;
    for (const auto& turn : t.turns) {
        r_d += turn.reward.r_d;
        total += turn.reward.total;
    }
    const double turns = static_cast<double>(t.turns.size());
    return Json{{"total_r_d", r_d},
                {"total_reward", total},
                {"unnormalized_discovery", unnormalized_discovery(t)},
                {"mean_output_tokens", turns > 0 ? static_cast<double>(t.output_tokens()) / turns : 0.0},
                {"turns", turns}};
}

TrialSet run_trials(const IntentForest& forest, AssistantPolicy& policy, int n_trials,
                    const SimulatorClients& clients, const SimulationConfig& config,
                    const std::string& artifact_id) {
    if (n_trials < 1) throw PreconditionError("n_trials must be at least 1");
    TrialSet set;
    std::map<std::string, double> sums;
    int completed = 0;
    for (int i = 0; i < n_trials; ++i) {
        try {
            const IntentForest trial_forest = forest_for_trial(forest, i);
            Transcript t = run_conversation(trial_forest, policy, clients, config,
                                            {artifact_id, i, trial_seed(forest, i)});
            if (t.complete) {
                ++completed;
                const Json summary = transcript_summary(t);
                for (const auto& [k, v] : summary.items()) sums[k] += v.get<double>();
            }
            set.transcripts.push_back(std::move(t));
        } catch (const Error& e) {
            set.failures.push_back({i, e.what()});
        }
    }
    Json means = Json::object();
    for (const auto& [k, v] : sums) means[k] = v / completed;
    set.aggregate = Json{{"trials", n_trials}, {"completed", completed}, {"means", means}};
    return set;
}

Ranking rank_candidates(IntentForest& forest, const std::vector<ChatMessage>& history,
                        const std::vector<ChatResponse>& candidates,
                        const std::vector<std::string>& policies, const ChatClient& evaluator,
                        const SimulationConfig& config, const std::string& tag) {
    if (candidates.size() < 2) throw PreconditionError("rank_candidates needs at least two candidates");
    if (history.empty() || history.back().role != "user") {
        throw PreconditionError("rank_candidates: history must end with a user message");
    }
    return evaluate_candidates(forest, history, candidates, policies, evaluator, config, tag);
}

SynthesisRun run_synthesis(const IntentForest& source, std::vector<AssistantPolicy*> policies,
                           const SimulatorClients& clients, const SimulationConfig& config,
                           const ConversationLabel& label) {
    check_config(config);
    if (policies.size() < 2) throw PreconditionError("run_synthesis needs at least two policies");
    std::string name = "synthesis";
    for (const auto* p : policies) name += ":" + p->label();

    IntentForest forest = source;
    SynthesisRun run;
    Transcript& t = run.transcript;
    t = start_transcript(forest, name, label);
    std::vector<ChatMessage> history{{"user", forest.initial_request}};
    std::string user_message = forest.initial_request;
    int user_attempts = 1;

    for (int turn = 1; turn <= config.max_turns; ++turn) {
        const std::string turn_label = std::to_string(turn);
        std::vector<ChatResponse> responses;
        std::vector<std::string> labels;
        for (auto* policy : policies) {
            try {
                responses.push_back(policy->respond(
                    {forest, history, turn, scope_tag("assistant", label, turn_label) + "/" + policy->label()}));
                labels.push_back(policy->label());
            } catch (const std::exception& e) {
                t.warnings.push_back("turn " + turn_label + ": policy " + policy->label() +
                                     " failed: " + e.what());
            }
        }
        Ranking ranking = evaluate_candidates(forest, history, responses, labels, clients.evaluator,
                                              config, scope_tag("response-evaluation", label, turn_label));
        for (const auto& o : ranking.outcomes) {
            if (!o.ok) t.warnings.push_back("turn " + turn_label + ": candidate " + o.policy + " disqualified: " + o.error);
        }
        if (!ranking.chosen) {
            t.abort_reason = "turn " + turn_label + ": no candidate survived evaluation";
            break;
        }
        const CandidateOutcome& chosen = ranking.outcomes[*ranking.chosen];
        if (ranking.has_pair()) {
            const CandidateOutcome& rejected = ranking.outcomes[*ranking.rejected];
            PreferencePair pair;
            pair.context = history;
            pair.chosen = chosen.response.text;
            pair.rejected = rejected.response.text;
            pair.chosen_reward = chosen.reward;
            pair.rejected_reward = rejected.reward;
            pair.chosen_policy = chosen.policy;
            pair.rejected_policy = rejected.policy;
            pair.artifact_id = label.artifact_id;
            pair.seed = label.seed;
            pair.turn = turn;
            run.pairs.push_back(std::move(pair));
        } else {
            ++run.skipped_turns;
        }

        history.push_back({"assistant", chosen.response.text});
        t.turns.push_back({user_message, chosen.response, chosen.evaluation, chosen.delta, chosen.reward,
                           user_attempts});
        if (turn == config.max_turns) {
            t.complete = true;
            break;
        }
        try {
            const auto next = generate_user_message(
                forest, history, &t.turns.back().delta, &t.turns.back().evaluation, clients.user,
                scope_tag("user-response", label, std::to_string(turn + 1)));
            user_message = next.text;
            user_attempts = next.attempts;
        } catch (const Error& e) {
            throw ConversationError(turn + 1, e.what());
        }
        history.push_back({"user", user_message});
    }
    t.end_state = forest.snapshot();
    return run;
}

}  // namespace intentsim
