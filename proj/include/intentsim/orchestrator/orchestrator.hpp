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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "intentsim/orchestrator/policy.hpp"
#include "intentsim/orchestrator/transcript.hpp"

namespace intentsim {

/// Fixed user message that asks for the finished artifact after a conversation.
inline constexpr std::string_view kFinalArtifactRequest =
    "Okay, now generate a complete output artifact considering the conversation so far. Return only "
    "the artifact without any other text or explanation.";

struct SimulationConfig {
    int max_turns = 5;
    double p = 0.25;
    RewardParams reward;
    bool elicit_final_artifact = true;
};

/// Model roles used by the simulated user.
struct SimulatorClients {
    ChatClient evaluator;
    ChatClient user;
};

/// Identifies one conversation; it becomes part of every request tag.
struct ConversationLabel {
    std::string artifact_id;
    int trial = 0;
    std::uint64_t seed = 0;
};

/// Raised for evaluator or user-model failures; carries the 1-based turn.
class ConversationError : public Error {
public:
    ConversationError(int turn, const std::string& what)
        : Error("turn " + std::to_string(turn) + ": " + what), turn_(turn) {}
    int turn() const { return turn_; }

private:
    int turn_;
};

/// Runs one conversation over a copy of `forest` in its current state. Turn 1
/// opens with forest.initial_request; each turn the policy responds, the reply
/// is evaluated, the forest updated and rewarded, and (except after the last
/// turn) the simulated user answers. A policy failure ends the conversation with
/// complete = false.
Transcript run_conversation(const IntentForest& forest, AssistantPolicy& policy,
                            const SimulatorClients& clients, const SimulationConfig& config,
                            const ConversationLabel& label);

/// Appends the fixed elicitation message and stores the policy's reply as the
/// final artifact. An empty reply is stored and flagged with a warning.
void elicit_final_artifact(Transcript& transcript, const IntentForest& final_forest,
                           AssistantPolicy& policy);

/// Forest prepared for trial `trial`: trial 0 keeps the document thresholds,
/// later trials resample them from rng_seed + trial.
IntentForest forest_for_trial(const IntentForest& forest, int trial);
std::uint64_t trial_seed(const IntentForest& forest, int trial);

struct TrialFailure {
    int trial;
    std::string error;
};

struct TrialSet {
    std::vector<Transcript> transcripts;  // completed and aborted trials, in order
    std::vector<TrialFailure> failures;   // trials that raised before producing a transcript
    Json aggregate;                       // means over completed trials
};

/// Per-conversation summary values averaged by run_trials.
Json transcript_summary(const Transcript& transcript);

TrialSet run_trials(const IntentForest& forest, AssistantPolicy& policy, int n_trials,
                    const SimulatorClients& clients, const SimulationConfig& config,
                    const std::string& artifact_id);

/// Result of evaluating one candidate response against a private forest clone.
struct CandidateOutcome {
    ChatResponse response;
    std::string policy;
    bool ok = false;
    std::string error;
    EvaluationResult evaluation;
    StateDelta delta;
    RewardBreakdown reward;
    IntentForest forest;  // clone after this candidate's update
};

struct Ranking {
    std::vector<CandidateOutcome> outcomes;
    std::optional<std::size_t> chosen;
    std::optional<std::size_t> rejected;  // set only when at least two candidates survived

    bool has_pair() const { return chosen && rejected; }
};

/// Evaluates every candidate on its own clone of `forest` and picks the highest
/// total reward; ties go to fewer output tokens, then to the earlier candidate.
/// The rejected candidate is the lowest under the same order. On success
/// `forest` becomes the chosen candidate's clone. Requires at least two candidates.
Ranking rank_candidates(IntentForest& forest, const std::vector<ChatMessage>& history,
                        const std::vector<ChatResponse>& candidates,
                        const std::vector<std::string>& policies, const ChatClient& evaluator,
                        const SimulationConfig& config, const std::string& tag);

struct SynthesisRun {
    Transcript transcript;  // the conversation continued with chosen candidates
    std::vector<PreferencePair> pairs;
    int skipped_turns = 0;  // turns without a pair
};

/// Samples every policy each turn, ranks the replies and continues with the chosen one.
SynthesisRun run_synthesis(const IntentForest& forest, std::vector<AssistantPolicy*> policies,
                           const SimulatorClients& clients, const SimulationConfig& config,
                           const ConversationLabel& label);

}  // namespace intentsim
