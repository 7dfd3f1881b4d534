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

#include "intentsim/core/forest.hpp"
#include "intentsim/core/state_delta.hpp"
#include "intentsim/reward/reward.hpp"
#include "intentsim/simulator/user_simulator.hpp"

namespace intentsim {

struct Turn {
    std::string user_message;
    ChatResponse assistant;
    EvaluationResult evaluation;
    StateDelta delta;
    RewardBreakdown reward;
    int user_attempts = 1;
};

/// One simulated conversation, self-contained for offline metrics and datasets.
struct Transcript {
    std::string forest_ref;  // SHA-256 of the canonical hierarchy document
    Json forest_document;
    std::string artifact_id;
    std::string policy;
    std::uint64_t seed = 0;
    int trial = 0;
    DiscoveryState initial_state;
    std::vector<Turn> turns;
    std::optional<std::string> final_artifact;
    DiscoveryState end_state;
    bool complete = false;
    std::string abort_reason;
    std::vector<std::string> warnings;

    /// Messages u1, r1, ..., ending with the last assistant message.
    std::vector<ChatMessage> messages() const;
    /// Folds every delta over initial_state.
    DiscoveryState replay_end_state() const;
    long output_tokens() const;
};

Json to_json(const Transcript& transcript);
Transcript transcript_from_json(const Json& json);

/// Ranked alternatives for one turn, for preference data.
struct PreferencePair {
    std::vector<ChatMessage> context;  // ends with a user message
    std::string chosen;
    std::string rejected;
    RewardBreakdown chosen_reward;
    RewardBreakdown rejected_reward;
    std::string chosen_policy;
    std::string rejected_policy;
    std::string artifact_id;
    std::uint64_t seed = 0;
    int turn = 0;

    bool operator==(const PreferencePair&) const = default;
};

Json to_json(const PreferencePair& pair);
PreferencePair preference_pair_from_json(const Json& json);

Json messages_to_json(const std::vector<ChatMessage>& messages);
std::vector<ChatMessage> messages_from_json(const Json& json);

}  // namespace intentsim
