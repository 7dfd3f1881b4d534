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

#include "intentsim/orchestrator/transcript.hpp"

namespace intentsim {

namespace {

// Latency is left out so that transcripts depend only on content and usage.
Json usage_json(const ChatResponse& r) {
    return Json{{"text", r.text},
                {"prompt_tokens", r.prompt_tokens},
                {"output_tokens", r.output_tokens},
                {"backend", r.backend},
                {"estimated_usage", r.estimated_usage}};
}

}  // namespace

Json messages_to_json(const std::vector<ChatMessage>& messages) {
    Json out = Json::array();
    for (const auto& m : messages) out.push_back({{"role", m.role}, {"content", m.text}});
    return out;
}

std::vector<ChatMessage> messages_from_json(const Json& json) {
    std::vector<ChatMessage> out;
    for (const auto& m : json) out.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    return out;
}

std::vector<ChatMessage> Transcript::messages() const {
    std::vector<ChatMessage> out;
    for (const auto& t : turns) {
        out.push_back({"user", t.user_message});
        out.push_back({"assistant", t.assistant.text});
    }
    return out;
}

DiscoveryState Transcript::replay_end_state() const {
    DiscoveryState state = initial_state;
    for (const auto& t : turns) apply_to_state(state, t.delta);
    return state;
}

long Transcript::output_tokens() const {
    long total = 0;
    for (const auto& t : turns) total += t.reward.token_count;
    return total;
}

Json to_json(const Transcript& t) {
    Json turns = Json::array();
    for (std::size_t i = 0; i < t.turns.size(); ++i) {
        const Turn& turn = t.turns[i];
        turns.push_back({{"index", i + 1},
                         {"user_message", turn.user_message},
                         {"user_attempts", turn.user_attempts},
                         {"assistant", usage_json(turn.assistant)},
                         {"evaluation", to_json(turn.evaluation)},
                         {"delta", to_json(turn.delta)},
                         {"reward", to_json(turn.reward)}});
    }
    return Json{{"schema", "intentsim.transcript"},
                {"version", 1},
                {"forest_ref", t.forest_ref},
                {"forest", t.forest_document},
                {"artifact_id", t.artifact_id},
                {"policy", t.policy},
                {"seed", t.seed},
                {"trial", t.trial},
                {"initial_state", to_json(t.initial_state)},
                {"turns", std::move(turns)},
                {"final_artifact", t.final_artifact ? Json(*t.final_artifact) : Json(nullptr)},
                {"end_state", to_json(t.end_state)},
                {"complete", t.complete},
                {"abort_reason", t.abort_reason},
                {"warnings", t.warnings}};
}

Transcript transcript_from_json(const Json& j) {
    try {
        if (j.value("schema", std::string()) != "intentsim.transcript") {
            throw SchemaError("transcript: missing or wrong schema tag");
        }
        Transcript t;
        t.forest_ref = j.at("forest_ref").get<std::string>();
        t.forest_document = j.at("forest");
        t.artifact_id = j.at("artifact_id").get<std::string>();
        t.policy = j.at("policy").get<std::string>();
        t.seed = j.at("seed").get<std::uint64_t>();
        t.trial = j.at("trial").get<int>();
        t.initial_state = discovery_state_from_json(j.at("initial_state"));
        for (const auto& tj : j.at("turns")) {
            Turn turn;
            turn.user_message = tj.at("user_message").get<std::string>();
            turn.user_attempts = tj.at("user_attempts").get<int>();
            turn.assistant = chat_response_from_json(tj.at("assistant"));
            turn.evaluation = evaluation_result_from_json(tj.at("evaluation"));
            turn.delta = state_delta_from_json(tj.at("delta"));
            turn.reward = reward_breakdown_from_json(tj.at("reward"));
            t.turns.push_back(std::move(turn));
        }
        if (!j.at("final_artifact").is_null()) t.final_artifact = j.at("final_artifact").get<std::string>();
        t.end_state = discovery_state_from_json(j.at("end_state"));
        t.complete = j.at("complete").get<bool>();
        t.abort_reason = j.at("abort_reason").get<std::string>();
        t.warnings = j.at("warnings").get<std::vector<std::string>>();
        return t;
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("transcript: ") + e.what());
    }
}

Json to_json(const PreferencePair& p) {
    return Json{{"context", messages_to_json(p.context)},
                {"chosen", p.chosen},
                {"rejected", p.rejected},
                {"chosen_reward", to_json(p.chosen_reward)},
                {"rejected_reward", to_json(p.rejected_reward)},
                {"chosen_policy", p.chosen_policy},
                {"rejected_policy", p.rejected_policy},
                {"source", {{"artifact_id", p.artifact_id}, {"seed", p.seed}, {"turn", p.turn}}}};
}

PreferencePair preference_pair_from_json(const Json& j) {
    try {
        PreferencePair p;
        p.context = messages_from_json(j.at("context"));
        p.chosen = j.at("chosen").get<std::string>();
        p.rejected = j.at("rejected").get<std::string>();
        p.chosen_reward = reward_breakdown_from_json(j.at("chosen_reward"));
        p.rejected_reward = reward_breakdown_from_json(j.at("rejected_reward"));
        p.chosen_policy = j.at("chosen_policy").get<std::string>();
        p.rejected_policy = j.at("rejected_policy").get<std::string>();
        const auto& s = j.at("source");
        p.artifact_id = s.at("artifact_id").get<std::string>();
        p.seed = s.at("seed").get<std::uint64_t>();
        p.turn = s.at("turn").get<int>();
        return p;
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("preference pair: ") + e.what());
    }
}

}  // namespace intentsim
