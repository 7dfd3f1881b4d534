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

#include "intentsim/orchestrator/policy.hpp"

#include "intentsim/core/state_delta.hpp"

namespace intentsim {

ChatResponse local_response(std::string text, std::string backend) {
    ChatResponse r;
    r.output_tokens = estimate_tokens(text);
    r.text = std::move(text);
    r.backend = std::move(backend);
    r.estimated_usage = true;
    return r;
}

ChatResponse NullPolicy::respond(const PolicyContext&) { return local_response("", "null"); }

ChatResponse OraclePolicy::respond(const PolicyContext& context) {
    const IntentForest& forest = context.forest;
    std::string text;
    if (context.turn == 0) {
        for (const auto& n : forest.nodes()) {
            if (n.state == DiscoveryStatus::Discovered) text += n.text + "\n";
        }
        return local_response(std::move(text), "oracle");
    }
    const auto root = frontier_root(forest);
    if (!root) return local_response("Is there anything else you would like to change?", "oracle");
    const auto refinement = refinement_space(forest);
    for (const auto& id : forest.subtree(*root)) {
        const IntentNode& n = forest.node(id);
        const bool engageable = (n.is_root() && n.state != DiscoveryStatus::Discovered) ||
                                refinement.contains(id);
        if (n.state == DiscoveryStatus::Discovered || engageable) {
            text += "Do you want it to be this: " + n.text + "?\n";
        }
    }
    return local_response(std::move(text), "oracle");
}

ScriptedPolicy::ScriptedPolicy(std::vector<std::string> texts, std::optional<std::string> final_artifact,
                               std::string label)
    : texts_(std::move(texts)), final_artifact_(std::move(final_artifact)), label_(std::move(label)) {}

ScriptedPolicy ScriptedPolicy::from_json(const Json& json, std::string label) {
    try {
        if (json.is_array()) return ScriptedPolicy(json.get<std::vector<std::string>>(), std::nullopt, label);
        std::optional<std::string> final_artifact;
        if (json.contains("final_artifact")) final_artifact = json.at("final_artifact").get<std::string>();
        return ScriptedPolicy(json.at("turns").get<std::vector<std::string>>(), final_artifact, label);
    } catch (const Json::exception& e) {
        throw SchemaError("scripted policy: " + std::string(e.what()));
    }
}

ChatResponse ScriptedPolicy::respond(const PolicyContext& context) {
    if (context.turn == 0) {
        if (!final_artifact_) throw PreconditionError(label_ + ": script has no final artifact");
        return local_response(*final_artifact_, "scripted");
    }
    if (context.turn < 1 || static_cast<std::size_t>(context.turn) > texts_.size()) {
        throw PreconditionError(label_ + ": script has no text for turn " + std::to_string(context.turn));
    }
    return local_response(texts_[static_cast<std::size_t>(context.turn) - 1], "scripted");
}

GatewayPolicy::GatewayPolicy(ChatClient client, std::string system_prompt, std::string label)
    : client_(std::move(client)), system_(std::move(system_prompt)), label_(std::move(label)) {}

ChatResponse GatewayPolicy::respond(const PolicyContext& context) {
    return client_.complete(client_.make_request(system_, context.history, context.tag));
}

}  // namespace intentsim
