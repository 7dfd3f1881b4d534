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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "intentsim/core/forest.hpp"
#include "intentsim/gateway/gateway.hpp"

namespace intentsim {

/// What an assistant sees when asked for its next message.
struct PolicyContext {
    const IntentForest& forest;
    const std::vector<ChatMessage>& history;  // ends with a user message
    int turn;                                 // 1-based; 0 for final-artifact elicitation
    std::string tag;
};

/// The assistant under evaluation. Implementations throw on failure.
class AssistantPolicy {
public:
    virtual ~AssistantPolicy() = default;
    virtual ChatResponse respond(const PolicyContext& context) = 0;
    virtual std::string label() const = 0;
};

/// Always answers with an empty message.
class NullPolicy : public AssistantPolicy {
public:
    ChatResponse respond(const PolicyContext& context) override;
    std::string label() const override { return "null"; }
};

/// Reads the hidden forest and asks, one question per line, about every
/// Discovered node of the frontier tree and every node that can be engaged next
/// (its Undiscovered root, or refinement-space nodes inside it). Final artifacts
/// list the text of every Discovered node.
class OraclePolicy : public AssistantPolicy {
public:
    ChatResponse respond(const PolicyContext& context) override;
    std::string label() const override { return "oracle"; }
};

/// Replays fixed texts: turn t gets texts[t - 1]; the final-artifact request gets
/// `final_artifact`. Asking past the script is a failure.
class ScriptedPolicy : public AssistantPolicy {
public:
    ScriptedPolicy(std::vector<std::string> texts, std::optional<std::string> final_artifact,
                   std::string label = "scripted");
    /// Reads {"turns": [...], "final_artifact": "..."} or a bare list of turns.
    static ScriptedPolicy from_json(const Json& json, std::string label);

    ChatResponse respond(const PolicyContext& context) override;
    std::string label() const override { return label_; }
    std::size_t size() const { return texts_.size(); }

private:
    std::vector<std::string> texts_;
    std::optional<std::string> final_artifact_;
    std::string label_;
};

/// A chat model behind the gateway, optionally primed with a system prompt.
class GatewayPolicy : public AssistantPolicy {
public:
    GatewayPolicy(ChatClient client, std::string system_prompt, std::string label);

    ChatResponse respond(const PolicyContext& context) override;
    std::string label() const override { return label_; }

private:
    ChatClient client_;
    std::string system_;
    std::string label_;
};

/// Usage for text produced without a model: ceil(characters / 4), marked estimated.
ChatResponse local_response(std::string text, std::string backend);

}  // namespace intentsim
