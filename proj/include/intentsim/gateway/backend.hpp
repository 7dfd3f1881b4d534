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

#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <variant>
#include <string>
#include <vector>

#include "intentsim/gateway/chat.hpp"

namespace intentsim {

/// A chat-completion provider. Implementations throw TransientError for
/// retryable failures and AuthError for credential problems.
class Backend {
public:
    virtual ~Backend() = default;
    virtual ChatResponse send(const ChatRequest& request) = 0;
    virtual std::string name() const = 0;
};

/// Deterministic mock that replays a queue of canned completions in order.
/// Usage is ceil(characters / 4) for both prompt and output.
class ScriptedBackend : public Backend {
public:
    struct Failure {
        bool transient = true;
        std::string message = "scripted failure";
    };
    using Entry = std::variant<std::string, Failure>;
    using Responder = std::function<std::string(const ChatRequest&)>;

    ScriptedBackend() = default;
    explicit ScriptedBackend(std::vector<Entry> queue);
    explicit ScriptedBackend(Responder responder);

    void push(Entry entry);
    ChatResponse send(const ChatRequest& request) override;
    std::string name() const override { return "scripted"; }

    std::vector<ChatRequest> calls() const;
    std::size_t call_count() const;

private:
    mutable std::mutex mutex_;
    std::deque<Entry> queue_;
    Responder responder_;
    std::vector<ChatRequest> calls_;
};

/// OpenAI-compatible /v1/chat/completions client.
class HttpBackend : public Backend {
public:
    struct Options {
        std::string base_url;  // scheme://host[:port]
        std::string path = "/v1/chat/completions";
        std::string api_key;
        int timeout_seconds = 120;
    };

    explicit HttpBackend(Options options);
    ChatResponse send(const ChatRequest& request) override;
    std::string name() const override { return "http"; }

private:
    Options options_;
};

}  // namespace intentsim
