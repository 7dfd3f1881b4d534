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

#include "intentsim/gateway/backend.hpp"

#include <httplib.h>

namespace intentsim {

namespace {

long prompt_chars(const ChatRequest& request) {
    long n = static_cast<long>(request.system.size());
    for (const auto& m : request.messages) n += static_cast<long>(m.text.size());
    return n;
}

}  // namespace

ScriptedBackend::ScriptedBackend(std::vector<Entry> queue) : queue_(queue.begin(), queue.end()) {}

ScriptedBackend::ScriptedBackend(Responder responder) : responder_(std::move(responder)) {}

void ScriptedBackend::push(Entry entry) {
    std::lock_guard lock(mutex_);
    queue_.push_back(std::move(entry));
}

ChatResponse ScriptedBackend::send(const ChatRequest& request) {
    std::string text;
    {
        std::lock_guard lock(mutex_);
        calls_.push_back(request);
        if (!queue_.empty()) {
            Entry next = std::move(queue_.front());
            queue_.pop_front();
            if (auto* failure = std::get_if<Failure>(&next)) {
                if (failure->transient) throw TransientError(failure->message);
                throw GatewayError(failure->message);
            }
            text = std::get<std::string>(std::move(next));
        } else if (responder_) {
            text = responder_(request);
        } else {
            throw GatewayError("scripted backend exhausted at request '" + request.tag + "'");
        }
    }
    ChatResponse r;
    r.text = std::move(text);
    r.prompt_tokens = (prompt_chars(request) + 3) / 4;
    r.output_tokens = estimate_tokens(r.text);
    r.backend = name();
    return r;
}

std::vector<ChatRequest> ScriptedBackend::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

std::size_t ScriptedBackend::call_count() const {
    std::lock_guard lock(mutex_);
    return calls_.size();
}

HttpBackend::HttpBackend(Options options) : options_(std::move(options)) {}

ChatResponse HttpBackend::send(const ChatRequest& request) {
    Json messages = Json::array();
    if (!request.system.empty()) {
        messages.push_back({{"role", "system"}, {"content", request.system}});
    }
    for (const auto& m : request.messages) {
        messages.push_back({{"role", m.role}, {"content", m.text}});
    }
    Json body{{"model", request.model},
              {"messages", std::move(messages)},
              {"temperature", request.temperature},
              {"max_tokens", request.max_output}};

    httplib::Client client(options_.base_url);
    client.set_connection_timeout(options_.timeout_seconds, 0);
    client.set_read_timeout(options_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!options_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + options_.api_key);
    }

    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(options_.path, headers, body.dump(), "application/json");
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    if (!res) {
        throw TransientError("http transport error: " + httplib::to_string(res.error()));
    }
    if (res->status == 401 || res->status == 403) {
        throw AuthError("backend rejected credentials (HTTP " + std::to_string(res->status) + ")");
    }
    if (res->status == 408 || res->status == 429 || res->status >= 500) {
        throw TransientError("backend returned HTTP " + std::to_string(res->status));
    }
    if (res->status != 200) {
        throw GatewayError("backend returned HTTP " + std::to_string(res->status) + ": " +
                           res->body.substr(0, 200));
    }
    ChatResponse out;
    try {
        const Json reply = Json::parse(res->body);
        out.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
        if (auto usage = reply.find("usage"); usage != reply.end() && usage->is_object()) {
            out.prompt_tokens = usage->value("prompt_tokens", 0L);
            out.output_tokens = usage->value("completion_tokens", 0L);
        } else {
            out.prompt_tokens = (prompt_chars(request) + 3) / 4;
            out.output_tokens = estimate_tokens(out.text);
            out.estimated_usage = true;
        }
    } catch (const Json::exception& e) {
        throw GatewayError(std::string("malformed completion payload: ") + e.what());
    }
    out.latency = elapsed;
    out.backend = name();
    return out;
}

}  // namespace intentsim
