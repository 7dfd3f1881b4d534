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

#include "intentsim/gateway/chat.hpp"

#include "intentsim/util/digest.hpp"

namespace intentsim {

void ChatRequest::validate() const {
    if (max_output <= 0) {
        throw PreconditionError("chat request '" + tag + "': max_output must be positive");
    }
    if (messages.empty()) {
        throw PreconditionError("chat request '" + tag + "': no messages");
    }
    for (std::size_t i = 0; i < messages.size(); ++i) {
        const char* expected = i % 2 == 0 ? "user" : "assistant";
        if (messages[i].role != expected) {
            throw PreconditionError("chat request '" + tag + "': message " + std::to_string(i) +
                                    " has role '" + messages[i].role + "', expected '" +
                                    expected + "'");
        }
    }
}

std::string ChatRequest::template_name() const { return tag.substr(0, tag.find('/')); }

Json to_json(const ChatRequest& request) {
    Json messages = Json::array();
    for (const auto& m : request.messages) {
        messages.push_back({{"role", m.role}, {"text", m.text}});
    }
    return Json{{"model", request.model},
                {"system", request.system},
                {"messages", std::move(messages)},
                {"temperature", request.temperature},
                {"max_output", request.max_output},
                {"tag", request.tag}};
}

Json to_json(const ChatResponse& response) {
    return Json{{"text", response.text},
                {"prompt_tokens", response.prompt_tokens},
                {"output_tokens", response.output_tokens},
                {"latency_ms", response.latency.count()},
                {"backend", response.backend},
                {"estimated_usage", response.estimated_usage}};
}

ChatResponse chat_response_from_json(const Json& json) {
    ChatResponse r;
    r.text = json.at("text").get<std::string>();
    r.prompt_tokens = json.at("prompt_tokens").get<long>();
    r.output_tokens = json.at("output_tokens").get<long>();
    r.latency = std::chrono::milliseconds(json.value("latency_ms", 0L));
    r.backend = json.value("backend", std::string());
    r.estimated_usage = json.value("estimated_usage", false);
    return r;
}

std::string request_digest(const ChatRequest& request) {
    return sha256_hex(canonical_dump(to_json(request)));
}

long estimate_tokens(std::string_view text) {
    return static_cast<long>((text.size() + 3) / 4);
}

}  // namespace intentsim
