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

#include "intentsim/gateway/gateway.hpp"

#include <thread>

namespace intentsim {

GatewayMode gateway_mode_from_string(std::string_view text) {
    if (text == "live") return GatewayMode::Live;
    if (text == "record") return GatewayMode::Record;
    if (text == "replay") return GatewayMode::Replay;
    throw PreconditionError("unknown gateway mode '" + std::string(text) + "'");
}

std::string_view to_string(GatewayMode mode) {
    switch (mode) {
        case GatewayMode::Live: return "live";
        case GatewayMode::Record: return "record";
        case GatewayMode::Replay: return "replay";
    }
    return "live";
}

Gateway::Gateway(GatewayMode mode, std::shared_ptr<Backend> backend,
                 std::shared_ptr<Cassette> cassette, RetryPolicy retry)
    : mode_(mode),
      backend_(std::move(backend)),
      cassette_(std::move(cassette)),
      retry_(retry),
      sleeper_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
    if (mode_ != GatewayMode::Live && !cassette_) {
        throw PreconditionError("record and replay modes need a cassette");
    }
    if (mode_ != GatewayMode::Replay && !backend_) {
        throw PreconditionError("live and record modes need a backend");
    }
}

ChatResponse Gateway::complete(const ChatRequest& request) {
    request.validate();
    if (mode_ == GatewayMode::Replay) {
        const std::string digest = request_digest(request);
        if (auto hit = cassette_->find(digest)) return *hit;
        throw ReplayMissError(digest);
    }
    ChatResponse response = call_with_retry(request);
    if (mode_ == GatewayMode::Record) {
        cassette_->append(request_digest(request), request, response);
    }
    return response;
}

ChatResponse Gateway::call_with_retry(const ChatRequest& request) {
    auto backoff = retry_.initial_backoff;
    std::string last_error;
    for (int attempt = 0; attempt <= retry_.max_retries; ++attempt) {
        if (attempt > 0) {
            sleeper_(backoff);
            backoff = std::chrono::milliseconds(
                static_cast<long>(static_cast<double>(backoff.count()) * retry_.backoff_multiplier));
        }
        try {
            return backend_->send(request);
        } catch (const TransientError& e) {
            last_error = e.what();
        }
    }
    throw RetriesExhaustedError("request '" + request.tag + "' failed after " +
                                std::to_string(retry_.max_retries + 1) +
                                " attempts: " + last_error);
}

ChatRequest ChatClient::make_request(std::string system, std::vector<ChatMessage> messages,
                                     std::string tag) const {
    ChatRequest r;
    r.model = model;
    r.system = std::move(system);
    r.messages = std::move(messages);
    r.temperature = temperature;
    r.max_output = max_output;
    r.tag = std::move(tag);
    return r;
}

}  // namespace intentsim
