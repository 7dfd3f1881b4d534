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

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include "intentsim/gateway/backend.hpp"
#include "intentsim/gateway/cassette.hpp"

namespace intentsim {

enum class GatewayMode { Live, Record, Replay };
GatewayMode gateway_mode_from_string(std::string_view text);
std::string_view to_string(GatewayMode mode);

struct RetryPolicy {
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{500};
    double backoff_multiplier = 2.0;
};

/// Uniform entry point for every model call.
///
/// Live: backend only. Record: backend, then the response is appended to the
/// cassette. Replay: cassette only; the backend is never touched and a missing
/// digest raises ReplayMissError. Safe for concurrent use when the backend is.
class Gateway {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    Gateway(GatewayMode mode, std::shared_ptr<Backend> backend, std::shared_ptr<Cassette> cassette,
            RetryPolicy retry = {});

    ChatResponse complete(const ChatRequest& request);

    GatewayMode mode() const { return mode_; }
    void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }

private:
    ChatResponse call_with_retry(const ChatRequest& request);

    GatewayMode mode_;
    std::shared_ptr<Backend> backend_;
    std::shared_ptr<Cassette> cassette_;
    RetryPolicy retry_;
    Sleeper sleeper_;
};

/// A gateway bound to one role's model settings (builder, evaluator, ...).
struct ChatClient {
    std::shared_ptr<Gateway> gateway;
    std::string model = "default";
    double temperature = 0.0;
    int max_output = 2048;

    ChatRequest make_request(std::string system, std::vector<ChatMessage> messages,
                             std::string tag) const;
    ChatResponse complete(const ChatRequest& request) const { return gateway->complete(request); }
};

}  // namespace intentsim
