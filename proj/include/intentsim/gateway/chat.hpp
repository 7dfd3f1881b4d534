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
#include <string>
#include <vector>

#include "intentsim/error.hpp"
#include "intentsim/util/json_io.hpp"

namespace intentsim {

struct ChatMessage {
    std::string role;  // "user" or "assistant"
    std::string text;

    bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
    std::string model;
    std::string system;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    int max_output = 1024;
    /// Free label used for cassette keying; the first '/'-separated segment names
    /// the prompt template that produced the request.
    std::string tag;

    /// Throws PreconditionError unless roles alternate starting with "user" and
    /// max_output > 0.
    void validate() const;
    /// Template name encoded in the tag prefix.
    std::string template_name() const;
};

struct ChatResponse {
    std::string text;
    long prompt_tokens = 0;
    long output_tokens = 0;
    std::chrono::milliseconds latency{0};
    std::string backend;
    /// True when token counts are the character-based estimate.
    bool estimated_usage = false;
};

Json to_json(const ChatRequest& request);
Json to_json(const ChatResponse& response);
ChatResponse chat_response_from_json(const Json& json);

/// SHA-256 over the canonical request content and tag.
std::string request_digest(const ChatRequest& request);

/// ceil(characters / 4), the offline token estimate.
long estimate_tokens(std::string_view text);

class GatewayError : public Error {
public:
    using Error::Error;
};

/// Worth retrying: rate limits, timeouts, 5xx.
class TransientError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

class AuthError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

class RetriesExhaustedError : public GatewayError {
public:
    using GatewayError::GatewayError;
};

class ReplayMissError : public GatewayError {
public:
    explicit ReplayMissError(std::string digest)
        : GatewayError("replay miss: no cassette record for request digest " + digest),
          digest_(std::move(digest)) {}
    const std::string& digest() const { return digest_; }

private:
    std::string digest_;
};

}  // namespace intentsim
