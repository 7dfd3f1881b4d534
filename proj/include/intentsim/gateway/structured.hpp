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

#include <optional>
#include <string>
#include <vector>

#include "intentsim/gateway/gateway.hpp"

namespace intentsim {

enum class StructuredFormat { Yaml, Json };

/// Expected shape of one prompt template's reply.
struct StructuredSchema {
    std::string name;
    StructuredFormat format = StructuredFormat::Yaml;
    std::vector<std::string> required;
};

/// Schema registered for a prompt template; throws PreconditionError if unknown.
const StructuredSchema& structured_schema(std::string_view name);

/// Extracts the first fenced block (or the whole text when unfenced), parses it
/// and checks required top-level keys. Scalars come back as JSON strings; use
/// the field helpers below to interpret them. Throws ParseError.
Json parse_structured(std::string_view text, const StructuredSchema& schema);

/// Text inside the first ``` fence, or nullopt.
std::optional<std::string> first_fenced_block(std::string_view text);

struct StructuredReply {
    Json value;
    ChatResponse response;
    int attempts = 1;
};

/// Completes `request` and parses the reply. On a parse failure, re-prompts
/// exactly once with the error appended; a second failure throws ParseError
/// carrying both messages.
StructuredReply complete_structured(const ChatClient& client, const ChatRequest& request,
                                    const StructuredSchema& schema);

// Field helpers over normalized structured values. All throw ParseError naming the field.
std::string field_text(const Json& obj, std::string_view key);
std::string field_text_or(const Json& obj, std::string_view key, std::string fallback);
bool field_bool(const Json& obj, std::string_view key);
double field_number(const Json& obj, std::string_view key);
std::vector<std::string> field_text_list(const Json& obj, std::string_view key);
const Json& field_list(const Json& obj, std::string_view key);
bool scalar_bool(const Json& value, std::string_view what);
double scalar_number(const Json& value, std::string_view what);
std::string scalar_text(const Json& value, std::string_view what);

/// YAML rendering of a JSON value (block style, strings quoted when needed).
std::string to_yaml(const Json& value);

}  // namespace intentsim
