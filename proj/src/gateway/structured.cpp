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

#include "intentsim/gateway/structured.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>

#include <yaml-cpp/yaml.h>

#include "intentsim/gateway/prompts.hpp"

namespace intentsim {

namespace {

const std::map<std::string, StructuredSchema, std::less<>>& registry() {
    static const std::map<std::string, StructuredSchema, std::less<>> schemas = [] {
        std::map<std::string, StructuredSchema, std::less<>> m;
        auto add = [&](std::string_view name, StructuredFormat format,
                       std::vector<std::string> required) {
            m.emplace(std::string(name), StructuredSchema{std::string(name), format, std::move(required)});
        };
        using namespace templates;
        add(kIntentSynthesis, StructuredFormat::Yaml, {"artifact_topic", "description", "checklist"});
        add(kIntentAbstraction, StructuredFormat::Yaml, {"results"});
        add(kHierarchyOrganization, StructuredFormat::Yaml, {"hierarchy"});
        add(kInitialRequest, StructuredFormat::Yaml, {"selected_criteria", "initial_request"});
        add(kResponseEvaluation, StructuredFormat::Yaml,
            {"classification_label", "evaluation_type", "evaluations"});
        add(kUserResponse, StructuredFormat::Yaml, {"user_message"});
        add(kJudgeSatisfaction, StructuredFormat::Json, {"evaluations"});
        add(kJudgeInteractivity, StructuredFormat::Json, {"interactivity"});
        add(kBehaviorAnnotation, StructuredFormat::Yaml, {"labels"});
        return m;
    }();
    return schemas;
}

Json from_yaml(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined:
            return nullptr;
        case YAML::NodeType::Scalar:
            return node.Scalar();
        case YAML::NodeType::Sequence: {
            Json arr = Json::array();
            for (const auto& item : node) arr.push_back(from_yaml(item));
            return arr;
        }
        case YAML::NodeType::Map: {
            Json obj = Json::object();
            for (const auto& kv : node) obj[kv.first.as<std::string>()] = from_yaml(kv.second);
            return obj;
        }
    }
    return nullptr;
}

// JSON scalars become strings so both formats share one accessor path.
Json normalize(const Json& value) {
    if (value.is_object()) {
        Json obj = Json::object();
        for (auto it = value.begin(); it != value.end(); ++it) obj[it.key()] = normalize(it.value());
        return obj;
    }
    if (value.is_array()) {
        Json arr = Json::array();
        for (const auto& v : value) arr.push_back(normalize(v));
        return arr;
    }
    if (value.is_null() || value.is_string()) return value;
    return value.dump();
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void emit(YAML::Emitter& out, const Json& value) {
    if (value.is_object()) {
        out << YAML::BeginMap;
        for (auto it = value.begin(); it != value.end(); ++it) {
            out << YAML::Key << it.key() << YAML::Value;
            emit(out, it.value());
        }
        out << YAML::EndMap;
    } else if (value.is_array()) {
        out << YAML::BeginSeq;
        for (const auto& v : value) emit(out, v);
        out << YAML::EndSeq;
    } else if (value.is_string()) {
        const auto& s = value.get_ref<const std::string&>();
        if (s.find('\n') != std::string::npos) {
            out << YAML::Literal << s;
        } else {
            out << YAML::DoubleQuoted << s;
        }
    } else if (value.is_null()) {
        out << YAML::Null;
    } else {
        out << value.dump();
    }
}

}  // namespace

const StructuredSchema& structured_schema(std::string_view name) {
    const auto& r = registry();
    auto it = r.find(name);
    if (it == r.end()) {
        throw PreconditionError("no structured schema registered for '" + std::string(name) + "'");
    }
    return it->second;
}

std::optional<std::string> first_fenced_block(std::string_view text) {
    auto open = text.find("```");
    if (open == std::string_view::npos) return std::nullopt;
    auto body = text.find('\n', open);
    if (body == std::string_view::npos) return std::string();
    ++body;
    auto close = text.find("```", body);
    while (close != std::string_view::npos && close != body && text[close - 1] != '\n') {
        close = text.find("```", close + 3);
    }
    // A fence glued to the last line of the body ("}```") closes at the last fence.
    if (close == std::string_view::npos) close = text.rfind("```");
    if (close == std::string_view::npos || close < body) return std::string(text.substr(body));
    return std::string(text.substr(body, close - body));
}

Json parse_structured(std::string_view text, const StructuredSchema& schema) {
    const std::string block = first_fenced_block(text).value_or(std::string(text));
    Json value;
    bool parsed = false;
    std::string error;
    if (schema.format == StructuredFormat::Json) {
        try {
            value = normalize(Json::parse(block));
            parsed = true;
        } catch (const Json::exception& e) {
            error = e.what();
        }
    }
    if (!parsed) {
        try {
            value = from_yaml(YAML::Load(block));
            parsed = true;
        } catch (const YAML::Exception& e) {
            error = error.empty() ? e.what() : error + "; " + e.what();
        }
    }
    if (!parsed) {
        throw ParseError(schema.name + ": unparseable output: " + error);
    }
    if (!value.is_object()) {
        throw ParseError(schema.name + ": expected a mapping at the top level");
    }
    for (const auto& key : schema.required) {
        if (!value.contains(key)) {
            throw ParseError(schema.name + ": missing required field '" + key + "'");
        }
    }
    return value;
}

StructuredReply complete_structured(const ChatClient& client, const ChatRequest& request,
                                    const StructuredSchema& schema) {
    ChatResponse first = client.complete(request);
    std::string first_error;
    try {
        return {parse_structured(first.text, schema), first, 1};
    } catch (const ParseError& e) {
        first_error = e.what();
    }
    ChatRequest repair = request;
    repair.messages.push_back({"assistant", first.text});
    repair.messages.push_back(
        {"user", "Your previous output could not be parsed (" + first_error +
                     "). Return the complete output again, exactly in the required format."});
    repair.tag = request.tag + "#repair";
    ChatResponse second = client.complete(repair);
    try {
        return {parse_structured(second.text, schema), second, 2};
    } catch (const ParseError& e) {
        throw ParseError(schema.name + ": output unparseable after repair; first attempt: " +
                         first_error + "; repair attempt: " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Field helpers

const Json& field_list(const Json& obj, std::string_view key) {
    static const Json kEmpty = Json::array();
    auto it = obj.find(std::string(key));
    if (it == obj.end() || it->is_null()) return kEmpty;
    if (!it->is_array()) throw ParseError("field '" + std::string(key) + "' must be a list");
    return *it;
}

std::string scalar_text(const Json& value, std::string_view what) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_number() || value.is_boolean()) return value.dump();
    throw ParseError("field '" + std::string(what) + "' must be text");
}

bool scalar_bool(const Json& value, std::string_view what) {
    if (value.is_boolean()) return value.get<bool>();
    if (value.is_string()) {
        const auto s = lower(value.get<std::string>());
        if (s == "true" || s == "yes") return true;
        if (s == "false" || s == "no") return false;
    }
    throw ParseError("field '" + std::string(what) + "' must be true or false");
}

double scalar_number(const Json& value, std::string_view what) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) {
        const auto& s = value.get_ref<const std::string&>();
        char* end = nullptr;
        const double d = std::strtod(s.c_str(), &end);
        if (!s.empty() && end == s.c_str() + s.size()) return d;
    }
    throw ParseError("field '" + std::string(what) + "' must be a number");
}

std::string field_text(const Json& obj, std::string_view key) {
    auto it = obj.find(std::string(key));
    if (it == obj.end() || it->is_null()) {
        throw ParseError("missing required field '" + std::string(key) + "'");
    }
    return scalar_text(*it, key);
}

std::string field_text_or(const Json& obj, std::string_view key, std::string fallback) {
    auto it = obj.find(std::string(key));
    if (it == obj.end() || it->is_null()) return fallback;
    return scalar_text(*it, key);
}

bool field_bool(const Json& obj, std::string_view key) {
    auto it = obj.find(std::string(key));
    if (it == obj.end() || it->is_null()) {
        throw ParseError("missing required field '" + std::string(key) + "'");
    }
    return scalar_bool(*it, key);
}

double field_number(const Json& obj, std::string_view key) {
    auto it = obj.find(std::string(key));
    if (it == obj.end() || it->is_null()) {
        throw ParseError("missing required field '" + std::string(key) + "'");
    }
    return scalar_number(*it, key);
}

std::vector<std::string> field_text_list(const Json& obj, std::string_view key) {
    std::vector<std::string> out;
    for (const auto& v : field_list(obj, key)) out.push_back(scalar_text(v, key));
    return out;
}

std::string to_yaml(const Json& value) {
    YAML::Emitter out;
    emit(out, value);
    return std::string(out.c_str()) + "\n";
}

}  // namespace intentsim
