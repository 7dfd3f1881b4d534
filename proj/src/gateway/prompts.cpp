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

#include "intentsim/gateway/prompts.hpp"

#include <algorithm>
#include <cctype>

#include "intentsim/error.hpp"

namespace intentsim {

namespace {

// Generated at configure time from assets/prompts/*.md.
constexpr PromptTemplate kTemplates[] = {
#include "prompt_assets.inc"
};

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

}  // namespace

const PromptTemplate& prompt_template(std::string_view name) {
    const PromptTemplate* best = nullptr;
    for (const auto& t : kTemplates) {
        if (t.name == name && (!best || t.version > best->version)) best = &t;
    }
    if (!best) {
        throw PreconditionError("unknown prompt template '" + std::string(name) + "'");
    }
    return *best;
}

std::vector<std::string_view> prompt_template_names() {
    std::vector<std::string_view> out;
    for (const auto& t : kTemplates) {
        if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    }
    return out;
}

std::string render_prompt(std::string_view text, const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if ((c == '{' || c == '}') && i + 1 < text.size() && text[i + 1] == c) {
            out.push_back(c);
            ++i;
            continue;
        }
        if (c == '{') {
            std::size_t j = i + 1;
            while (j < text.size() && is_ident_char(text[j])) ++j;
            if (j > i + 1 && j < text.size() && text[j] == '}' &&
                !std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                const std::string key(text.substr(i + 1, j - i - 1));
                auto it = vars.find(key);
                if (it == vars.end()) {
                    throw PreconditionError("prompt placeholder '{" + key + "}' has no value");
                }
                out += it->second;
                i = j;
                continue;
            }
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace intentsim
