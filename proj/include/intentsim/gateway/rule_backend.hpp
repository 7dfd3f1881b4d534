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

#include <string>
#include <vector>

#include "intentsim/gateway/backend.hpp"

namespace intentsim {

/// Offline stand-in for every model role. It reads the structured payload that
/// each pipeline stage sends and answers in that template's output format using
/// plain lexical rules:
///
///  - intent synthesis: lines starting with "- " become the checklist (falls back
///    to sentences); the topic is the first words of the first line.
///  - abstraction: each level drops trailing words (and dangling stop words).
///  - organization: chains are merged by exact text into a tree.
///  - initial request: selects the first root and names it.
///  - response evaluation: a node is engaged when its words occur contiguously in
///    the assistant message; a message made only of questions is a dialog act.
///    A near-miss is the node's words with a different final word on one line.
///  - user response, judges, behavior annotation: simple keyword heuristics.
///  - anything else is treated as an assistant turn and answered with a draft.
///
/// Responses depend only on the request, so a run is reproducible and can be
/// recorded into a cassette.
class RuleBackend : public Backend {
public:
    ChatResponse send(const ChatRequest& request) override;
    std::string name() const override { return "rule"; }

    /// Produces the completion text without usage bookkeeping.
    static std::string respond(const ChatRequest& request);
};

/// Lowercased words with surrounding punctuation stripped.
std::vector<std::string> lexical_words(std::string_view text);

/// True when `needle`'s words occur contiguously in `haystack`'s words.
bool contains_phrase(std::string_view haystack, std::string_view needle);

}  // namespace intentsim
