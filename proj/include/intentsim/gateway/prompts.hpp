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

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace intentsim {

/// A prompt template shipped as an asset file (assets/prompts/<name>.v<version>.md).
struct PromptTemplate {
    std::string_view name;
    int version;
    std::string_view text;
};

const PromptTemplate& prompt_template(std::string_view name);
std::vector<std::string_view> prompt_template_names();

/// Replaces `{identifier}` placeholders; `{{` and `}}` collapse to single braces.
/// Placeholders without a value throw PreconditionError.
std::string render_prompt(std::string_view text, const std::map<std::string, std::string>& vars);

namespace templates {
inline constexpr std::string_view kIntentSynthesis = "intent-synthesis";
inline constexpr std::string_view kIntentSynthesisExamples = "intent-synthesis.examples";
inline constexpr std::string_view kIntentAbstraction = "intent-abstraction";
inline constexpr std::string_view kIntentAbstractionExamples = "intent-abstraction.examples";
inline constexpr std::string_view kHierarchyOrganization = "hierarchy-organization";
inline constexpr std::string_view kInitialRequest = "initial-request";
inline constexpr std::string_view kResponseEvaluation = "response-evaluation";
inline constexpr std::string_view kUserResponse = "user-response";
inline constexpr std::string_view kJudgeSatisfaction = "judge-satisfaction";
inline constexpr std::string_view kJudgeInteractivity = "judge-interactivity";
inline constexpr std::string_view kAssistantSynthesis = "assistant-synthesis";
inline constexpr std::string_view kAssistantCollaborative = "assistant-collaborative";
inline constexpr std::string_view kBehaviorAnnotation = "behavior-annotation";
}  // namespace templates

}  // namespace intentsim
