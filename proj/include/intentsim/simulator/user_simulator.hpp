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

#include "intentsim/core/forest.hpp"
#include "intentsim/core/state_delta.hpp"
#include "intentsim/gateway/gateway.hpp"

namespace intentsim {

enum class Classification { Artifact, DialogAct };
enum class EvaluationType { Satisfaction, Probing };
std::string_view to_string(Classification c);
std::string_view to_string(EvaluationType t);

/// How the assistant's last message engaged one node.
struct NodeJudgment {
    NodeId node_id;
    bool engaged = false;
    std::vector<std::string> near_misses;  // empty when engaged
    std::string reasoning;
    bool children_evaluated = false;  // implies engaged

    bool operator==(const NodeJudgment&) const = default;
};

/// Verdict on one assistant message, scoped to the frontier tree.
struct EvaluationResult {
    Classification classification = Classification::DialogAct;
    EvaluationType evaluation_type = EvaluationType::Probing;
    /// Depth-first order; a node is judged only if it is the frontier root or its
    /// parent was engaged.
    std::vector<NodeJudgment> judgments;
    /// Absent when every node was already Discovered and nothing was evaluated.
    std::optional<NodeId> frontier_tree;
    std::vector<std::string> warnings;

    bool skipped() const { return !frontier_tree.has_value(); }
    bool operator==(const EvaluationResult&) const = default;
};

Json to_json(const EvaluationResult& result);
EvaluationResult evaluation_result_from_json(const Json& json);

/// Turns a parsed evaluator reply into a legal result for the subtree rooted at
/// `frontier`: out-of-traversal judgments are dropped with a warning, near-misses
/// are deduplicated and cleared on engaged nodes, and the evaluation type follows
/// the classification. Throws ParseError for ids outside the subtree.
EvaluationResult normalize_evaluation(const IntentForest& forest, const NodeId& frontier,
                                      const Json& reply);

/// Asks the evaluator to judge the last assistant message in `history` against the
/// frontier tree only. Makes no call when there is no frontier.
EvaluationResult evaluate_response(const IntentForest& forest,
                                   const std::vector<ChatMessage>& history,
                                   const ChatClient& evaluator, const std::string& tag);

/// Heuristic state updater. Engaged nodes become Discovered (and satisfied on a
/// satisfaction turn); on such a turn, satisfied nodes judged un-engaged revert to
/// unsatisfied. Un-engaged nodes with near-misses accumulate exposure
/// p * |near_misses| against their threshold: at or above it the node advances one
/// state and the threshold resets to its initial value, below it the threshold
/// drops by the exposure (floored at 0). A zero exposure changes nothing.
StateDelta apply_updates(IntentForest& forest, const EvaluationResult& evaluation, double p);

struct UserMessage {
    std::string text;
    int attempts = 1;
    /// Leaked node ids found in rejected attempts.
    std::vector<NodeId> leaked;
};

/// Ids of Undiscovered nodes whose exact text appears in `message` (case-insensitive).
std::vector<NodeId> leaked_intents(const IntentForest& forest, std::string_view message);

/// Next simulated user message under the expressiveness filter. A message that
/// leaks an Undiscovered node's text is regenerated once; a second leak throws
/// LeakageError.
UserMessage generate_user_message(const IntentForest& forest, const std::vector<ChatMessage>& history,
                                  const StateDelta* last_delta, const EvaluationResult* last_evaluation,
                                  const ChatClient& user, const std::string& tag);

/// The chat history as the list of {role, content} entries used in prompts.
Json history_to_json(const std::vector<ChatMessage>& history);

}  // namespace intentsim
