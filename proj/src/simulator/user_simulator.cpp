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

#include "intentsim/simulator/user_simulator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "intentsim/gateway/prompts.hpp"
#include "intentsim/gateway/structured.hpp"
#include "intentsim/util/text.hpp"

namespace intentsim {

std::string_view to_string(Classification c) {
    return c == Classification::Artifact ? "artifact" : "dialog act";
}

std::string_view to_string(EvaluationType t) {
    return t == EvaluationType::Satisfaction ? "satisfaction" : "probing";
}

namespace {

Classification parse_classification(const std::string& label) {
    const std::string l = ascii_lower(label);
    if (l.find("artifact") != std::string::npos) return Classification::Artifact;
    if (l.find("dialog") != std::string::npos) return Classification::DialogAct;
    throw ParseError("response-evaluation: unknown classification_label '" + label + "'");
}

EvaluationType parse_evaluation_type(const std::string& label) {
    const std::string l = ascii_lower(label);
    if (l.find("satisf") != std::string::npos) return EvaluationType::Satisfaction;
    if (l.find("prob") != std::string::npos) return EvaluationType::Probing;
    throw ParseError("response-evaluation: unknown evaluation_type '" + label + "'");
}

}  // namespace

Json history_to_json(const std::vector<ChatMessage>& history) {
    Json out = Json::array();
    for (const auto& m : history) out.push_back({{"role", m.role}, {"content", m.text}});
    return out;
}

Json to_json(const EvaluationResult& result) {
    Json judgments = Json::array();
    for (const auto& j : result.judgments) {
        judgments.push_back({{"node_id", j.node_id},
                             {"engaged", j.engaged},
                             {"near_misses", j.near_misses},
                             {"reasoning", j.reasoning},
                             {"children_evaluated", j.children_evaluated}});
    }
    return Json{{"classification", to_string(result.classification)},
                {"evaluation_type", to_string(result.evaluation_type)},
                {"frontier_tree", result.frontier_tree ? Json(*result.frontier_tree) : Json(nullptr)},
                {"judgments", std::move(judgments)},
                {"warnings", result.warnings}};
}

EvaluationResult evaluation_result_from_json(const Json& json) {
    EvaluationResult r;
    r.classification = parse_classification(json.at("classification").get<std::string>());
    r.evaluation_type = parse_evaluation_type(json.at("evaluation_type").get<std::string>());
    if (!json.at("frontier_tree").is_null()) r.frontier_tree = json.at("frontier_tree").get<std::string>();
    for (const auto& j : json.at("judgments")) {
        r.judgments.push_back({j.at("node_id").get<std::string>(), j.at("engaged").get<bool>(),
                               j.at("near_misses").get<std::vector<std::string>>(),
                               j.at("reasoning").get<std::string>(),
                               j.at("children_evaluated").get<bool>()});
    }
    r.warnings = json.at("warnings").get<std::vector<std::string>>();
    return r;
}

EvaluationResult normalize_evaluation(const IntentForest& forest, const NodeId& frontier,
                                      const Json& reply) {
    EvaluationResult result;
    result.frontier_tree = frontier;
    result.classification = parse_classification(field_text(reply, "classification_label"));
    const EvaluationType stated = parse_evaluation_type(field_text(reply, "evaluation_type"));
    result.evaluation_type = result.classification == Classification::Artifact
                                 ? EvaluationType::Satisfaction
                                 : EvaluationType::Probing;
    if (stated != result.evaluation_type) {
        result.warnings.push_back("evaluation_type '" + std::string(to_string(stated)) +
                                  "' contradicts classification '" +
                                  std::string(to_string(result.classification)) + "'; using '" +
                                  std::string(to_string(result.evaluation_type)) + "'");
    }

    const auto subtree = forest.subtree(frontier);
    const std::set<NodeId> in_subtree(subtree.begin(), subtree.end());
    std::map<NodeId, NodeJudgment> by_id;
    for (const auto& item : field_list(reply, "evaluations")) {
        NodeJudgment j;
        j.node_id = trim_copy(field_text(item, "node_id"));
        if (!in_subtree.contains(j.node_id)) {
            throw ParseError("response-evaluation: judgment for node '" + j.node_id +
                             "' outside frontier tree '" + frontier + "'");
        }
        j.engaged = field_bool(item, "is_satisfied_or_probed");
        j.reasoning = field_text_or(item, "reasoning", "");
        const bool children_flag = item.contains("children_evaluated") && !item["children_evaluated"].is_null()
                                       ? field_bool(item, "children_evaluated")
                                       : j.engaged;
        j.children_evaluated = j.engaged && children_flag && !forest.node(j.node_id).children.empty();
        if (!j.engaged) {
            std::set<std::string> seen;
            for (const auto& v : field_text_list(item, "near_miss")) {
                auto t = trim_copy(v);
                if (!t.empty() && seen.insert(t).second) j.near_misses.push_back(t);
            }
        }
        if (!by_id.emplace(j.node_id, j).second) {
            result.warnings.push_back("duplicate judgment for node '" + j.node_id + "' ignored");
        }
    }

    std::set<NodeId> reachable{frontier};
    for (const auto& id : subtree) {
        auto it = by_id.find(id);
        if (!reachable.contains(id)) {
            if (it != by_id.end()) {
                result.warnings.push_back("judgment for node '" + id +
                                          "' discarded: its parent was not engaged");
            }
            continue;
        }
        if (it == by_id.end()) {
            result.warnings.push_back("node '" + id + "' was reachable but not judged");
            continue;
        }
        if (it->second.engaged) {
            for (const auto& c : forest.node(id).children) reachable.insert(c);
        }
        result.judgments.push_back(it->second);
    }
    return result;
}

EvaluationResult evaluate_response(const IntentForest& forest,
                                   const std::vector<ChatMessage>& history,
                                   const ChatClient& evaluator, const std::string& tag) {
    const auto frontier = frontier_root(forest);
    if (!frontier) return {};
    if (history.empty() || history.back().role != "assistant") {
        throw PreconditionError("evaluate_response: history must end with an assistant message");
    }
    const Json payload{{"chat_history", history_to_json(history)},
                       {"hierarchy", Json::array({subtree_to_json(forest, *frontier)})}};
    const auto name = templates::kResponseEvaluation;
    ChatRequest request = evaluator.make_request(std::string(prompt_template(name).text),
                                                 {{"user", to_yaml(payload)}}, tag);
    const auto reply = complete_structured(evaluator, request, structured_schema(name));
    return normalize_evaluation(forest, *frontier, reply.value);
}

StateDelta apply_updates(IntentForest& forest, const EvaluationResult& evaluation, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("apply_updates: p must lie in [0, 1]");
    StateDelta delta;
    if (evaluation.skipped()) return delta;
    const auto before = forest.snapshot();
    const bool satisfaction = evaluation.evaluation_type == EvaluationType::Satisfaction;

    for (const auto& j : evaluation.judgments) {
        IntentNode& node = forest.node(j.node_id);
        if (j.engaged) {
            if (node.state != DiscoveryStatus::Discovered) {
                delta.transitions.push_back(
                    {node.id, node.state, DiscoveryStatus::Discovered, TransitionCause::Direct});
                node.state = DiscoveryStatus::Discovered;
            }
            if (satisfaction && !node.satisfied) {
                node.satisfied = true;
                delta.satisfaction_changes.push_back({node.id, true});
            }
            continue;
        }
        if (satisfaction && node.satisfied) {
            node.satisfied = false;
            delta.satisfaction_changes.push_back({node.id, false});
        }
        if (node.state == DiscoveryStatus::Discovered || j.near_misses.empty()) continue;
        const double score = p * static_cast<double>(j.near_misses.size());
        if (score <= 0.0) continue;
        const double old = node.threshold;
        if (score >= node.threshold) {
            const auto next = static_cast<DiscoveryStatus>(static_cast<int>(node.state) + 1);
            delta.transitions.push_back({node.id, node.state, next, TransitionCause::Tangential});
            node.state = next;
            node.threshold = node.initial_threshold;
        } else {
            node.threshold = std::max(0.0, node.threshold - score);
        }
        if (node.threshold != old) delta.threshold_changes.push_back({node.id, old, node.threshold});
    }
    delta.discovery_gain = static_cast<int>(forest.snapshot().discovered.size()) -
                           static_cast<int>(before.discovered.size());
    return delta;
}

std::vector<NodeId> leaked_intents(const IntentForest& forest, std::string_view message) {
    std::vector<NodeId> out;
    for (const auto& n : forest.nodes()) {
        if (n.state == DiscoveryStatus::Undiscovered && contains_ci(message, n.text)) out.push_back(n.id);
    }
    return out;
}

namespace {

Json goal_status(const ExpressibleView& view) {
    Json achieved = Json::array();
    for (const auto& a : view.achieved) {
        Json item{{"requirement", a.text}};
        if (!a.update.empty()) item["update"] = a.update;
        achieved.push_back(std::move(item));
    }
    Json status{{"achieved", std::move(achieved)}};
    if (view.pursuing_kind == PursuingKind::None) return status;
    Json pursuing = Json::array();
    for (const auto& p : view.pursuing) {
        Json item{{"requirement", p.text}};
        // Latent goals carry no evaluator reasoning: the user cannot know why.
        if (view.pursuing_kind != PursuingKind::Latent) {
            if (!p.reason.empty()) item["reason"] = p.reason;
            if (!p.update.empty()) item["update"] = p.update;
        }
        pursuing.push_back(std::move(item));
    }
    const char* key = view.pursuing_kind == PursuingKind::Clear   ? "pursuing_clear"
                      : view.pursuing_kind == PursuingKind::Fuzzy ? "pursuing_fuzzy"
                                                                  : "latent_goal";
    status[key] = std::move(pursuing);
    return status;
}

}  // namespace

UserMessage generate_user_message(const IntentForest& forest, const std::vector<ChatMessage>& history,
                                  const StateDelta* last_delta, const EvaluationResult* last_evaluation,
                                  const ChatClient& user, const std::string& tag) {
    std::unordered_map<NodeId, std::string> reasons;
    if (last_evaluation) {
        for (const auto& j : last_evaluation->judgments) reasons[j.node_id] = j.reasoning;
    }
    const auto view = expressible_view(forest, last_delta, reasons);
    Json payload{{"chat_history", history_to_json(history)}, {"goal_status", goal_status(view)}};
    const auto name = templates::kUserResponse;
    const std::string system(prompt_template(name).text);

    UserMessage out;
    for (int attempt = 1; attempt <= 2; ++attempt) {
        const std::string attempt_tag = attempt == 1 ? tag : tag + "#regenerate";
        ChatRequest request = user.make_request(system, {{"user", to_yaml(payload)}}, attempt_tag);
        const auto reply = complete_structured(user, request, structured_schema(name));
        out.text = trim_copy(field_text(reply.value, "user_message"));
        out.attempts = attempt;
        const auto leaked = leaked_intents(forest, out.text);
        if (leaked.empty()) return out;
        out.leaked.insert(out.leaked.end(), leaked.begin(), leaked.end());
        payload["revision_note"] =
            "Your previous user_message stated a latent goal verbatim. Rewrite it without expressing "
            "any latent goal.";
    }
    std::string ids;
    for (const auto& id : out.leaked) ids += (ids.empty() ? "" : ", ") + id;
    throw LeakageError("user message leaked undiscovered intents after regeneration: " + ids);
}

}  // namespace intentsim
