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

#include "intentsim/builder/hierarchy_builder.hpp"

#include <map>
#include <optional>
#include <unordered_map>

#include "intentsim/gateway/prompts.hpp"
#include "intentsim/gateway/structured.hpp"
#include "intentsim/util/text.hpp"

namespace intentsim {

namespace {

std::string tag(std::string_view name, std::string_view scope) {
    return std::string(name) + "/" + std::string(scope);
}

StructuredReply ask(const ChatClient& client, std::string_view name, std::string system,
                    const Json& payload, std::string_view scope) {
    ChatRequest request = client.make_request(std::move(system), {{"user", to_yaml(payload)}},
                                              tag(name, scope));
    return complete_structured(client, request, structured_schema(name));
}

std::string template_text(std::string_view name) { return std::string(prompt_template(name).text); }

// Intermediate tree used while validating and deduplicating the organizer output.
struct Draft {
    std::string text;
    std::vector<std::size_t> children;
    bool removed = false;
};

void read_draft(const Json& node, const std::optional<std::string>& parent_id, std::string path,
                std::vector<Draft>& drafts, std::set<std::string>& ids,
                std::optional<std::size_t> parent, std::vector<std::size_t>& roots) {
    if (!node.is_object()) throw SchemaError(path + ": node must be a mapping");
    const std::string id = trim_copy(field_text(node, "id"));
    const std::string text = trim_copy(field_text(node, "text"));
    if (!is_valid_node_id(id)) throw SchemaError(path + ": malformed node id '" + id + "'");
    if (parent_id_of(id) != parent_id) {
        throw SchemaError(path + ": node '" + id + "' " +
                          (parent_id ? "under '" + *parent_id + "' does not extend its parent's id"
                                     : "is listed as a root but its parent is missing"));
    }
    if (!ids.insert(id).second) throw SchemaError(path + ": duplicate node id '" + id + "'");
    if (text.empty()) throw SchemaError(path + ": node '" + id + "' has empty text");
    drafts.push_back({text, {}, false});
    const std::size_t index = drafts.size() - 1;
    if (parent) {
        drafts[*parent].children.push_back(index);
    } else {
        roots.push_back(index);
    }
    const auto& children = field_list(node, "children");
    for (std::size_t i = 0; i < children.size(); ++i) {
        read_draft(children[i], id, path + ".children[" + std::to_string(i) + "]", drafts, ids, index,
                   roots);
    }
}

void preorder(const std::vector<Draft>& drafts, std::size_t index, std::vector<std::size_t>& out) {
    out.push_back(index);
    for (auto c : drafts[index].children) preorder(drafts, c, out);
}

// Later duplicates fold into the first node (in preorder) with the same text;
// their children are reattached to the survivor.
void deduplicate(std::vector<Draft>& drafts, std::vector<std::size_t>& roots) {
    for (;;) {
        std::vector<std::size_t> order;
        for (auto r : roots) preorder(drafts, r, order);
        std::unordered_map<std::string, std::size_t> first;
        std::optional<std::pair<std::size_t, std::size_t>> dup;  // (survivor, duplicate)
        for (auto i : order) {
            auto [it, inserted] = first.emplace(drafts[i].text, i);
            if (!inserted) {
                dup = {it->second, i};
                break;
            }
        }
        if (!dup) return;
        auto [keep, drop] = *dup;
        for (auto& d : drafts) std::erase(d.children, drop);
        std::erase(roots, drop);
        for (auto c : drafts[drop].children) {
            // Reattaching an ancestor of the survivor under it would form a cycle.
            std::vector<std::size_t> below;
            preorder(drafts, c, below);
            if (std::find(below.begin(), below.end(), keep) != below.end()) {
                throw SchemaError("hierarchy: duplicate text '" + drafts[drop].text +
                                  "' would make node '" + drafts[c].text + "' its own ancestor");
            }
            if (std::find(drafts[keep].children.begin(), drafts[keep].children.end(), c) ==
                drafts[keep].children.end()) {
                drafts[keep].children.push_back(c);
            }
        }
        drafts[drop].children.clear();
        drafts[drop].removed = true;
    }
}

void emit(const std::vector<Draft>& drafts, std::size_t index, const NodeId& id,
          std::optional<NodeId> parent, IntentForest& forest) {
    forest.add_node(id, drafts[index].text, std::move(parent));
    const auto& children = drafts[index].children;
    for (std::size_t i = 0; i < children.size(); ++i) {
        emit(drafts, children[i], id + "." + std::to_string(i + 1), id, forest);
    }
}

}  // namespace

IntentSynthesis synthesize_intents(std::string_view artifact, std::string_view artifact_type,
                                   const ChatClient& client, std::string_view scope, Json* audit) {
    if (trim_copy(artifact).empty()) throw PreconditionError("synthesize_intents: artifact is empty");
    const std::string system = render_prompt(
        template_text(templates::kIntentSynthesis),
        {{"examples", template_text(templates::kIntentSynthesisExamples)}});
    const Json payload{{"artifact_type", artifact_type}, {"artifact", artifact}};
    const auto reply = ask(client, templates::kIntentSynthesis, system, payload, scope);
    if (audit) *audit = reply.value;

    IntentSynthesis out;
    out.topic = trim_copy(field_text(reply.value, "artifact_topic"));
    out.description = trim_copy(field_text(reply.value, "description"));
    for (const auto& item : field_text_list(reply.value, "checklist")) {
        if (auto t = trim_copy(item); !t.empty()) out.checklist.push_back(t);
    }
    if (out.checklist.empty()) throw ParseError("intent-synthesis: checklist is empty");
    return out;
}

std::vector<AbstractionLadder> abstract_intents(const std::vector<std::string>& checklist,
                                                std::string_view artifact_type,
                                                std::string_view topic, int depth,
                                                const ChatClient& client, std::string_view scope,
                                                Json* audit) {
    if (checklist.empty()) throw PreconditionError("abstract_intents: checklist is empty");
    if (depth < 1) throw PreconditionError("abstract_intents: depth must be at least 1");

    std::vector<AbstractionLadder> ladders;
    for (std::size_t i = 0; i < checklist.size(); ++i) {
        ladders.push_back({std::to_string(i + 1), {{checklist[i]}}});
    }
    if (depth == 1) return ladders;

    const int steps = depth - 1;
    Json criteria = Json::array();
    for (const auto& ladder : ladders) {
        criteria.push_back({{"criterion_id", ladder.criterion_id},
                            {"num_abstractions", steps},
                            {"checklist", ladder.levels.back()}});
    }
    const std::string system = render_prompt(
        template_text(templates::kIntentAbstraction),
        {{"examples", template_text(templates::kIntentAbstractionExamples)}});
    const Json payload{{"artifact_type", artifact_type}, {"artifact_topic", topic}, {"criteria", criteria}};
    const auto reply = ask(client, templates::kIntentAbstraction, system, payload, scope);
    if (audit) *audit = reply.value;

    std::map<std::string, const Json*> by_id;
    for (const auto& result : field_list(reply.value, "results")) {
        const std::string id = trim_copy(field_text(result, "criterion_id"));
        if (!by_id.emplace(id, &result).second) {
            throw ParseError("intent-abstraction: criterion '" + id + "' returned twice");
        }
    }
    for (auto& ladder : ladders) {
        auto it = by_id.find(ladder.criterion_id);
        if (it == by_id.end()) {
            throw ParseError("intent-abstraction: no result for criterion '" + ladder.criterion_id + "'");
        }
        const auto& levels = field_list(*it->second, "abstractions");
        if (levels.size() != static_cast<std::size_t>(steps)) {
            throw ParseError("intent-abstraction: criterion '" + ladder.criterion_id + "' has " +
                             std::to_string(levels.size()) + " abstraction levels, expected " +
                             std::to_string(steps));
        }
        // The reply lists the first (least general) abstraction first.
        std::vector<std::vector<std::string>> general_first;
        for (auto level = levels.rbegin(); level != levels.rend(); ++level) {
            std::vector<std::string> items;
            for (const auto& item : field_text_list(*level, "checklist")) {
                if (auto t = trim_copy(item); !t.empty()) items.push_back(t);
            }
            if (items.empty()) {
                throw ParseError("intent-abstraction: criterion '" + ladder.criterion_id +
                                 "' has an empty level");
            }
            general_first.push_back(std::move(items));
        }
        general_first.push_back(ladder.levels.back());
        ladder.levels = std::move(general_first);
    }
    return ladders;
}

IntentForest organize_hierarchy(const std::vector<AbstractionLadder>& ladders,
                                const ChatClient& client, std::string_view scope, Json* audit) {
    if (ladders.empty()) throw PreconditionError("organize_hierarchy: no ladders");
    Json criteria = Json::array();
    std::set<std::string> specific;
    for (const auto& ladder : ladders) {
        if (ladder.levels.empty()) {
            throw PreconditionError("organize_hierarchy: ladder '" + ladder.criterion_id + "' is empty");
        }
        Json levels = Json::array();
        for (std::size_t k = 0; k < ladder.levels.size(); ++k) {
            levels.push_back({{"level", k + 1}, {"checklist", ladder.levels[k]}});
        }
        criteria.push_back({{"criterion_id", ladder.criterion_id},
                            {"num_abstractions", ladder.levels.size()},
                            {"abstractions", std::move(levels)}});
        specific.insert(ladder.levels.back().begin(), ladder.levels.back().end());
    }
    const auto reply = ask(client, templates::kHierarchyOrganization,
                           template_text(templates::kHierarchyOrganization),
                           Json{{"criteria", criteria}}, scope);
    if (audit) *audit = reply.value;

    std::vector<Draft> drafts;
    std::vector<std::size_t> roots;
    std::set<std::string> ids;
    const auto& trees = field_list(reply.value, "hierarchy");
    for (std::size_t i = 0; i < trees.size(); ++i) {
        read_draft(trees[i], std::nullopt, "hierarchy[" + std::to_string(i) + "]", drafts, ids,
                   std::nullopt, roots);
    }
    if (roots.empty()) throw SchemaError("hierarchy: no trees");
    deduplicate(drafts, roots);

    IntentForest forest;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        emit(drafts, roots[i], std::to_string(i + 1), std::nullopt, forest);
    }
    std::set<std::string> texts;
    for (const auto& n : forest.nodes()) texts.insert(n.text);
    for (const auto& item : specific) {
        if (!texts.contains(item)) {
            throw SchemaError("hierarchy: specific intent '" + item + "' is missing");
        }
    }
    for (const auto& leaf : forest.leaf_ids()) {
        if (!specific.contains(forest.node(leaf).text)) {
            throw SchemaError("hierarchy: leaf '" + leaf + "' ('" + forest.node(leaf).text +
                              "') is not a specific intent");
        }
    }
    return forest;
}

InitialRequest generate_initial_request(IntentForest& forest, const ChatClient& client, Rng& rng,
                                        std::string_view scope, Json* audit) {
    const auto roots = forest.root_ids();
    Json criteria = Json::array();
    Json latent = Json::array();
    for (const auto& id : roots) criteria.push_back({{"criterion_id", id}, {"criterion", forest.node(id).text}});
    for (const auto& n : forest.nodes()) {
        if (!n.is_root()) latent.push_back(n.text);
    }
    const Json payload{{"artifact_type", forest.artifact_type},
                       {"artifact_topic", forest.artifact_topic},
                       {"criteria", criteria},
                       {"latent_requirements", latent}};
    const auto reply = ask(client, templates::kInitialRequest,
                           template_text(templates::kInitialRequest), payload, scope);
    if (audit) *audit = reply.value;

    InitialRequest out;
    out.text = trim_copy(field_text(reply.value, "initial_request"));
    if (out.text.empty()) throw ParseError("initial-request: initial_request is empty");
    for (const auto& selected : field_list(reply.value, "selected_criteria")) {
        const std::string id = selected.is_object() ? trim_copy(field_text(selected, "criterion_id"))
                                                    : trim_copy(scalar_text(selected, "selected_criteria"));
        if (!forest.contains(id) || !forest.node(id).is_root()) {
            throw ParseError("initial-request: selected criterion '" + id + "' is not a root");
        }
        out.selected_roots.insert(id);
    }
    if (out.selected_roots.empty()) out.selected_roots.insert(roots[rng.below(roots.size())]);

    for (const auto& n : forest.nodes()) {
        if (!out.selected_roots.contains(n.id) && contains_ci(out.text, n.text)) {
            throw LeakageError("initial request reveals unselected intent '" + n.id + "' ('" + n.text + "')");
        }
    }
    forest.initial_request = out.text;
    forest.initially_discovered = out.selected_roots;
    forest.reset_conversation_state();
    return out;
}

BuildResult build_forest(std::string_view artifact, std::string_view artifact_type,
                         std::string_view artifact_id, const ChatClient& client,
                         const BuildOptions& options) {
    BuildResult result;
    Json& log = result.log;
    log = Json{{"artifact_id", artifact_id}, {"artifact_type", artifact_type}};

    const auto synthesis = synthesize_intents(artifact, artifact_type, client, artifact_id, &log["synthesis"]);
    const auto ladders = abstract_intents(synthesis.checklist, artifact_type, synthesis.topic,
                                          options.abstraction_depth, client, artifact_id,
                                          &log["abstraction"]);
    Json ladder_log = Json::array();
    for (const auto& l : ladders) ladder_log.push_back({{"criterion_id", l.criterion_id}, {"levels", l.levels}});
    log["ladders"] = std::move(ladder_log);

    IntentForest forest = organize_hierarchy(ladders, client, artifact_id, &log["organization"]);
    forest.artifact_type = std::string(artifact_type);
    forest.artifact_topic = synthesis.topic;
    forest.rng_seed = derive_seed(options.seed, artifact_id);
    forest.sample_thresholds(forest.rng_seed);

    Rng rng(derive_seed(forest.rng_seed, "initial-request"));
    generate_initial_request(forest, client, rng, artifact_id, &log["initial_request"]);
    forest.validate();
    result.forest = std::move(forest);
    return result;
}

}  // namespace intentsim
