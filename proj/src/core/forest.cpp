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

#include "intentsim/core/forest.hpp"

#include <algorithm>
#include <functional>

#include "intentsim/core/state_delta.hpp"
#include "intentsim/error.hpp"
#include "intentsim/util/rng.hpp"

namespace intentsim {

std::string_view to_string(DiscoveryStatus status) {
    switch (status) {
        case DiscoveryStatus::Undiscovered: return "undiscovered";
        case DiscoveryStatus::Emerging: return "emerging";
        case DiscoveryStatus::Discovered: return "discovered";
    }
    return "undiscovered";
}

DiscoveryStatus discovery_status_from_string(std::string_view text) {
    if (text == "undiscovered") return DiscoveryStatus::Undiscovered;
    if (text == "emerging") return DiscoveryStatus::Emerging;
    if (text == "discovered") return DiscoveryStatus::Discovered;
    throw SchemaError("unknown discovery status '" + std::string(text) + "'");
}

std::string_view to_string(PursuingKind kind) {
    switch (kind) {
        case PursuingKind::Clear: return "clear";
        case PursuingKind::Fuzzy: return "fuzzy";
        case PursuingKind::Latent: return "latent";
        case PursuingKind::None: return "none";
    }
    return "none";
}

Json to_json(const DiscoveryState& state) {
    return Json{{"discovered", state.discovered},
                {"emerging", state.emerging},
                {"satisfied", state.satisfied}};
}

DiscoveryState discovery_state_from_json(const Json& json) {
    DiscoveryState s;
    s.discovered = json.at("discovered").get<std::set<NodeId>>();
    s.emerging = json.at("emerging").get<std::set<NodeId>>();
    s.satisfied = json.at("satisfied").get<std::set<NodeId>>();
    return s;
}

bool is_valid_node_id(std::string_view id) {
    if (id.empty()) return false;
    bool segment_empty = true;
    for (char c : id) {
        if (c == '.') {
            if (segment_empty) return false;
            segment_empty = true;
        } else if (c >= '0' && c <= '9') {
            segment_empty = false;
        } else {
            return false;
        }
    }
    return !segment_empty;
}

std::optional<NodeId> parent_id_of(std::string_view id) {
    auto dot = id.rfind('.');
    if (dot == std::string_view::npos) return std::nullopt;
    return NodeId(id.substr(0, dot));
}

std::size_t id_depth(std::string_view id) {
    return static_cast<std::size_t>(std::count(id.begin(), id.end(), '.')) + 1;
}

// ---------------------------------------------------------------------------
// IntentForest

IntentNode& IntentForest::add_node(NodeId id, std::string text, std::optional<NodeId> parent) {
    if (index_.contains(id)) {
        throw SchemaError("duplicate node id '" + id + "'");
    }
    if (parent) {
        auto it = index_.find(*parent);
        if (it == index_.end()) {
            throw SchemaError("node '" + id + "' has unknown parent '" + *parent + "'");
        }
        nodes_[it->second].children.push_back(id);
    }
    IntentNode n;
    n.id = id;
    n.text = std::move(text);
    n.parent = std::move(parent);
    index_.emplace(id, nodes_.size());
    nodes_.push_back(std::move(n));
    return nodes_.back();
}

bool IntentForest::contains(std::string_view id) const { return index_.contains(NodeId(id)); }

const IntentNode& IntentForest::node(std::string_view id) const {
    auto it = index_.find(NodeId(id));
    if (it == index_.end()) {
        throw PreconditionError("no node with id '" + std::string(id) + "'");
    }
    return nodes_[it->second];
}

IntentNode& IntentForest::node(std::string_view id) {
    return const_cast<IntentNode&>(std::as_const(*this).node(id));
}

std::vector<NodeId> IntentForest::root_ids() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_) {
        if (n.is_root()) out.push_back(n.id);
    }
    return out;
}

std::vector<NodeId> IntentForest::subtree(std::string_view id) const {
    std::vector<NodeId> out;
    std::vector<const IntentNode*> stack{&node(id)};
    while (!stack.empty()) {
        const IntentNode* n = stack.back();
        stack.pop_back();
        out.push_back(n->id);
        for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) {
            stack.push_back(&node(*it));
        }
    }
    return out;
}

std::size_t IntentForest::tree_depth(std::string_view root) const {
    std::size_t deepest = 0;
    const std::size_t base = id_depth(root);
    for (const auto& id : subtree(root)) {
        deepest = std::max(deepest, id_depth(id) - base + 1);
    }
    return deepest;
}

std::size_t IntentForest::depth() const {
    std::size_t d = 0;
    for (const auto& r : root_ids()) d = std::max(d, tree_depth(r));
    return d;
}

std::vector<NodeId> IntentForest::leaf_ids() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_) {
        if (n.children.empty()) out.push_back(n.id);
    }
    return out;
}

DiscoveryState IntentForest::snapshot() const {
    DiscoveryState s;
    for (const auto& n : nodes_) {
        if (n.state == DiscoveryStatus::Discovered) s.discovered.insert(n.id);
        if (n.state == DiscoveryStatus::Emerging) s.emerging.insert(n.id);
        if (n.satisfied) s.satisfied.insert(n.id);
    }
    return s;
}

void IntentForest::apply_initial_discovery() {
    for (const auto& id : initially_discovered) {
        node(id).state = DiscoveryStatus::Discovered;
    }
}

void IntentForest::reset_conversation_state() {
    for (auto& n : nodes_) {
        n.state = DiscoveryStatus::Undiscovered;
        n.satisfied = false;
        n.threshold = n.initial_threshold;
    }
    apply_initial_discovery();
}

void IntentForest::sample_thresholds(std::uint64_t seed) {
    Rng rng(seed);
    for (auto& n : nodes_) {
        n.initial_threshold = rng.uniform01();
        n.threshold = n.initial_threshold;
    }
}

void IntentForest::validate() const {
    if (nodes_.empty()) {
        throw InvariantError("forest has no trees");
    }
    for (const auto& n : nodes_) {
        if (!is_valid_node_id(n.id)) {
            throw InvariantError("malformed node id '" + n.id + "'");
        }
        if (parent_id_of(n.id) != n.parent) {
            throw InvariantError("node '" + n.id + "' does not extend its parent's id");
        }
        if (!(n.threshold >= 0.0 && n.threshold <= n.initial_threshold && n.initial_threshold <= 1.0)) {
            throw InvariantError("node '" + n.id + "' threshold outside [0, initial]");
        }
        if (n.satisfied && n.state != DiscoveryStatus::Discovered) {
            throw InvariantError("node '" + n.id + "' satisfied but not discovered");
        }
        if (n.parent && n.state != DiscoveryStatus::Undiscovered &&
            node(*n.parent).state != DiscoveryStatus::Discovered) {
            throw InvariantError("node '" + n.id + "' advanced before its parent was discovered");
        }
    }
    for (const auto& id : initially_discovered) {
        if (!contains(id) || !node(id).is_root()) {
            throw InvariantError("initially discovered id '" + id + "' is not a root");
        }
    }
}

// ---------------------------------------------------------------------------
// Document parsing

namespace {

const Json& require(const Json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw SchemaError(path + ": missing field '" + key + "'");
    }
    return *it;
}

std::string require_string(const Json& obj, const char* key, const std::string& path) {
    const Json& v = require(obj, key, path);
    if (!v.is_string()) {
        throw SchemaError(path + "." + key + ": expected string");
    }
    return v.get<std::string>();
}

void parse_node(const Json& j, const std::string& path, const std::optional<NodeId>& parent,
                IntentForest& forest, std::vector<std::optional<double>>& thresholds) {
    if (!j.is_object()) {
        throw SchemaError(path + ": expected object");
    }
    const NodeId id = require_string(j, "id", path);
    const std::string text = require_string(j, "text", path);
    if (!is_valid_node_id(id)) {
        throw SchemaError(path + ".id: malformed node id '" + id + "'");
    }
    if (parent_id_of(id) != parent) {
        if (parent) {
            throw SchemaError(path + ": node '" + id + "' under '" + *parent +
                              "' does not extend its parent's id");
        }
        throw SchemaError(path + ": root node '" + id + "' must have a single-segment id");
    }
    if (forest.contains(id)) {
        throw SchemaError(path + ": duplicate node id '" + id + "'");
    }
    std::optional<double> threshold;
    if (auto it = j.find("threshold"); it != j.end() && !it->is_null()) {
        if (!it->is_number()) {
            throw SchemaError(path + ".threshold: expected number");
        }
        double t = it->get<double>();
        if (!(t >= 0.0 && t <= 1.0)) {
            throw SchemaError(path + ".threshold: " + std::to_string(t) + " outside [0, 1]");
        }
        threshold = t;
    }
    forest.add_node(id, text, parent);
    thresholds.push_back(threshold);
    if (auto it = j.find("children"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) {
            throw SchemaError(path + ".children: expected array");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            parse_node((*it)[i], path + ".children[" + std::to_string(i) + "]", id, forest,
                       thresholds);
        }
    }
}

}  // namespace

IntentForest parse_forest(const Json& doc) {
    if (!doc.is_object()) {
        throw SchemaError("document: expected object");
    }
    IntentForest forest;
    forest.artifact_type = require_string(doc, "artifact_type", "document");
    forest.artifact_topic = require_string(doc, "artifact_topic", "document");
    forest.initial_request = require_string(doc, "initial_request", "document");
    const Json& seed = require(doc, "rng_seed", "document");
    if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() &&
                                      seed.get<std::int64_t>() < 0)) {
        throw SchemaError("document.rng_seed: expected non-negative integer");
    }
    forest.rng_seed = seed.get<std::uint64_t>();

    const Json& trees = require(doc, "trees", "document");
    if (!trees.is_array()) {
        throw SchemaError("document.trees: expected array");
    }
    if (trees.empty()) {
        throw SchemaError("document.trees: a forest needs at least one tree");
    }
    std::vector<std::optional<double>> thresholds;
    for (std::size_t i = 0; i < trees.size(); ++i) {
        parse_node(trees[i], "trees[" + std::to_string(i) + "]", std::nullopt, forest, thresholds);
    }

    Rng rng(forest.rng_seed);
    for (std::size_t i = 0; i < forest.size(); ++i) {
        const double draw = rng.uniform01();
        auto& n = forest.node(forest.nodes()[i].id);
        n.initial_threshold = thresholds[i].value_or(draw);
        n.threshold = n.initial_threshold;
    }

    const Json& init = require(doc, "initially_discovered", "document");
    if (!init.is_array()) {
        throw SchemaError("document.initially_discovered: expected array");
    }
    for (std::size_t i = 0; i < init.size(); ++i) {
        const std::string path = "document.initially_discovered[" + std::to_string(i) + "]";
        if (!init[i].is_string()) {
            throw SchemaError(path + ": expected string");
        }
        NodeId id = init[i].get<std::string>();
        if (!forest.contains(id) || !forest.node(id).is_root()) {
            throw SchemaError(path + ": '" + id + "' is not a root id");
        }
        forest.initially_discovered.insert(std::move(id));
    }
    forest.apply_initial_discovery();
    return forest;
}

IntentForest parse_forest_text(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("document: not valid JSON: ") + e.what());
    }
    return parse_forest(doc);
}

namespace {

Json node_to_json(const IntentForest& forest, const IntentNode& n, bool with_threshold) {
    Json children = Json::array();
    for (const auto& c : n.children) {
        children.push_back(node_to_json(forest, forest.node(c), with_threshold));
    }
    Json j{{"id", n.id}, {"text", n.text}, {"children", std::move(children)}};
    if (with_threshold) j["threshold"] = n.initial_threshold;
    return j;
}

}  // namespace

Json forest_to_document(const IntentForest& forest) {
    Json trees = Json::array();
    for (const auto& r : forest.root_ids()) {
        trees.push_back(node_to_json(forest, forest.node(r), true));
    }
    return Json{{"artifact_type", forest.artifact_type},
                {"artifact_topic", forest.artifact_topic},
                {"initial_request", forest.initial_request},
                {"initially_discovered", forest.initially_discovered},
                {"rng_seed", forest.rng_seed},
                {"trees", std::move(trees)}};
}

Json subtree_to_json(const IntentForest& forest, std::string_view root) {
    return node_to_json(forest, forest.node(root), false);
}

// ---------------------------------------------------------------------------
// Discovery queries

std::set<NodeId> refinement_space(const IntentForest& forest) {
    std::set<NodeId> out;
    for (const auto& n : forest.nodes()) {
        if (n.parent && n.state != DiscoveryStatus::Discovered &&
            forest.node(*n.parent).state == DiscoveryStatus::Discovered) {
            out.insert(n.id);
        }
    }
    return out;
}

std::optional<NodeId> frontier_root(const IntentForest& forest) {
    for (const auto& r : forest.root_ids()) {
        for (const auto& id : forest.subtree(r)) {
            if (forest.node(id).state != DiscoveryStatus::Discovered) return r;
        }
    }
    return std::nullopt;
}

ExpressibleView expressible_view(const IntentForest& forest, const StateDelta* last_delta,
                                 const std::unordered_map<NodeId, std::string>& reasons) {
    std::unordered_map<NodeId, std::string> tags;
    if (last_delta) {
        for (const auto& t : last_delta->transitions) {
            if (t.to == DiscoveryStatus::Discovered) tags[t.node_id] = "unaware -> aware";
        }
        for (const auto& c : last_delta->satisfaction_changes) {
            tags[c.node_id] = c.satisfied ? "dissatisfied -> satisfied" : "satisfied -> dissatisfied";
        }
    }
    auto tag_of = [&](const NodeId& id) {
        auto it = tags.find(id);
        return it == tags.end() ? std::string() : it->second;
    };
    auto reason_of = [&](const NodeId& id) {
        auto it = reasons.find(id);
        return it == reasons.end() ? std::string() : it->second;
    };

    ExpressibleView view;
    for (const auto& n : forest.nodes()) {
        if (!n.satisfied) continue;
        bool lowest = std::none_of(n.children.begin(), n.children.end(),
                                   [&](const NodeId& c) { return forest.node(c).satisfied; });
        if (lowest) view.achieved.push_back({n.id, n.text, tag_of(n.id)});
    }

    auto collect = [&](DiscoveryStatus status) {
        std::vector<ExpressibleView::Pursuing> out;
        for (const auto& n : forest.nodes()) {
            if (n.state == status && !n.satisfied) {
                out.push_back({n.id, n.text, reason_of(n.id), tag_of(n.id)});
            }
        }
        return out;
    };
    if (auto clear = collect(DiscoveryStatus::Discovered); !clear.empty()) {
        view.pursuing_kind = PursuingKind::Clear;
        view.pursuing = std::move(clear);
    } else if (auto fuzzy = collect(DiscoveryStatus::Emerging); !fuzzy.empty()) {
        view.pursuing_kind = PursuingKind::Fuzzy;
        view.pursuing = std::move(fuzzy);
    } else if (auto latent = collect(DiscoveryStatus::Undiscovered); !latent.empty()) {
        view.pursuing_kind = PursuingKind::Latent;
        view.pursuing = std::move(latent);
    }
    return view;
}

}  // namespace intentsim
