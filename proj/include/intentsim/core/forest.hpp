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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "intentsim/util/json_io.hpp"

namespace intentsim {

using NodeId = std::string;

/// Ordered: a node's status only ever moves forward.
enum class DiscoveryStatus : int { Undiscovered = 0, Emerging = 1, Discovered = 2 };

std::string_view to_string(DiscoveryStatus status);
DiscoveryStatus discovery_status_from_string(std::string_view text);

struct IntentNode {
    NodeId id;
    std::string text;
    DiscoveryStatus state = DiscoveryStatus::Undiscovered;
    bool satisfied = false;
    double threshold = 1.0;
    double initial_threshold = 1.0;
    std::vector<NodeId> children;
    std::optional<NodeId> parent;

    bool is_root() const { return !parent.has_value(); }
};

/// Immutable snapshot of the discovery bookkeeping of a forest.
struct DiscoveryState {
    std::set<NodeId> discovered;
    std::set<NodeId> emerging;
    std::set<NodeId> satisfied;

    bool operator==(const DiscoveryState&) const = default;
};

Json to_json(const DiscoveryState& state);
DiscoveryState discovery_state_from_json(const Json& json);

/// Hierarchical dot-path helpers ("1.2.1" has parent "1.2", depth 3).
std::optional<NodeId> parent_id_of(std::string_view id);
std::size_t id_depth(std::string_view id);
bool is_valid_node_id(std::string_view id);

/// The user's latent goal structure: ordered trees of intent nodes.
///
/// Nodes are stored in document (pre-)order; tree order is the order of roots.
/// A forest is single-conversation state and must not be shared between
/// concurrently running conversations. Copying a forest yields an independent clone.
class IntentForest {
public:
    std::string artifact_type;
    std::string artifact_topic;
    std::string initial_request;
    std::set<NodeId> initially_discovered;
    std::uint64_t rng_seed = 0;

    IntentForest() = default;

    /// Appends a node; parents must be added before their children.
    IntentNode& add_node(NodeId id, std::string text, std::optional<NodeId> parent);

    bool contains(std::string_view id) const;
    const IntentNode& node(std::string_view id) const;
    IntentNode& node(std::string_view id);

    const std::vector<IntentNode>& nodes() const { return nodes_; }
    std::vector<NodeId> root_ids() const;
    std::size_t size() const { return nodes_.size(); }

    /// Pre-order listing of the subtree rooted at `id`, including `id`.
    std::vector<NodeId> subtree(std::string_view id) const;
    /// Number of levels in the tallest tree (a lone root has depth 1).
    std::size_t depth() const;
    std::size_t tree_depth(std::string_view root) const;
    std::vector<NodeId> leaf_ids() const;

    DiscoveryState snapshot() const;

    /// Marks every root listed in initially_discovered as Discovered.
    void apply_initial_discovery();
    /// Resets per-conversation state to the document's initial configuration.
    void reset_conversation_state();
    /// Draws every threshold uniformly from [0, 1) using `seed`, in document order.
    void sample_thresholds(std::uint64_t seed);

    /// Throws InvariantError naming the first broken invariant.
    void validate() const;

private:
    std::vector<IntentNode> nodes_;
    std::unordered_map<NodeId, std::size_t> index_;
};

/// Parses a hierarchy document (see README for the schema). Thresholds absent from
/// the document are sampled from `rng_seed`. Throws SchemaError.
IntentForest parse_forest(const Json& document);
IntentForest parse_forest_text(std::string_view text);

/// Canonical document for a forest (initial thresholds, initial discovery).
Json forest_to_document(const IntentForest& forest);

/// Subtree as the nested {id, text, children} list used in prompts.
Json subtree_to_json(const IntentForest& forest, std::string_view root);

/// Undiscovered-or-Emerging children of Discovered nodes.
std::set<NodeId> refinement_space(const IntentForest& forest);

/// First root in tree order whose subtree still has a non-Discovered node.
std::optional<NodeId> frontier_root(const IntentForest& forest);

enum class PursuingKind { Clear, Fuzzy, Latent, None };
std::string_view to_string(PursuingKind kind);

struct StateDelta;

/// What a simulated user may articulate given the forest's discovery state.
struct ExpressibleView {
    struct Achieved {
        NodeId id;
        std::string text;
        std::string update;
    };
    struct Pursuing {
        NodeId id;
        std::string text;
        std::string reason;
        std::string update;
    };

    std::vector<Achieved> achieved;
    PursuingKind pursuing_kind = PursuingKind::None;
    std::vector<Pursuing> pursuing;
};

/// Builds the filtered view. `reasons` maps node ids to the evaluator's last
/// reasoning for that node; update tags come from `last_delta`.
ExpressibleView expressible_view(const IntentForest& forest, const StateDelta* last_delta,
                                 const std::unordered_map<NodeId, std::string>& reasons = {});

}  // namespace intentsim
