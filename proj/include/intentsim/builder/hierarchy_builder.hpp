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

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "intentsim/core/forest.hpp"
#include "intentsim/gateway/gateway.hpp"
#include "intentsim/util/rng.hpp"

namespace intentsim {

struct IntentSynthesis {
    std::string topic;
    std::string description;
    std::vector<std::string> checklist;
};

/// One checklist item and its abstractions. levels[0] is the most abstract;
/// levels.back() is the original item.
struct AbstractionLadder {
    std::string criterion_id;
    std::vector<std::vector<std::string>> levels;
};

struct InitialRequest {
    std::string text;
    std::set<NodeId> selected_roots;
};

/// Stage 1: specific intents that recreate `artifact`. `scope` labels the
/// request tags (usually the artifact id). Every stage stores the parsed model
/// output, reasoning fields included, in `audit` when given.
IntentSynthesis synthesize_intents(std::string_view artifact, std::string_view artifact_type,
                                   const ChatClient& client, std::string_view scope,
                                   Json* audit = nullptr);

/// Stage 2: one ladder of `depth` levels per checklist item (depth 1 skips the call).
std::vector<AbstractionLadder> abstract_intents(const std::vector<std::string>& checklist,
                                                std::string_view artifact_type,
                                                std::string_view topic, int depth,
                                                const ChatClient& client, std::string_view scope,
                                                Json* audit = nullptr);

/// Stage 3: merges ladders into trees. The returned forest has canonical ids
/// (renumbered after deduplication), no two nodes share a text, and its leaves are
/// exactly the distinct deepest ladder items. Thresholds are left at 1.
IntentForest organize_hierarchy(const std::vector<AbstractionLadder>& ladders,
                                const ChatClient& client, std::string_view scope,
                                Json* audit = nullptr);

/// Stage 4: the opening user request and the roots it reveals. Records the
/// selection in `forest` (initially_discovered, initial_request, root states).
/// Throws LeakageError when the request contains the text of any node that was
/// not selected.
InitialRequest generate_initial_request(IntentForest& forest, const ChatClient& client, Rng& rng,
                                        std::string_view scope, Json* audit = nullptr);

struct BuildOptions {
    int abstraction_depth = 4;
    std::uint64_t seed = 0;
};

struct BuildResult {
    IntentForest forest;
    /// Per-stage parsed model outputs, kept for audit.
    Json log;
};

/// Runs all four stages. The forest seed is derived from (options.seed, artifact_id)
/// and thresholds are sampled from it once the structure is final.
BuildResult build_forest(std::string_view artifact, std::string_view artifact_type,
                         std::string_view artifact_id, const ChatClient& client,
                         const BuildOptions& options);

}  // namespace intentsim
