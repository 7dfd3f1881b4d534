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

#include <vector>

#include "intentsim/core/forest.hpp"

namespace intentsim {

enum class TransitionCause { Direct, Tangential };
std::string_view to_string(TransitionCause cause);

/// Everything one evaluation changed in a forest.
struct StateDelta {
    struct Transition {
        NodeId node_id;
        DiscoveryStatus from;
        DiscoveryStatus to;
        TransitionCause cause;
        bool operator==(const Transition&) const = default;
    };
    struct SatisfactionChange {
        NodeId node_id;
        bool satisfied;
        bool operator==(const SatisfactionChange&) const = default;
    };
    struct ThresholdChange {
        NodeId node_id;
        double old_threshold;
        double new_threshold;
        bool operator==(const ThresholdChange&) const = default;
    };

    std::vector<Transition> transitions;
    std::vector<SatisfactionChange> satisfaction_changes;
    std::vector<ThresholdChange> threshold_changes;
    int discovery_gain = 0;

    bool empty() const {
        return transitions.empty() && satisfaction_changes.empty() && threshold_changes.empty();
    }
    bool operator==(const StateDelta&) const = default;
};

Json to_json(const StateDelta& delta);
StateDelta state_delta_from_json(const Json& json);

/// Folds a delta's transitions and satisfaction changes into a snapshot.
void apply_to_state(DiscoveryState& state, const StateDelta& delta);

}  // namespace intentsim
