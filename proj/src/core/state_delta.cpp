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

#include "intentsim/core/state_delta.hpp"

#include "intentsim/error.hpp"

namespace intentsim {

std::string_view to_string(TransitionCause cause) {
    return cause == TransitionCause::Direct ? "direct" : "tangential";
}

Json to_json(const StateDelta& delta) {
    Json transitions = Json::array();
    for (const auto& t : delta.transitions) {
        transitions.push_back({{"node_id", t.node_id},
                               {"from", to_string(t.from)},
                               {"to", to_string(t.to)},
                               {"cause", to_string(t.cause)}});
    }
    Json satisfaction = Json::array();
    for (const auto& c : delta.satisfaction_changes) {
        satisfaction.push_back({{"node_id", c.node_id}, {"satisfied", c.satisfied}});
    }
    Json thresholds = Json::array();
    for (const auto& c : delta.threshold_changes) {
        thresholds.push_back(
            {{"node_id", c.node_id}, {"old", c.old_threshold}, {"new", c.new_threshold}});
    }
    return Json{{"transitions", std::move(transitions)},
                {"satisfaction_changes", std::move(satisfaction)},
                {"threshold_changes", std::move(thresholds)},
                {"discovery_gain", delta.discovery_gain}};
}

StateDelta state_delta_from_json(const Json& json) {
    StateDelta d;
    for (const auto& t : json.at("transitions")) {
        const auto cause = t.at("cause").get<std::string>();
        if (cause != "direct" && cause != "tangential") {
            throw SchemaError("unknown transition cause '" + cause + "'");
        }
        d.transitions.push_back({t.at("node_id").get<std::string>(),
                                 discovery_status_from_string(t.at("from").get<std::string>()),
                                 discovery_status_from_string(t.at("to").get<std::string>()),
                                 cause == "direct" ? TransitionCause::Direct
                                                   : TransitionCause::Tangential});
    }
    for (const auto& c : json.at("satisfaction_changes")) {
        d.satisfaction_changes.push_back(
            {c.at("node_id").get<std::string>(), c.at("satisfied").get<bool>()});
    }
    for (const auto& c : json.at("threshold_changes")) {
        d.threshold_changes.push_back({c.at("node_id").get<std::string>(),
                                       c.at("old").get<double>(), c.at("new").get<double>()});
    }
    d.discovery_gain = json.at("discovery_gain").get<int>();
    return d;
}

void apply_to_state(DiscoveryState& state, const StateDelta& delta) {
    for (const auto& t : delta.transitions) {
        state.emerging.erase(t.node_id);
        state.discovered.erase(t.node_id);
        if (t.to == DiscoveryStatus::Discovered) state.discovered.insert(t.node_id);
        if (t.to == DiscoveryStatus::Emerging) state.emerging.insert(t.node_id);
    }
    for (const auto& c : delta.satisfaction_changes) {
        if (c.satisfied) {
            state.satisfied.insert(c.node_id);
        } else {
            state.satisfied.erase(c.node_id);
        }
    }
}

}  // namespace intentsim
