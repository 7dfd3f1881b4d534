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

#include "intentsim/core/forest.hpp"
#include "intentsim/core/state_delta.hpp"
#include "intentsim/gateway/chat.hpp"

namespace intentsim {

struct RewardParams {
    double tau = 250.0;     // token threshold
    double lambda = 1e-3;   // severity per token beyond tau
};

/// Reward profile presets: "default" (tau 250) and "grpo" (tau 500).
RewardParams reward_profile(std::string_view name);

struct RewardBreakdown {
    int r_d = 0;
    double r_e = 0.0;
    double total = 0.0;
    long token_count = 0;
    bool estimated_tokens = false;
    RewardParams params;

    bool operator==(const RewardBreakdown& o) const {
        return r_d == o.r_d && r_e == o.r_e && total == o.total && token_count == o.token_count &&
               estimated_tokens == o.estimated_tokens && params.tau == o.params.tau &&
               params.lambda == o.params.lambda;
    }
};

Json to_json(const RewardBreakdown& reward);
RewardBreakdown reward_breakdown_from_json(const Json& json);

/// |after.discovered| - |before.discovered|; throws InvariantError when a node
/// left the discovered set.
int discovery_reward(const DiscoveryState& before, const DiscoveryState& after);

/// -min(lambda * max(0, tokens - tau), 1).
double efficiency_penalty(long token_count, double tau, double lambda);

/// Discovery gain of `delta` plus the length penalty over the response's output
/// tokens. A response without usage falls back to the character estimate.
RewardBreakdown turn_reward(const StateDelta& delta, const ChatResponse& response,
                            const RewardParams& params);

}  // namespace intentsim
