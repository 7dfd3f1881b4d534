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

#include "intentsim/reward/reward.hpp"

#include <algorithm>
#include <string>

namespace intentsim {

RewardParams reward_profile(std::string_view name) {
    if (name == "default" || name.empty()) return {250.0, 1e-3};
    if (name == "grpo") return {500.0, 1e-3};
    throw PreconditionError("unknown reward profile '" + std::string(name) + "'");
}

Json to_json(const RewardBreakdown& r) {
    return Json{{"r_d", r.r_d},
                {"r_e", r.r_e},
                {"total", r.total},
                {"token_count", r.token_count},
                {"estimated_tokens", r.estimated_tokens},
                {"tau", r.params.tau},
                {"lambda", r.params.lambda}};
}

RewardBreakdown reward_breakdown_from_json(const Json& j) {
    RewardBreakdown r;
    r.r_d = j.at("r_d").get<int>();
    r.r_e = j.at("r_e").get<double>();
    r.total = j.at("total").get<double>();
    r.token_count = j.at("token_count").get<long>();
    r.estimated_tokens = j.at("estimated_tokens").get<bool>();
    r.params.tau = j.at("tau").get<double>();
    r.params.lambda = j.at("lambda").get<double>();
    return r;
}

int discovery_reward(const DiscoveryState& before, const DiscoveryState& after) {
    for (const auto& id : before.discovered) {
        if (!after.discovered.contains(id)) {
            throw InvariantError("discovery_reward: node '" + id + "' was discovered and no longer is");
        }
    }
    return static_cast<int>(after.discovered.size()) - static_cast<int>(before.discovered.size());
}

double efficiency_penalty(long token_count, double tau, double lambda) {
    if (token_count < 0 || tau < 0.0 || lambda < 0.0) {
        throw PreconditionError("efficiency_penalty: arguments must be non-negative");
    }
    const double excess = std::max(0.0, static_cast<double>(token_count) - tau);
    const double penalty = std::min(lambda * excess, 1.0);
    return penalty == 0.0 ? 0.0 : -penalty;
}

RewardBreakdown turn_reward(const StateDelta& delta, const ChatResponse& response,
                            const RewardParams& params) {
    RewardBreakdown r;
    r.params = params;
    r.r_d = delta.discovery_gain;
    r.token_count = response.output_tokens;
    r.estimated_tokens = response.estimated_usage;
    if (r.token_count <= 0 && !response.text.empty()) {
        r.token_count = estimate_tokens(response.text);
        r.estimated_tokens = true;
    }
    r.r_e = efficiency_penalty(r.token_count, params.tau, params.lambda);
    r.total = static_cast<double>(r.r_d) + r.r_e;
    return r;
}

}  // namespace intentsim
