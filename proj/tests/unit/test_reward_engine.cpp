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

#include <doctest.h>

#include <cmath>

#include "intentsim/reward/reward.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace intentsim;

namespace {

ChatResponse with_tokens(long tokens, std::string text = "x") {
    ChatResponse r;
    r.text = std::move(text);
    r.output_tokens = tokens;
    return r;
}

StateDelta gain(int n) {
    StateDelta d;
    d.discovery_gain = n;
    return d;
}

}  // namespace

TEST_CASE("efficiency penalty matches the hand-derived table") {
    for (const auto& [tokens, expected] : oracle::penalty_table()) {
        CAPTURE(tokens);
        CHECK(std::abs(efficiency_penalty(tokens, 250.0, 1e-3) - expected) <= 1e-12);
    }
    CHECK_FALSE(std::signbit(efficiency_penalty(10, 250.0, 1e-3)));
    CHECK_THROWS_AS(efficiency_penalty(-1, 250.0, 1e-3), PreconditionError);
}

TEST_CASE("turn reward examples") {
    const auto params = reward_profile("default");
    const auto a = turn_reward(gain(2), with_tokens(500), params);
    CHECK(a.r_d == 2);
    CHECK(a.r_e == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(a.total == doctest::Approx(1.75).epsilon(1e-12));

    const auto b = turn_reward(gain(0), with_tokens(2000), params);
    CHECK(b.total == -1.0);

    const auto c = turn_reward(gain(0), with_tokens(100), params);
    CHECK(c.total == 0.0);
    CHECK_FALSE(std::signbit(c.total));
}

TEST_CASE("missing usage falls back to the character estimate") {
    const auto r = turn_reward(gain(0), with_tokens(0, std::string(1200, 'a')), reward_profile("default"));
    CHECK(r.token_count == 300);
    CHECK(r.estimated_tokens);
    CHECK(r.r_e == doctest::Approx(-0.05).epsilon(1e-12));
    CHECK(turn_reward(gain(0), with_tokens(0, ""), reward_profile("default")).token_count == 0);
}

TEST_CASE("property: penalty is non-increasing in length and bounded") {
    for (double tau : {0.0, 250.0, 500.0}) {
        for (double lambda : {0.0, 1e-3, 0.5}) {
            double last = 0.0;
            for (long t = 0; t < 3000; t += 7) {
                const double e = efficiency_penalty(t, tau, lambda);
                CHECK(e <= last);
                CHECK(e >= -1.0);
                CHECK(e <= 0.0);
                last = e;
            }
        }
    }
    for (int g = 0; g < 5; ++g) {
        const auto r = turn_reward(gain(g), with_tokens(100000), reward_profile("default"));
        CHECK(r.total >= r.r_d - 1.0);
    }
}

TEST_CASE("discovery reward counts newly discovered nodes") {
    const DiscoveryState before{{"1"}, {"1.1"}, {}};
    const DiscoveryState after{{"1", "1.1", "1.2"}, {}, {"1"}};
    CHECK(discovery_reward(before, after) == 2);
    CHECK(discovery_reward(before, before) == 0);
    CHECK_THROWS_AS(discovery_reward(after, before), InvariantError);
}

TEST_CASE("reward profiles") {
    CHECK(reward_profile("default").tau == 250.0);
    CHECK(reward_profile("grpo").tau == 500.0);
    CHECK(reward_profile("grpo").lambda == 1e-3);
    CHECK_THROWS_AS(reward_profile("ppo"), PreconditionError);
    const auto r = turn_reward(gain(1), with_tokens(400), reward_profile("grpo"));
    CHECK(r.total == 1.0);
    CHECK(reward_breakdown_from_json(to_json(r)) == r);
}
