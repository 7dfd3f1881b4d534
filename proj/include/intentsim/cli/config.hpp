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
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "intentsim/gateway/gateway.hpp"
#include "intentsim/orchestrator/orchestrator.hpp"

namespace intentsim {

/// Bad command-line input or configuration; maps to exit status 1.
class UsageError : public Error {
public:
    using Error::Error;
};

struct RoleConfig {
    std::string backend = "rule";  // rule | openai
    std::string model = "rule";
    std::string base_url;
    std::string api_key_env;
    double temperature = 0.0;
    int max_output = 2048;
};

struct FrameworkConfig {
    double p = 0.25;
    std::string profile = "default";
    double tau = 250.0;
    double lambda = 1e-3;
    int max_turns = 5;
    int n_trials = 3;
    int abstraction_depth = 4;
    double pair_margin = 0.0;
    bool include_final_artifact = false;
    bool elicit_final_artifact = true;
};

struct RunConfig {
    /// Required roles: builder, evaluator, user, judge, assistant. Extra names may
    /// be bound by gateway policies.
    std::map<std::string, RoleConfig> roles;
    FrameworkConfig framework;
    std::uint64_t seed = 0;
    GatewayMode mode = GatewayMode::Live;
    std::filesystem::path cassette;
    std::filesystem::path out = "out";
    int jobs = 1;
    int retries = 3;
    std::string artifact_type = "text";

    /// Throws UsageError naming the first broken constraint.
    void validate() const;
    SimulationConfig simulation() const;
    /// Every setting that can change outputs. Mode, retries, paths and jobs are
    /// left out: a replayed run reproduces a recorded one.
    Json to_json() const;
    /// SHA-256 of the canonical to_json().
    std::string digest() const;
};

RunConfig default_run_config();
/// Overlays a JSON document on the defaults. Unknown keys are rejected.
RunConfig parse_run_config(const Json& json);
RunConfig load_run_config(const std::filesystem::path& path);

/// Gateways and clients for every configured role, sharing one cassette.
class RoleClients {
public:
    /// Live or record mode with an openai backend whose credential variable is
    /// unset throws UsageError naming the variable.
    explicit RoleClients(const RunConfig& config);

    const ChatClient& client(const std::string& role) const;
    SimulatorClients simulator() const;

private:
    std::map<std::string, ChatClient> clients_;
};

}  // namespace intentsim
