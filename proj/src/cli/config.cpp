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

#include "intentsim/cli/config.hpp"

#include <cstdlib>
#include <set>

#include "intentsim/gateway/rule_backend.hpp"
#include "intentsim/util/digest.hpp"

namespace intentsim {

namespace {

const std::set<std::string> kRequiredRoles{"builder", "evaluator", "user", "judge", "assistant"};

template <typename T>
void read(const Json& obj, const char* key, T& out, const std::string& path) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const Json::exception&) {
        throw UsageError("config: " + path + key + " has the wrong type");
    }
}

void reject_unknown(const Json& obj, const std::set<std::string>& known, const std::string& path) {
    if (!obj.is_object()) throw UsageError("config: " + (path.empty() ? "document" : path) + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) throw UsageError("config: unknown key " + path + key);
    }
}

RoleConfig parse_role(const Json& j, const std::string& path, RoleConfig role) {
    reject_unknown(j, {"backend", "model", "base_url", "api_key_env", "temperature", "max_output"}, path);
    read(j, "backend", role.backend, path);
    read(j, "model", role.model, path);
    read(j, "base_url", role.base_url, path);
    read(j, "api_key_env", role.api_key_env, path);
    read(j, "temperature", role.temperature, path);
    read(j, "max_output", role.max_output, path);
    return role;
}

Json role_json(const RoleConfig& r) {
    return Json{{"backend", r.backend},         {"model", r.model},
                {"base_url", r.base_url},       {"api_key_env", r.api_key_env},
                {"temperature", r.temperature}, {"max_output", r.max_output}};
}

}  // namespace

RunConfig default_run_config() {
    RunConfig c;
    for (const auto& role : kRequiredRoles) c.roles[role] = RoleConfig{};
    c.roles["user"].temperature = 0.0;
    c.roles["assistant"].temperature = 0.0;
    return c;
}

void RunConfig::validate() const {
    const auto& f = framework;
    if (!(f.p >= 0.0 && f.p <= 1.0)) throw UsageError("config: framework.p must lie in [0, 1]");
    if (!(f.lambda >= 0.0)) throw UsageError("config: framework.lambda must be >= 0");
    if (!(f.tau >= 0.0)) throw UsageError("config: framework.tau must be >= 0");
    if (f.max_turns < 1) throw UsageError("config: framework.max_turns must be >= 1");
    if (f.n_trials < 1) throw UsageError("config: framework.n_trials must be >= 1");
    if (f.abstraction_depth < 1) throw UsageError("config: framework.abstraction_depth must be >= 1");
    if (!(f.pair_margin >= 0.0)) throw UsageError("config: framework.pair_margin must be >= 0");
    if (jobs < 1) throw UsageError("config: jobs must be >= 1");
    if (retries < 0) throw UsageError("config: retries must be >= 0");
    for (const auto& role : kRequiredRoles) {
        if (!roles.contains(role)) throw UsageError("config: missing role '" + role + "'");
    }
    for (const auto& [name, r] : roles) {
        if (r.backend != "rule" && r.backend != "openai") {
            throw UsageError("config: roles." + name + ".backend must be 'rule' or 'openai'");
        }
        if (r.backend == "openai" && r.base_url.empty()) {
            throw UsageError("config: roles." + name + ".base_url is required for the openai backend");
        }
        if (r.max_output <= 0) throw UsageError("config: roles." + name + ".max_output must be > 0");
    }
    if (mode != GatewayMode::Live && cassette.empty()) {
        throw UsageError("a cassette path is required in " + std::string(intentsim::to_string(mode)) + " mode");
    }
}

SimulationConfig RunConfig::simulation() const {
    SimulationConfig s;
    s.max_turns = framework.max_turns;
    s.p = framework.p;
    s.reward = {framework.tau, framework.lambda};
    s.elicit_final_artifact = framework.elicit_final_artifact;
    return s;
}

Json RunConfig::to_json() const {
    Json roles_json = Json::object();
    for (const auto& [name, r] : roles) roles_json[name] = role_json(r);
    const auto& f = framework;
    return Json{{"roles", roles_json},
                {"framework",
                 {{"p", f.p},
                  {"profile", f.profile},
                  {"tau", f.tau},
                  {"lambda", f.lambda},
                  {"max_turns", f.max_turns},
                  {"n_trials", f.n_trials},
                  {"abstraction_depth", f.abstraction_depth},
                  {"pair_margin", f.pair_margin},
                  {"include_final_artifact", f.include_final_artifact},
                  {"elicit_final_artifact", f.elicit_final_artifact}}},
                {"seed", seed},
                {"artifact_type", artifact_type}};
}

std::string RunConfig::digest() const { return sha256_hex(canonical_dump(to_json())); }

RunConfig parse_run_config(const Json& j) {
    RunConfig c = default_run_config();
    reject_unknown(j, {"roles", "framework", "seed", "mode", "cassette", "out", "jobs", "retries", "artifact_type"}, "");
    if (j.contains("roles")) {
        // Role names are free-form; only their fields are checked.
        if (!j.at("roles").is_object()) throw UsageError("config: roles must be an object");
        for (const auto& [name, role] : j.at("roles").items()) {
            const RoleConfig base = c.roles.contains(name) ? c.roles.at(name) : RoleConfig{};
            c.roles[name] = parse_role(role, "roles." + name + ".", base);
        }
    }
    if (j.contains("framework")) {
        const Json& f = j.at("framework");
        reject_unknown(f, {"p", "profile", "tau", "lambda", "max_turns", "n_trials", "abstraction_depth",
                           "pair_margin", "include_final_artifact", "elicit_final_artifact"},
                       "framework.");
        auto& fw = c.framework;
        read(f, "profile", fw.profile, "framework.");
        try {
            const RewardParams preset = reward_profile(fw.profile);
            fw.tau = preset.tau;
            fw.lambda = preset.lambda;
        } catch (const PreconditionError& e) {
            throw UsageError(std::string("config: ") + e.what());
        }
        read(f, "p", fw.p, "framework.");
        read(f, "tau", fw.tau, "framework.");
        read(f, "lambda", fw.lambda, "framework.");
        read(f, "max_turns", fw.max_turns, "framework.");
        read(f, "n_trials", fw.n_trials, "framework.");
        read(f, "abstraction_depth", fw.abstraction_depth, "framework.");
        read(f, "pair_margin", fw.pair_margin, "framework.");
        read(f, "include_final_artifact", fw.include_final_artifact, "framework.");
        read(f, "elicit_final_artifact", fw.elicit_final_artifact, "framework.");
    }
    read(j, "seed", c.seed, "");
    if (j.contains("mode")) {
        try {
            c.mode = gateway_mode_from_string(j.at("mode").get<std::string>());
        } catch (const std::exception& e) {
            throw UsageError(std::string("config: ") + e.what());
        }
    }
    std::string path;
    read(j, "cassette", path, "");
    if (!path.empty()) c.cassette = path;
    path.clear();
    read(j, "out", path, "");
    if (!path.empty()) c.out = path;
    read(j, "jobs", c.jobs, "");
    read(j, "retries", c.retries, "");
    read(j, "artifact_type", c.artifact_type, "");
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    try {
        return parse_run_config(Json::parse(text));
    } catch (const Json::parse_error& e) {
        throw UsageError("config " + path.string() + ": " + e.what());
    }
}

RoleClients::RoleClients(const RunConfig& config) {
    auto cassette = config.mode == GatewayMode::Live ? nullptr : std::make_shared<Cassette>(config.cassette);
    RetryPolicy retry;
    retry.max_retries = config.retries;
    for (const auto& [name, role] : config.roles) {
        std::shared_ptr<Backend> backend;
        if (config.mode != GatewayMode::Replay) {
            if (role.backend == "rule") {
                backend = std::make_shared<RuleBackend>();
            } else {
                HttpBackend::Options options;
                options.base_url = role.base_url;
                if (!role.api_key_env.empty()) {
                    const char* key = std::getenv(role.api_key_env.c_str());
                    if (!key || !*key) {
                        throw UsageError("role '" + name + "' needs credential environment variable " +
                                         role.api_key_env + ", which is not set");
                    }
                    options.api_key = key;
                }
                backend = std::make_shared<HttpBackend>(options);
            }
        }
        auto gateway = std::make_shared<Gateway>(config.mode, backend, cassette, retry);
        clients_[name] = ChatClient{gateway, role.model, role.temperature, role.max_output};
    }
}

const ChatClient& RoleClients::client(const std::string& role) const {
    auto it = clients_.find(role);
    if (it == clients_.end()) throw UsageError("no role named '" + role + "' in the configuration");
    return it->second;
}

SimulatorClients RoleClients::simulator() const { return {client("evaluator"), client("user")}; }

}  // namespace intentsim
