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

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "intentsim/cli/config.hpp"
#include "intentsim/orchestrator/policy.hpp"

namespace intentsim {

namespace fs = std::filesystem;

/// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

/// "null", "oracle", "scripted:PATH" or "gateway:ROLE[:TEMPLATE]" (TEMPLATE names a
/// system-prompt asset).
std::unique_ptr<AssistantPolicy> make_policy(const std::string& spec, const RoleClients& clients);

/// Model label and transcript directory; "label=dir" or a bare dir (label = its name).
std::pair<std::string, fs::path> parse_run_dir(const std::string& spec);

/// Each command writes under config.out and returns an exit status. Progress
/// and summaries go to `log`.
int cmd_build(const std::vector<fs::path>& inputs, const RunConfig& config, std::ostream& log);
int cmd_simulate(const std::vector<fs::path>& hierarchies, const std::string& policy,
                 const RunConfig& config, std::ostream& log);
int cmd_evaluate(const std::vector<std::string>& run_dirs, bool unnormalized, const RunConfig& config,
                 std::ostream& log);
int cmd_synthesize(const std::vector<fs::path>& hierarchies, const std::string& policy_a,
                   const std::string& policy_b, const RunConfig& config, std::ostream& log);
int cmd_analyze(const std::vector<std::string>& run_dirs, const RunConfig& config, std::ostream& log);

/// Parses arguments and dispatches; never throws.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace intentsim
