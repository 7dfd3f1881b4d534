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
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "intentsim/core/forest.hpp"
#include "intentsim/gateway/backend.hpp"
#include "intentsim/gateway/gateway.hpp"
#include "intentsim/orchestrator/orchestrator.hpp"
#include "intentsim/simulator/user_simulator.hpp"
#include "intentsim/util/rng.hpp"

namespace intentsim::testing {

/// (id, text) pairs in preorder; parents precede children.
using NodeList = std::vector<std::pair<std::string, std::string>>;

/// Hierarchy document for `nodes` with explicit thresholds (default 0.5).
Json make_document(const NodeList& nodes, const std::set<std::string>& initially_discovered = {"1"},
                   const std::map<std::string, double>& thresholds = {}, double default_threshold = 0.5);
IntentForest make_forest(const NodeList& nodes, const std::set<std::string>& initially_discovered = {"1"},
                         const std::map<std::string, double>& thresholds = {},
                         double default_threshold = 0.5);

/// Single tree "1" -> "1.1" -> ... with `depth` levels; only the root is initially discovered.
IntentForest chain_forest(int depth);

/// Random forest of at most `max_nodes` nodes (1..4 trees) with thresholds from `rng`.
IntentForest random_forest(Rng& rng, int max_nodes);

/// Random evaluator verdict that obeys the traversal rule for the current frontier.
/// Returns a skipped result when nothing is left to discover.
EvaluationResult random_legal_evaluation(const IntentForest& forest, Rng& rng);

/// Client over a live gateway with a scripted backend.
ChatClient scripted_client(std::shared_ptr<ScriptedBackend> backend, std::string model = "mock");
/// Client over a live gateway with the rule backend.
ChatClient rule_client(std::string model = "rule");
SimulatorClients rule_simulator();

std::string fenced_json(const Json& value);
std::string fenced_yaml(const Json& value);

/// Fresh empty directory under the system temp dir; removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& prefix);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Concatenated bytes of every regular file under `dir`, keyed by relative path.
std::map<std::string, std::string> snapshot_tree(const std::filesystem::path& dir);

/// Path to tests/fixtures in the source tree.
std::filesystem::path fixture_dir();

/// Runs the command-line entry point in-process; returns the exit status.
int run_cli_args(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr);

}  // namespace intentsim::testing
