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

#include "support.hpp"

#include <fstream>
#include <sstream>

#include "intentsim/cli/commands.hpp"
#include "intentsim/gateway/rule_backend.hpp"
#include "intentsim/gateway/structured.hpp"

namespace intentsim::testing {

namespace fs = std::filesystem;

Json make_document(const NodeList& nodes, const std::set<std::string>& initially_discovered,
                   const std::map<std::string, double>& thresholds, double default_threshold) {
    std::map<std::string, Json> by_id;
    std::vector<std::string> order;
    for (const auto& [id, text] : nodes) {
        auto it = thresholds.find(id);
        by_id[id] = Json{{"id", id},
                         {"text", text},
                         {"children", Json::array()},
                         {"threshold", it == thresholds.end() ? default_threshold : it->second}};
        order.push_back(id);
    }
    // Attach children bottom-up so each subtree is complete before it is copied.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto parent = parent_id_of(*it);
        if (!parent) continue;
        auto& siblings = by_id.at(*parent)["children"];
        siblings.insert(siblings.begin(), by_id.at(*it));
    }
    Json trees = Json::array();
    for (const auto& id : order) {
        if (!parent_id_of(id)) trees.push_back(by_id.at(id));
    }
    return Json{{"artifact_type", "story"},
                {"artifact_topic", "a fixture"},
                {"initial_request", "write me a story"},
                {"initially_discovered", initially_discovered},
                {"rng_seed", 7},
                {"trees", trees}};
}

IntentForest make_forest(const NodeList& nodes, const std::set<std::string>& initially_discovered,
                         const std::map<std::string, double>& thresholds, double default_threshold) {
    return parse_forest(make_document(nodes, initially_discovered, thresholds, default_threshold));
}

IntentForest chain_forest(int depth) {
    static const char* kWords[] = {"animal", "pet", "cat", "tabby", "kitten", "ginger", "sleepy", "small"};
    NodeList nodes;
    std::string id = "1";
    std::string text = "includes an";
    for (int level = 0; level < depth; ++level) {
        text += std::string(" ") + kWords[level % 8];
        nodes.emplace_back(id, text + " level" + std::to_string(level + 1));
        id += ".1";
    }
    return make_forest(nodes, {"1"});
}

IntentForest random_forest(Rng& rng, int max_nodes) {
    NodeList nodes;
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nodes)));
    std::vector<std::string> ids;
    std::map<std::string, int> child_count;
    int roots = 0;
    for (int i = 0; i < n; ++i) {
        std::string id;
        if (ids.empty() || (roots < 4 && rng.below(5) == 0)) {
            id = std::to_string(++roots);
        } else {
            const std::string& parent = ids[rng.below(ids.size())];
            id = parent + "." + std::to_string(++child_count[parent]);
        }
        ids.push_back(id);
    }
    // Preorder: sort ids by their numeric segments.
    auto key = [](const std::string& id) {
        std::vector<int> parts;
        std::stringstream ss(id);
        std::string part;
        while (std::getline(ss, part, '.')) parts.push_back(std::stoi(part));
        return parts;
    };
    std::sort(ids.begin(), ids.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    std::map<std::string, double> thresholds;
    for (const auto& id : ids) {
        nodes.emplace_back(id, "intent " + id);
        thresholds[id] = rng.uniform01();
    }
    std::set<std::string> initial;
    for (const auto& id : ids) {
        if (!parent_id_of(id) && rng.below(2) == 0) initial.insert(id);
    }
    return make_forest(nodes, initial, thresholds);
}

EvaluationResult random_legal_evaluation(const IntentForest& forest, Rng& rng) {
    const auto frontier = frontier_root(forest);
    if (!frontier) return {};
    EvaluationResult r;
    r.frontier_tree = *frontier;
    r.classification = rng.below(2) == 0 ? Classification::Artifact : Classification::DialogAct;
    r.evaluation_type =
        r.classification == Classification::Artifact ? EvaluationType::Satisfaction : EvaluationType::Probing;
    static const char* kVariants[] = {"red", "blue", "green", "tall", "short"};
    std::set<NodeId> reachable{*frontier};
    for (const auto& id : forest.subtree(*frontier)) {
        if (!reachable.contains(id)) continue;
        NodeJudgment j;
        j.node_id = id;
        j.engaged = rng.below(3) == 0;
        if (j.engaged) {
            j.children_evaluated = !forest.node(id).children.empty();
            for (const auto& c : forest.node(id).children) reachable.insert(c);
        } else {
            const auto k = rng.below(4);
            for (std::uint64_t v = 0; v < k; ++v) j.near_misses.push_back(kVariants[(v + rng.below(5)) % 5]);
            std::sort(j.near_misses.begin(), j.near_misses.end());
            j.near_misses.erase(std::unique(j.near_misses.begin(), j.near_misses.end()), j.near_misses.end());
        }
        r.judgments.push_back(std::move(j));
    }
    return r;
}

ChatClient scripted_client(std::shared_ptr<ScriptedBackend> backend, std::string model) {
    auto gateway = std::make_shared<Gateway>(GatewayMode::Live, std::move(backend), nullptr);
    return ChatClient{gateway, std::move(model), 0.0, 2048};
}

ChatClient rule_client(std::string model) {
    auto gateway = std::make_shared<Gateway>(GatewayMode::Live, std::make_shared<RuleBackend>(), nullptr);
    return ChatClient{gateway, std::move(model), 0.0, 2048};
}

SimulatorClients rule_simulator() { return {rule_client("evaluator"), rule_client("user")}; }

std::string fenced_json(const Json& value) { return "```json\n" + value.dump(2) + "\n```\n"; }

std::string fenced_yaml(const Json& value) { return "```yaml\n" + to_yaml(value) + "```\n"; }

TempDir::TempDir(const std::string& prefix) {
    static std::uint64_t counter = 0;
    Rng rng(derive_seed(static_cast<std::uint64_t>(std::hash<std::string>{}(prefix)) + ++counter,
                        std::to_string(reinterpret_cast<std::uintptr_t>(this))));
    for (;;) {
        path_ = fs::temp_directory_path() / (prefix + "-" + std::to_string(rng.next() % 1000000000));
        if (fs::create_directories(path_)) break;
    }
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

std::map<std::string, std::string> snapshot_tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        out[fs::relative(entry.path(), dir).generic_string()] = read_text_file(entry.path());
    }
    return out;
}

fs::path fixture_dir() { return fs::path(INTENTSIM_SOURCE_DIR) / "tests" / "fixtures"; }

int run_cli_args(const std::vector<std::string>& args, std::string* out, std::string* err) {
    std::vector<std::string> storage{"intentsim"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());
    std::ostringstream o, e;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return code;
}

}  // namespace intentsim::testing
