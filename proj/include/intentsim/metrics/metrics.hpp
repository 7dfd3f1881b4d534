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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "intentsim/gateway/gateway.hpp"
#include "intentsim/orchestrator/transcript.hpp"

namespace intentsim {

/// Transcripts per model label. One instance is one (artifact id, trial).
using ModelRunSet = std::map<std::string, std::vector<Transcript>>;

struct InstanceKey {
    std::string artifact_id;
    int trial = 0;
    auto operator<=>(const InstanceKey&) const = default;
};
std::string to_string(const InstanceKey& key);

/// Discovery outcome of one model on one instance, restricted to the nodes that
/// were not discovered at the start.
struct DiscoveryOutcome {
    std::set<NodeId> universe;
    std::set<NodeId> discovered;
    std::set<NodeId> emerging;
};

DiscoveryOutcome discovery_outcome(const Transcript& transcript);

/// Discovered nodes weigh 1 and Emerging nodes 0.5, over all non-initial nodes.
/// Returns 0 for a forest with no non-initial nodes.
double unnormalized_discovery(const Transcript& transcript);

struct DiscoveryReport {
    std::map<std::string, double> score;           // per model, mean over scored instances
    std::map<std::string, int> instances;          // scored instances per model
    std::vector<std::string> skipped;              // instances with a zero denominator
};

/// Per-instance normalized discovery (I_T - I_all) / (I_any - I_all), averaged
/// over instances. I_all and I_any use full discovery only; inside I_any minus
/// I_all a model earns 1 per Discovered node and 0.5 per Emerging node.
/// Requires at least two models unless `unnormalized`, which reports the mean
/// unnormalized_discovery instead. Throws PreconditionError on mismatched
/// coverage or differing forests for one instance.
DiscoveryReport discovery_score(const ModelRunSet& runs, bool unnormalized = false);

/// Per-instance comparison input: outcomes[model] for one instance.
double normalized_discovery(const std::map<std::string, DiscoveryOutcome>& outcomes,
                            const std::string& model, bool* degenerate = nullptr);

/// Judge scores (1..5) per model, per instance, per leaf; nullopt marks an unscored leaf.
using LeafScores = std::map<NodeId, std::optional<int>>;
using SatisfactionInput = std::map<std::string, std::map<InstanceKey, LeafScores>>;

struct SatisfactionReport {
    std::map<std::string, double> score;
    std::map<std::string, int> instances;
    std::vector<std::string> skipped;  // every remaining leaf satisfied by all models, or none left
    int unscored_leaves = 0;           // (instance, leaf) pairs excluded for a missing score
    int excluded_leaves = 0;           // (instance, leaf) pairs satisfied by every model
};

/// A leaf is satisfied at score >= 4. Leaves unscored for any model and leaves
/// satisfied by every model are dropped; each model scores the satisfied fraction
/// of the rest, averaged over instances.
SatisfactionReport satisfaction_score(const SatisfactionInput& scores);

/// Asks the judge to rate every leaf of the transcript's forest against its
/// final artifact. A parse failure or a missing artifact leaves every leaf unscored;
/// an empty artifact scores 1 on every leaf without a judge call.
LeafScores judge_satisfaction(const Transcript& transcript, const ChatClient& judge, const std::string& tag);

struct InteractivityResult {
    double score = 0.0;  // in [0, 1]
    double raw = 0.0;    // judge value
    bool clamped = false;
    bool parsed = true;
};

/// (s - 1) / 2 with s clamped to [1, 3].
InteractivityResult rescale_interactivity(double judge_value);
InteractivityResult interactivity_score(const Transcript& transcript, const ChatClient& judge,
                                        const std::string& tag);

enum class TurnLabel { Convergent, Divergent, Unknown };
char to_char(TurnLabel label);

/// One label per assistant turn; turns the annotator skipped or a parse failure
/// come back Unknown.
std::vector<TurnLabel> classify_turns(const Transcript& transcript, const ChatClient& annotator,
                                      const std::string& tag);

struct TrigramHistogram {
    int ccc = 0;
    int ddd = 0;
    int two_consecutive = 0;
    int alternating = 0;
    int skipped = 0;  // windows containing an Unknown label

    int total() const { return ccc + ddd + two_consecutive + alternating; }
    TrigramHistogram& operator+=(const TrigramHistogram& o);
    bool operator==(const TrigramHistogram&) const = default;
};
Json to_json(const TrigramHistogram& h);

/// Width-3 sliding windows. Throws PreconditionError for fewer than 3 labels.
TrigramHistogram trigram_distribution(const std::vector<TurnLabel>& labels);
std::vector<TurnLabel> parse_labels(std::string_view letters);

/// Assistant output tokens per turn, over every turn of every transcript.
double mean_output_tokens(const std::vector<Transcript>& transcripts);

}  // namespace intentsim
