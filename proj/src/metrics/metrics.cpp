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

#include "intentsim/metrics/metrics.hpp"

#include <algorithm>

#include "intentsim/gateway/prompts.hpp"
#include "intentsim/gateway/structured.hpp"
#include "intentsim/simulator/user_simulator.hpp"
#include "intentsim/util/text.hpp"

namespace intentsim {

std::string to_string(const InstanceKey& key) { return key.artifact_id + "#" + std::to_string(key.trial); }

DiscoveryOutcome discovery_outcome(const Transcript& transcript) {
    const IntentForest forest = parse_forest(transcript.forest_document);
    DiscoveryOutcome out;
    for (const auto& n : forest.nodes()) {
        if (!forest.initially_discovered.contains(n.id)) out.universe.insert(n.id);
    }
    for (const auto& id : transcript.end_state.discovered) {
        if (!forest.contains(id)) throw PreconditionError("end state names unknown node '" + id + "'");
        if (out.universe.contains(id)) out.discovered.insert(id);
    }
    for (const auto& id : transcript.end_state.emerging) {
        if (transcript.end_state.discovered.contains(id)) {
            throw PreconditionError("node '" + id + "' is both discovered and emerging");
        }
        if (out.universe.contains(id)) out.emerging.insert(id);
    }
    return out;
}

double unnormalized_discovery(const Transcript& transcript) {
    const auto o = discovery_outcome(transcript);
    if (o.universe.empty()) return 0.0;
    return (static_cast<double>(o.discovered.size()) + 0.5 * static_cast<double>(o.emerging.size())) /
           static_cast<double>(o.universe.size());
}

double normalized_discovery(const std::map<std::string, DiscoveryOutcome>& outcomes,
                            const std::string& model, bool* degenerate) {
    std::set<NodeId> all;
    std::set<NodeId> any;
    bool first = true;
    for (const auto& [name, o] : outcomes) {
        if (first) {
            all = o.discovered;
            first = false;
        } else {
            std::set<NodeId> keep;
            std::set_intersection(all.begin(), all.end(), o.discovered.begin(), o.discovered.end(),
                                  std::inserter(keep, keep.end()));
            all = std::move(keep);
        }
        any.insert(o.discovered.begin(), o.discovered.end());
    }
    const double span = static_cast<double>(any.size()) - static_cast<double>(all.size());
    if (degenerate) *degenerate = span == 0.0;
    if (span == 0.0) return 0.0;
    const DiscoveryOutcome& mine = outcomes.at(model);
    double gained = 0.0;
    for (const auto& id : any) {
        if (all.contains(id)) continue;
        if (mine.discovered.contains(id)) {
            gained += 1.0;
        } else if (mine.emerging.contains(id)) {
            gained += 0.5;
        }
    }
    return gained / span;
}

namespace {

std::map<InstanceKey, std::map<std::string, const Transcript*>> by_instance(const ModelRunSet& runs) {
    std::map<InstanceKey, std::map<std::string, const Transcript*>> table;
    for (const auto& [model, transcripts] : runs) {
        for (const auto& t : transcripts) {
            auto& slot = table[{t.artifact_id, t.trial}][model];
            if (slot) {
                throw PreconditionError("model '" + model + "' has two transcripts for instance " +
                                        to_string(InstanceKey{t.artifact_id, t.trial}));
            }
            slot = &t;
        }
    }
    for (const auto& [key, models] : table) {
        for (const auto& [model, transcripts] : runs) {
            if (!models.contains(model)) {
                throw PreconditionError("model '" + model + "' has no transcript for instance " + to_string(key));
            }
        }
        const std::string& ref = models.begin()->second->forest_ref;
        for (const auto& [model, t] : models) {
            if (t->forest_ref != ref) {
                throw PreconditionError("instance " + to_string(key) + ": model '" + model +
                                        "' ran on a different forest");
            }
        }
    }
    return table;
}

}  // namespace

DiscoveryReport discovery_score(const ModelRunSet& runs, bool unnormalized) {
    if (runs.empty()) throw PreconditionError("discovery_score: no models");
    if (!unnormalized && runs.size() < 2) {
        throw PreconditionError("discovery_score: normalized scores need at least two models");
    }
    DiscoveryReport report;
    std::map<std::string, double> sums;
    for (const auto& [key, models] : by_instance(runs)) {
        std::map<std::string, DiscoveryOutcome> outcomes;
        for (const auto& [model, t] : models) outcomes[model] = discovery_outcome(*t);
        if (unnormalized) {
            for (const auto& [model, t] : models) {
                sums[model] += unnormalized_discovery(*t);
                ++report.instances[model];
            }
            continue;
        }
        bool degenerate = false;
        std::map<std::string, double> scores;
        for (const auto& [model, o] : outcomes) scores[model] = normalized_discovery(outcomes, model, &degenerate);
        if (degenerate) {
            report.skipped.push_back(to_string(key));
            continue;
        }
        for (const auto& [model, s] : scores) {
            sums[model] += s;
            ++report.instances[model];
        }
    }
    for (const auto& [model, transcripts] : runs) {
        const int n = report.instances[model];
        report.score[model] = n > 0 ? sums[model] / n : 0.0;
    }
    return report;
}

SatisfactionReport satisfaction_score(const SatisfactionInput& scores) {
    SatisfactionReport report;
    if (scores.empty()) return report;
    std::set<InstanceKey> keys;
    for (const auto& [model, instances] : scores) {
        for (const auto& [key, leaves] : instances) keys.insert(key);
    }
    std::map<std::string, double> sums;
    for (const auto& key : keys) {
        std::set<NodeId> leaves;
        for (const auto& [model, instances] : scores) {
            auto it = instances.find(key);
            if (it == instances.end()) {
                throw PreconditionError("model '" + model + "' has no judged artifact for instance " + to_string(key));
            }
            for (const auto& [leaf, s] : it->second) leaves.insert(leaf);
        }
        std::vector<NodeId> kept;
        for (const auto& leaf : leaves) {
            bool scored = true;
            bool all_satisfied = true;
            for (const auto& [model, instances] : scores) {
                const auto& ls = instances.at(key);
                auto it = ls.find(leaf);
                if (it == ls.end() || !it->second) {
                    scored = false;
                    break;
                }
                all_satisfied = all_satisfied && *it->second >= 4;
            }
            if (!scored) {
                ++report.unscored_leaves;
            } else if (all_satisfied) {
                ++report.excluded_leaves;
            } else {
                kept.push_back(leaf);
            }
        }
        if (kept.empty()) {
            report.skipped.push_back(to_string(key));
            continue;
        }
        for (const auto& [model, instances] : scores) {
            const auto& ls = instances.at(key);
            const auto satisfied = std::count_if(kept.begin(), kept.end(),
                                                 [&](const NodeId& leaf) { return *ls.at(leaf) >= 4; });
            sums[model] += static_cast<double>(satisfied) / static_cast<double>(kept.size());
            ++report.instances[model];
        }
    }
    for (const auto& [model, instances] : scores) {
        const int n = report.instances[model];
        report.score[model] = n > 0 ? sums[model] / n : 0.0;
    }
    return report;
}

LeafScores judge_satisfaction(const Transcript& transcript, const ChatClient& judge, const std::string& tag) {
    const IntentForest forest = parse_forest(transcript.forest_document);
    LeafScores scores;
    Json requirements = Json::array();
    for (const auto& leaf : forest.leaf_ids()) {
        scores[leaf] = std::nullopt;
        requirements.push_back({{"requirement_id", leaf}, {"requirement", forest.node(leaf).text}});
    }
    if (!transcript.final_artifact) return scores;
    if (trim_copy(*transcript.final_artifact).empty()) {
        for (auto& [leaf, score] : scores) score = 1;
        return scores;
    }

    const auto name = templates::kJudgeSatisfaction;
    const Json payload{{"artifact", *transcript.final_artifact}, {"requirements", requirements}};
    ChatRequest request = judge.make_request(std::string(prompt_template(name).text),
                                             {{"user", to_yaml(payload)}}, tag);
    try {
        const auto reply = complete_structured(judge, request, structured_schema(name));
        for (const auto& e : field_list(reply.value, "evaluations")) {
            const std::string id = trim_copy(field_text(e, "requirement_id"));
            auto it = scores.find(id);
            if (it == scores.end()) continue;
            try {
                const double s = field_number(e, "score");
                if (s >= 1.0 && s <= 5.0 && s == static_cast<int>(s)) it->second = static_cast<int>(s);
            } catch (const ParseError&) {
            }
        }
    } catch (const ParseError&) {
    }
    return scores;
}

InteractivityResult rescale_interactivity(double judge_value) {
    InteractivityResult r;
    r.raw = judge_value;
    const double s = std::clamp(judge_value, 1.0, 3.0);
    r.clamped = s != judge_value;
    r.score = (s - 1.0) / 2.0;
    return r;
}

InteractivityResult interactivity_score(const Transcript& transcript, const ChatClient& judge,
                                        const std::string& tag) {
    const auto name = templates::kJudgeInteractivity;
    const std::string history = to_yaml(Json{{"chat_history", history_to_json(transcript.messages())}});
    const std::string prompt = render_prompt(prompt_template(name).text,
                                             {{"chat_history", history}, {"A", "3"}, {"B", "2"}, {"C", "1"}});
    ChatRequest request = judge.make_request("", {{"user", prompt}}, tag);
    try {
        const auto reply = complete_structured(judge, request, structured_schema(name));
        return rescale_interactivity(field_number(reply.value, "interactivity"));
    } catch (const ParseError&) {
        InteractivityResult r;
        r.parsed = false;
        return r;
    }
}

char to_char(TurnLabel label) {
    switch (label) {
        case TurnLabel::Convergent: return 'C';
        case TurnLabel::Divergent: return 'D';
        case TurnLabel::Unknown: break;
    }
    return '?';
}

std::vector<TurnLabel> classify_turns(const Transcript& transcript, const ChatClient& annotator,
                                      const std::string& tag) {
    std::vector<TurnLabel> labels(transcript.turns.size(), TurnLabel::Unknown);
    const auto name = templates::kBehaviorAnnotation;
    const Json payload{{"chat_history", history_to_json(transcript.messages())}};
    ChatRequest request = annotator.make_request(std::string(prompt_template(name).text),
                                                 {{"user", to_yaml(payload)}}, tag);
    try {
        const auto reply = complete_structured(annotator, request, structured_schema(name));
        for (const auto& item : field_list(reply.value, "labels")) {
            const double turn = field_number(item, "turn");
            const std::string label = ascii_lower(trim_copy(field_text(item, "label")));
            if (turn < 1 || turn > static_cast<double>(labels.size()) || turn != static_cast<int>(turn)) continue;
            auto& slot = labels[static_cast<std::size_t>(turn) - 1];
            if (label == "single") {
                slot = TurnLabel::Convergent;
            } else if (label == "multiple") {
                slot = TurnLabel::Divergent;
            }
        }
    } catch (const ParseError&) {
    }
    return labels;
}

TrigramHistogram& TrigramHistogram::operator+=(const TrigramHistogram& o) {
    ccc += o.ccc;
    ddd += o.ddd;
    two_consecutive += o.two_consecutive;
    alternating += o.alternating;
    skipped += o.skipped;
    return *this;
}

Json to_json(const TrigramHistogram& h) {
    return Json{{"CCC", h.ccc},
                {"DDD", h.ddd},
                {"two_consecutive", h.two_consecutive},
                {"alternating", h.alternating},
                {"skipped", h.skipped}};
}

TrigramHistogram trigram_distribution(const std::vector<TurnLabel>& labels) {
    if (labels.size() < 3) throw PreconditionError("trigram_distribution needs at least 3 labels");
    TrigramHistogram h;
    for (std::size_t i = 0; i + 2 < labels.size(); ++i) {
        const TurnLabel a = labels[i], b = labels[i + 1], c = labels[i + 2];
        if (a == TurnLabel::Unknown || b == TurnLabel::Unknown || c == TurnLabel::Unknown) {
            ++h.skipped;
        } else if (a == b && b == c) {
            ++(a == TurnLabel::Convergent ? h.ccc : h.ddd);
        } else if (a != b && b != c) {
            ++h.alternating;
        } else {
            ++h.two_consecutive;
        }
    }
    return h;
}

std::vector<TurnLabel> parse_labels(std::string_view letters) {
    std::vector<TurnLabel> out;
    for (char c : letters) {
        if (c == 'C') {
            out.push_back(TurnLabel::Convergent);
        } else if (c == 'D') {
            out.push_back(TurnLabel::Divergent);
        } else if (c == '?') {
            out.push_back(TurnLabel::Unknown);
        } else {
            throw PreconditionError(std::string("unknown turn label '") + c + "'");
        }
    }
    return out;
}

double mean_output_tokens(const std::vector<Transcript>& transcripts) {
    long tokens = 0;
    long turns = 0;
    for (const auto& t : transcripts) {
        tokens += t.output_tokens();
        turns += static_cast<long>(t.turns.size());
    }
    return turns > 0 ? static_cast<double>(tokens) / static_cast<double>(turns) : 0.0;
}

}  // namespace intentsim
