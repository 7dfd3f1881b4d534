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

#include "intentsim/dataset/dataset.hpp"

#include <cmath>

#include "intentsim/orchestrator/orchestrator.hpp"

namespace intentsim {

Json to_json(const SftTrajectory& r) {
    return Json{{"messages", messages_to_json(r.messages)},
                {"source", {{"artifact_id", r.artifact_id}, {"seed", r.seed}, {"trial", r.trial}, {"turn", r.turn}}}};
}

SftTrajectory sft_trajectory_from_json(const Json& j) {
    try {
        SftTrajectory r;
        r.messages = messages_from_json(j.at("messages"));
        const auto& s = j.at("source");
        r.artifact_id = s.at("artifact_id").get<std::string>();
        r.seed = s.at("seed").get<std::uint64_t>();
        r.trial = s.at("trial").get<int>();
        r.turn = s.at("turn").get<int>();
        return r;
    } catch (const Json::exception& e) {
        throw SchemaError(std::string("sft record: ") + e.what());
    }
}

void validate_alternation(const std::vector<ChatMessage>& messages) {
    if (messages.empty()) throw SchemaError("conversation is empty");
    for (std::size_t i = 0; i < messages.size(); ++i) {
        const char* expected = i % 2 == 0 ? "user" : "assistant";
        if (messages[i].role != expected) {
            throw SchemaError("message " + std::to_string(i) + " has role '" + messages[i].role +
                              "', expected '" + expected + "'");
        }
    }
    if (messages.back().role != "assistant") throw SchemaError("conversation does not end with an assistant turn");
}

std::vector<SftTrajectory> emit_sft(const std::vector<Transcript>& transcripts, bool include_final_artifact) {
    std::vector<SftTrajectory> out;
    for (const auto& t : transcripts) {
        const auto messages = t.messages();
        if (messages.empty()) continue;
        validate_alternation(messages);
        for (std::size_t turn = 1; turn <= t.turns.size(); ++turn) {
            out.push_back({std::vector<ChatMessage>(messages.begin(), messages.begin() + 2 * turn),
                           t.artifact_id, t.seed, t.trial, static_cast<int>(turn)});
        }
        SftTrajectory full{messages, t.artifact_id, t.seed, t.trial, 0};
        if (include_final_artifact && t.final_artifact) {
            full.messages.push_back({"user", std::string(kFinalArtifactRequest)});
            full.messages.push_back({"assistant", *t.final_artifact});
        }
        out.push_back(std::move(full));
    }
    return out;
}

Json to_json(const DpoSummary& s) {
    return Json{{"emitted", s.emitted},
                {"dropped", s.dropped},
                {"filtered", s.filtered},
                {"ties", s.ties},
                {"chosen_reward", {{"mean", s.chosen_mean}, {"sd", s.chosen_sd}}},
                {"rejected_reward", {{"mean", s.rejected_mean}, {"sd", s.rejected_sd}}},
                {"win_rate", s.win_rate}};
}

namespace {

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
    if (xs.empty()) return {0.0, 0.0};
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

}  // namespace

DpoResult emit_dpo(const std::vector<PreferencePair>& pairs, double margin) {
    DpoResult result;
    DpoSummary& s = result.summary;
    std::vector<double> chosen;
    std::vector<double> rejected;
    std::map<std::string, int> wins;
    for (const auto& p : pairs) {
        const double gap = p.chosen_reward.total - p.rejected_reward.total;
        if (gap < 0.0) {
            ++s.dropped;
            continue;
        }
        if (gap < margin) {
            ++s.filtered;
            continue;
        }
        result.records.push_back(p);
        chosen.push_back(p.chosen_reward.total);
        rejected.push_back(p.rejected_reward.total);
        wins.try_emplace(p.chosen_policy, 0);
        wins.try_emplace(p.rejected_policy, 0);
        if (gap > 0.0) {
            ++wins[p.chosen_policy];
        } else {
            ++s.ties;
        }
    }
    s.emitted = static_cast<int>(result.records.size());
    std::tie(s.chosen_mean, s.chosen_sd) = mean_sd(chosen);
    std::tie(s.rejected_mean, s.rejected_sd) = mean_sd(rejected);
    for (const auto& [policy, n] : wins) s.win_rate[policy] = static_cast<double>(n) / s.emitted;
    return result;
}

namespace {

Json header(std::string_view schema) { return Json{{"schema", schema}, {"version", kDatasetVersion}}; }

std::vector<Json> body(const std::string& text, std::string_view schema) {
    auto lines = parse_jsonl(text);
    if (lines.empty() || lines.front() != header(schema)) {
        throw SchemaError("expected header line " + canonical_dump(header(schema)));
    }
    lines.erase(lines.begin());
    return lines;
}

}  // namespace

std::string sft_to_jsonl(const std::vector<SftTrajectory>& records) {
    std::vector<Json> lines{header(kSftSchema)};
    for (const auto& r : records) lines.push_back(to_json(r));
    return to_jsonl(lines);
}

std::vector<SftTrajectory> sft_from_jsonl(const std::string& text) {
    std::vector<SftTrajectory> out;
    for (const auto& j : body(text, kSftSchema)) out.push_back(sft_trajectory_from_json(j));
    return out;
}

std::string dpo_to_jsonl(const std::vector<PreferencePair>& records) {
    std::vector<Json> lines{header(kDpoSchema)};
    for (const auto& r : records) lines.push_back(to_json(r));
    return to_jsonl(lines);
}

std::vector<PreferencePair> dpo_from_jsonl(const std::string& text) {
    std::vector<PreferencePair> out;
    for (const auto& j : body(text, kDpoSchema)) out.push_back(preference_pair_from_json(j));
    return out;
}

}  // namespace intentsim
