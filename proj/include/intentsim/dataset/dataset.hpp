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
#include <string>
#include <vector>

#include "intentsim/orchestrator/transcript.hpp"

namespace intentsim {

/// Conversation prefix ending in an assistant turn.
struct SftTrajectory {
    std::vector<ChatMessage> messages;
    std::string artifact_id;
    std::uint64_t seed = 0;
    int trial = 0;
    int turn = 0;  // 0 marks the full-conversation record

    bool operator==(const SftTrajectory&) const = default;
};

Json to_json(const SftTrajectory& record);
SftTrajectory sft_trajectory_from_json(const Json& json);

/// Throws SchemaError unless roles are user/assistant, alternate, start with
/// user and end with assistant.
void validate_alternation(const std::vector<ChatMessage>& messages);

/// One record per recorded assistant turn (its prefix) plus one full record per
/// transcript with at least one turn. The final artifact exchange is appended
/// to the full record only when `include_final_artifact`.
std::vector<SftTrajectory> emit_sft(const std::vector<Transcript>& transcripts,
                                    bool include_final_artifact = false);

struct DpoSummary {
    int emitted = 0;
    int dropped = 0;   // chosen reward below rejected reward
    int filtered = 0;  // reward gap below the margin
    int ties = 0;
    double chosen_mean = 0.0;
    double chosen_sd = 0.0;
    double rejected_mean = 0.0;
    double rejected_sd = 0.0;
    std::map<std::string, double> win_rate;  // strict wins per chosen policy / emitted
};

Json to_json(const DpoSummary& summary);

struct DpoResult {
    std::vector<PreferencePair> records;
    DpoSummary summary;
};

/// Keeps pairs with chosen total >= rejected total and a gap of at least
/// `margin`; standard deviations are population values.
DpoResult emit_dpo(const std::vector<PreferencePair>& pairs, double margin = 0.0);

inline constexpr std::string_view kSftSchema = "intentsim.sft";
inline constexpr std::string_view kDpoSchema = "intentsim.dpo";
inline constexpr int kDatasetVersion = 1;

/// JSONL text: a {"schema", "version"} header line, then one record per line.
std::string sft_to_jsonl(const std::vector<SftTrajectory>& records);
std::vector<SftTrajectory> sft_from_jsonl(const std::string& text);
std::string dpo_to_jsonl(const std::vector<PreferencePair>& records);
std::vector<PreferencePair> dpo_from_jsonl(const std::string& text);

}  // namespace intentsim
