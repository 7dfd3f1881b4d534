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

#include "intentsim/gateway/cassette.hpp"

#include <fstream>

#include "intentsim/util/json_io.hpp"

namespace intentsim {

Cassette::Cassette(std::filesystem::path path) : path_(std::move(path)) {
    if (!std::filesystem::exists(*path_)) return;
    for (const auto& record : parse_jsonl(read_text_file(*path_))) {
        records_.try_emplace(record.at("digest").get<std::string>(),
                             chat_response_from_json(record.at("response")));
    }
}

std::optional<ChatResponse> Cassette::find(const std::string& digest) const {
    std::lock_guard lock(mutex_);
    auto it = records_.find(digest);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

void Cassette::append(const std::string& digest, const ChatRequest& request,
                      const ChatResponse& response) {
    std::lock_guard lock(mutex_);
    if (!records_.try_emplace(digest, response).second) return;
    if (!path_) return;
    if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path());
    std::ofstream out(*path_, std::ios::binary | std::ios::app);
    if (!out) throw GatewayError("cannot append to cassette " + path_->string());
    Json record{{"digest", digest}, {"request", to_json(request)}, {"response", to_json(response)}};
    out << canonical_dump(record) << '\n';
}

std::size_t Cassette::size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
}

}  // namespace intentsim
