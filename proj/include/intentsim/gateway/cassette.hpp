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
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "intentsim/gateway/chat.hpp"

namespace intentsim {

/// Append-only store of (digest, request, response) records, one canonical
/// JSON object per line. Credentials never enter a record: only the request
/// content is stored. Safe for concurrent use.
class Cassette {
public:
    /// In-memory cassette (nothing persisted).
    Cassette() = default;
    /// Loads `path` if it exists; appends go to the same file.
    explicit Cassette(std::filesystem::path path);

    std::optional<ChatResponse> find(const std::string& digest) const;
    /// No-op when the digest is already present.
    void append(const std::string& digest, const ChatRequest& request, const ChatResponse& response);
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::optional<std::filesystem::path> path_;
    std::unordered_map<std::string, ChatResponse> records_;
};

}  // namespace intentsim
