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

#include "oracles.hpp"

#include <bit>

namespace intentsim::oracle {

const std::vector<std::pair<long, double>>& penalty_table() {
    // -min(1e-3 * max(0, t - 250), 1), worked out by hand per row.
    static const std::vector<std::pair<long, double>> table{
        {0, 0.0},        {100, 0.0},   {250, 0.0},    {251, -0.001},
        {500, -0.25},    {1249, -0.999}, {1250, -1.0}, {5000, -1.0},
    };
    return table;
}

bool instance_discovery(const std::map<std::string, MaskOutcome>& outcomes, std::map<std::string, double>& out) {
    std::uint64_t all = ~std::uint64_t{0};
    std::uint64_t any = 0;
    for (const auto& [model, o] : outcomes) {
        all &= o.discovered;
        any |= o.discovered;
    }
    const int lo = std::popcount(all);
    const int hi = std::popcount(any);
    if (hi == lo) return false;
    for (const auto& [model, o] : outcomes) {
        // Doubled counts keep the half weights integral.
        const int twice = 2 * std::popcount(o.discovered) + std::popcount(o.emerging & any & ~all) - 2 * lo;
        out[model] = static_cast<double>(twice) / static_cast<double>(2 * (hi - lo));
    }
    return true;
}

std::map<std::string, int> trigram_counts(const std::string& labels) {
    static const std::map<std::string, std::string> category{
        {"CCC", "CCC"}, {"DDD", "DDD"}, {"CCD", "two"}, {"DCC", "two"},
        {"DDC", "two"}, {"CDD", "two"}, {"CDC", "alt"}, {"DCD", "alt"},
    };
    std::map<std::string, int> counts{{"CCC", 0}, {"DDD", 0}, {"two", 0}, {"alt", 0}};
    for (std::size_t i = 0; i + 3 <= labels.size(); ++i) ++counts[category.at(labels.substr(i, 3))];
    return counts;
}

}  // namespace intentsim::oracle
