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

#include "intentsim/gateway/rule_backend.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "intentsim/gateway/prompts.hpp"
#include "intentsim/gateway/structured.hpp"

namespace intentsim {

std::vector<std::string> lexical_words(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) words.push_back(std::move(current));
        current.clear();
    };
    for (char raw : text) {
        const auto c = static_cast<unsigned char>(raw);
        if (std::isalnum(c) || c == '\'' || c == '-' || c >= 0x80) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
        }
    }
    flush();
    return words;
}

namespace {

bool contains_words(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > hay.size()) return false;
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

std::string join(const std::vector<std::string>& words, std::size_t count) {
    std::string out;
    for (std::size_t i = 0; i < count && i < words.size(); ++i) {
        if (i) out.push_back(' ');
        out += words[i];
    }
    return out;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

Json payload_of(const ChatRequest& request) {
    if (request.messages.empty()) return Json::object();
    try {
        return parse_structured(request.messages.front().text,
                                StructuredSchema{"payload", StructuredFormat::Yaml, {}});
    } catch (const ParseError&) {
        return Json::object();
    }
}

std::string fenced(std::string_view lang, const Json& value) {
    std::string body = lang == "json" ? value.dump(2) + "\n" : to_yaml(value);
    return "```" + std::string(lang) + "\n" + body + "```\n";
}

const std::set<std::string>& stop_words() {
    static const std::set<std::string> words{"a",    "an",  "the", "of",   "with", "in",  "on",
                                             "and",  "to",  "for", "by",   "at",   "or",  "from",
                                             "that", "its", "as",  "into", "is",   "are", "about"};
    return words;
}

// Keeps `keep` leading words of `original`, then drops dangling stop words.
std::string truncate_phrase(const std::string& original, std::size_t keep) {
    std::istringstream in(original);
    std::vector<std::string> raw;
    for (std::string w; in >> w;) raw.push_back(w);
    keep = std::min(keep, raw.size());
    while (keep > 1) {
        auto lw = lexical_words(raw[keep - 1]);
        if (lw.empty() || !stop_words().contains(lw.back())) break;
        --keep;
    }
    std::string out;
    for (std::size_t i = 0; i < keep; ++i) {
        if (i) out.push_back(' ');
        out += raw[i];
    }
    while (!out.empty() && std::ispunct(static_cast<unsigned char>(out.back()))) out.pop_back();
    return out;
}

std::size_t word_count(const std::string& s) {
    std::istringstream in(s);
    std::size_t n = 0;
    for (std::string w; in >> w;) ++n;
    return n;
}

// ---------------------------------------------------------------------------

std::string synthesize(const Json& payload) {
    const std::string artifact = field_text_or(payload, "artifact", "");
    std::istringstream in(artifact);
    std::vector<std::string> checklist;
    std::string first_line;
    std::vector<std::string> prose;
    for (std::string line; std::getline(in, line);) {
        auto t = trim(line);
        if (t.empty()) continue;
        if (first_line.empty()) {
            first_line = t;
            continue;
        }
        if (t.rfind("- ", 0) == 0) {
            checklist.push_back(trim(t.substr(2)));
        } else {
            prose.push_back(t);
        }
    }
    if (checklist.empty()) {
        for (const auto& p : prose) {
            std::istringstream sentences(p);
            for (std::string s; std::getline(sentences, s, '.');) {
                if (auto ts = trim(s); !ts.empty()) checklist.push_back(ts);
            }
        }
    }
    while (!first_line.empty() && first_line.front() == '#') first_line.erase(0, 1);
    const std::string topic = truncate_phrase(trim(first_line), 3);
    std::string description;
    for (const auto& c : checklist) description += c + ". ";
    Json out{{"internal_thinking", "Lexical extraction of listed features."},
             {"artifact_topic", topic},
             {"description", trim(description)},
             {"checklist", checklist}};
    return fenced("yaml", out);
}

std::string abstract(const Json& payload) {
    Json results = Json::array();
    for (const auto& criterion : field_list(payload, "criteria")) {
        const auto items = field_text_list(criterion, "checklist");
        const int levels = static_cast<int>(field_number(criterion, "num_abstractions"));
        Json abstractions = Json::array();
        for (int k = 1; k <= levels; ++k) {
            Json checklist = Json::array();
            for (const auto& item : items) {
                const std::size_t n = word_count(item);
                std::size_t keep = n;
                if (n > 2) {
                    const std::size_t drop = (static_cast<std::size_t>(k) * (n - 2) + levels - 1) /
                                             static_cast<std::size_t>(levels);
                    keep = n - drop;
                }
                checklist.push_back(truncate_phrase(item, keep));
            }
            Json level{{"level", k},
                       {"reasoning", "Dropped trailing detail."},
                       {"checklist", checklist},
                       {"criterion", checklist.empty() ? "" : checklist[0].get<std::string>()}};
            if (k == levels) level["is_final"] = true;
            abstractions.push_back(std::move(level));
        }
        results.push_back({{"criterion_id", field_text(criterion, "criterion_id")},
                           {"num_abstractions", levels},
                           {"abstractions", std::move(abstractions)}});
    }
    return fenced("yaml", Json{{"results", std::move(results)}});
}

struct DraftNode {
    std::string text;
    std::vector<std::size_t> children;
};

Json draft_to_json(const std::vector<DraftNode>& nodes, std::size_t index, const std::string& id) {
    Json children = Json::array();
    const auto& n = nodes[index];
    for (std::size_t i = 0; i < n.children.size(); ++i) {
        children.push_back(draft_to_json(nodes, n.children[i], id + "." + std::to_string(i + 1)));
    }
    return Json{{"id", id}, {"text", n.text}, {"children", std::move(children)}};
}

std::string organize(const Json& payload) {
    std::vector<DraftNode> nodes;
    std::vector<std::size_t> roots;
    std::vector<std::pair<std::string, std::size_t>> by_text;
    auto find_text = [&](const std::string& t) -> std::optional<std::size_t> {
        for (const auto& [text, idx] : by_text) {
            if (text == t) return idx;
        }
        return std::nullopt;
    };
    for (const auto& criterion : field_list(payload, "criteria")) {
        std::optional<std::size_t> parent;
        for (const auto& level : field_list(criterion, "abstractions")) {
            for (const auto& text : field_text_list(level, "checklist")) {
                if (auto existing = find_text(text)) {
                    parent = *existing;
                    continue;
                }
                nodes.push_back({text, {}});
                const std::size_t idx = nodes.size() - 1;
                by_text.emplace_back(text, idx);
                if (parent) {
                    nodes[*parent].children.push_back(idx);
                } else {
                    roots.push_back(idx);
                }
                parent = idx;
            }
        }
    }
    Json hierarchy = Json::array();
    for (std::size_t i = 0; i < roots.size(); ++i) {
        hierarchy.push_back(draft_to_json(nodes, roots[i], std::to_string(i + 1)));
    }
    return fenced("yaml", Json{{"step_by_step", "Merged chains by exact text."},
                               {"hierarchy", std::move(hierarchy)}});
}

std::string initial_request(const Json& payload) {
    const auto& criteria = field_list(payload, "criteria");
    Json selected = Json::array();
    std::string request = "can you write me a " + field_text_or(payload, "artifact_type", "piece");
    if (!criteria.empty()) {
        const auto& c = criteria.front();
        selected.push_back(
            {{"criterion_id", field_text(c, "criterion_id")}, {"criterion", field_text(c, "criterion")}});
        request += ", it should be " + field_text(c, "criterion");
    }
    return fenced("yaml", Json{{"reasoning", "Selected the first criterion."},
                               {"redundant_criteria", Json::array()},
                               {"selected_criteria", std::move(selected)},
                               {"initial_request", request}});
}

std::string last_assistant(const Json& history) {
    std::string last;
    for (const auto& m : history) {
        if (field_text_or(m, "role", "") == "assistant") last = field_text_or(m, "content", "");
    }
    return last;
}

bool is_dialog_act(std::string_view message) {
    std::istringstream in{std::string(message)};
    for (std::string line; std::getline(in, line);) {
        auto t = trim(line);
        if (!t.empty() && t.back() != '?') return false;
    }
    return true;
}

using LineWords = std::vector<std::vector<std::string>>;

LineWords words_by_line(const std::string& message) {
    LineWords lines;
    std::istringstream in(message);
    for (std::string line; std::getline(in, line);) {
        auto w = lexical_words(line);
        if (!w.empty()) lines.push_back(std::move(w));
    }
    return lines;
}

// Near-miss: the node's words with a different final word, within one line.
void evaluate_node(const Json& node, const LineWords& message, bool satisfaction, Json& out) {
    const std::string text = field_text(node, "text");
    const auto words = lexical_words(text);
    const bool engaged = std::any_of(message.begin(), message.end(),
                                     [&](const auto& line) { return contains_words(line, words); });
    Json judgment{{"node_id", field_text(node, "id")},
                  {"node_text", text},
                  {"reasoning", std::string(engaged ? "The message " : "The message does not ") +
                                    (satisfaction ? "satisfy" : "probe") + " this item."},
                  {"is_satisfied_or_probed", engaged}};
    const auto& children = field_list(node, "children");
    if (!engaged && words.size() >= 2) {
        const std::vector<std::string> head(words.begin(), words.end() - 1);
        Json variants = Json::array();
        std::set<std::string> seen;
        for (const auto& line : message) {
            for (auto it = line.begin();
                 (it = std::search(it, line.end(), head.begin(), head.end())) != line.end(); ++it) {
                auto next = it + static_cast<std::ptrdiff_t>(head.size());
                if (next == line.end() || *next == words.back()) continue;
                std::string variant = join(head, head.size()) + " " + *next;
                if (seen.insert(variant).second) variants.push_back(variant);
            }
        }
        if (!variants.empty()) judgment["near_miss"] = std::move(variants);
    }
    judgment["children_evaluated"] = engaged && !children.empty();
    out.push_back(std::move(judgment));
    if (!engaged) return;
    for (const auto& child : children) evaluate_node(child, message, satisfaction, out);
}

std::string evaluate(const Json& payload) {
    const std::string message = last_assistant(field_list(payload, "chat_history"));
    const bool dialog = is_dialog_act(message);
    const auto lines = words_by_line(message);
    Json evaluations = Json::array();
    for (const auto& root : field_list(payload, "hierarchy")) {
        evaluate_node(root, lines, !dialog, evaluations);
    }
    return fenced("yaml", Json{{"classification_reasoning",
                                dialog ? "Only questions, no artifact content." : "Contains artifact content."},
                               {"classification_label", dialog ? "dialog act" : "artifact"},
                               {"evaluation_type", dialog ? "probing" : "satisfaction"},
                               {"evaluations", std::move(evaluations)}});
}

std::string user_response(const Json& payload) {
    const Json goal = payload.value("goal_status", Json::object());
    std::string message;
    bool recent = false;
    for (const auto& a : field_list(goal, "achieved")) {
        if (!field_text_or(a, "update", "").empty()) recent = true;
    }
    if (recent) message = "i like where this is going. ";
    const auto& clear = field_list(goal, "pursuing_clear");
    if (!clear.empty()) {
        message += "i want it to have this: " + field_text(clear.front(), "requirement");
    } else if (!field_list(goal, "pursuing_fuzzy").empty()) {
        message += "hmm not sure, maybe something could be a bit different?";
    } else if (!field_list(goal, "latent_goal").empty()) {
        message += "something about it doesn't feel quite right but i'm not sure why";
    } else {
        message += "this looks great thanks";
    }
    return fenced("yaml", Json{{"mental_note", "REMEMBER THAT I AM ROLE-PLAYING AS THE HUMAN USER"},
                               {"whats_working", "Summarized achieved items."},
                               {"what_to_try_next", "Picked the first pursued item."},
                               {"message_style", "Short plain text."},
                               {"user_message", message}});
}

std::string judge_satisfaction(const Json& payload) {
    const auto artifact = lexical_words(field_text_or(payload, "artifact", ""));
    const std::set<std::string> vocabulary(artifact.begin(), artifact.end());
    Json evaluations = Json::array();
    for (const auto& req : field_list(payload, "requirements")) {
        const auto words = lexical_words(field_text(req, "requirement"));
        int score = 1;
        if (contains_words(artifact, words)) {
            score = 5;
        } else if (!words.empty()) {
            const auto hits = std::count_if(words.begin(), words.end(),
                                            [&](const std::string& w) { return vocabulary.contains(w); });
            if (2 * static_cast<std::size_t>(hits) >= words.size()) score = 3;
        }
        evaluations.push_back({{"requirement_id", field_text(req, "requirement_id")},
                               {"reasoning", "Lexical overlap with the artifact."},
                               {"score", score}});
    }
    return fenced("json", Json{{"evaluations", std::move(evaluations)}});
}

Json chat_between_markers(const std::string& text) {
    static const std::string kStart = "<|The Start of the Conversation to be Evaluated|>";
    static const std::string kEnd = "<|The End of the Conversation to be Evaluated|>";
    auto b = text.find(kStart);
    auto e = text.find(kEnd);
    if (b == std::string::npos || e == std::string::npos || e < b) return Json::array();
    try {
        return parse_structured(text.substr(b + kStart.size(), e - b - kStart.size()),
                                StructuredSchema{"chat", StructuredFormat::Yaml, {}})
            .value("chat_history", Json::array());
    } catch (const ParseError&) {
        return Json::array();
    }
}

std::string judge_interactivity(const ChatRequest& request) {
    const Json history = chat_between_markers(request.messages.front().text);
    int turns = 0;
    int asking = 0;
    for (const auto& m : history) {
        if (field_text_or(m, "role", "") != "assistant") continue;
        ++turns;
        if (field_text_or(m, "content", "").find('?') != std::string::npos) ++asking;
    }
    const double score = turns == 0 ? 1.0 : 1.0 + 2.0 * asking / turns;
    return fenced("json", Json{{"thought", "Share of assistant turns that ask the user something."},
                               {"interactivity", score}});
}

std::string annotate(const Json& payload) {
    Json labels = Json::array();
    int turn = 0;
    for (const auto& m : field_list(payload, "chat_history")) {
        if (field_text_or(m, "role", "") != "assistant") continue;
        const std::string content = field_text_or(m, "content", "");
        int questions = static_cast<int>(std::count(content.begin(), content.end(), '?'));
        int options = 0;
        std::istringstream in(content);
        for (std::string line; std::getline(in, line);) {
            auto t = trim(line);
            auto lw = lexical_words(t);
            if (t.rfind("- ", 0) == 0 || (!lw.empty() && lw.front() == "option")) ++options;
        }
        labels.push_back({{"turn", ++turn},
                          {"label", (questions >= 2 || options >= 2) ? "multiple" : "single"}});
    }
    return fenced("yaml", Json{{"labels", std::move(labels)}});
}

std::string assistant_reply(const ChatRequest& request) {
    const std::string last = request.messages.empty() ? "" : request.messages.back().text;
    return "Here is a draft that follows your note: " + last;
}

}  // namespace

bool contains_phrase(std::string_view haystack, std::string_view needle) {
    return contains_words(lexical_words(haystack), lexical_words(needle));
}

std::string RuleBackend::respond(const ChatRequest& request) {
    const std::string name = request.template_name();
    using namespace templates;
    if (name == kIntentSynthesis) return synthesize(payload_of(request));
    if (name == kIntentAbstraction) return abstract(payload_of(request));
    if (name == kHierarchyOrganization) return organize(payload_of(request));
    if (name == kInitialRequest) return initial_request(payload_of(request));
    if (name == kResponseEvaluation) return evaluate(payload_of(request));
    if (name == kUserResponse) return user_response(payload_of(request));
    if (name == kJudgeSatisfaction) return judge_satisfaction(payload_of(request));
    if (name == kJudgeInteractivity) return judge_interactivity(request);
    if (name == kBehaviorAnnotation) return annotate(payload_of(request));
    return assistant_reply(request);
}

ChatResponse RuleBackend::send(const ChatRequest& request) {
    ChatResponse r;
    r.text = respond(request);
    long prompt_chars = static_cast<long>(request.system.size());
    for (const auto& m : request.messages) prompt_chars += static_cast<long>(m.text.size());
    r.prompt_tokens = (prompt_chars + 3) / 4;
    r.output_tokens = estimate_tokens(r.text);
    r.backend = name();
    return r;
}

}  // namespace intentsim
