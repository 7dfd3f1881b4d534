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

#include <doctest.h>

#include <cstdlib>

#include "intentsim/cli/commands.hpp"
#include "intentsim/cli/config.hpp"
#include "intentsim/dataset/dataset.hpp"
#include "intentsim/util/json_io.hpp"
#include "support.hpp"

using namespace intentsim;
using namespace intentsim::testing;

namespace {

std::string artifacts() { return (fixture_dir() / "artifacts").string(); }

void write(const fs::path& path, const std::string& text) { write_file_atomic(path, text); }

}  // namespace

TEST_CASE("argument errors exit with status 1") {
    std::string err;
    CHECK(run_cli_args({}) == kExitUsage);
    CHECK(run_cli_args({"frobnicate"}) == kExitUsage);
    CHECK(run_cli_args({"simulate", "x.json"}) == kExitUsage);
    CHECK(run_cli_args({"build", artifacts(), "--mode", "sideways"}) == kExitUsage);
    CHECK(run_cli_args({"build", artifacts(), "--jobs", "0"}) == kExitUsage);
    CHECK(run_cli_args({"--help"}) == kExitOk);
    CHECK(run_cli_args({"build", "/no/such/input"}, nullptr, &err) == kExitUsage);
    CHECK(err.find("/no/such/input") != std::string::npos);
    CHECK(run_cli_args({"build", artifacts(), "--mode", "replay"}, nullptr, &err) == kExitUsage);
    CHECK(err.find("cassette") != std::string::npos);
}

TEST_CASE("configuration errors exit with status 1") {
    TempDir dir("intentsim-cli-config");
    const auto cfg = dir.path() / "config.json";
    std::string err;

    write(cfg, R"({"framework": {"p": 2}})");
    CHECK(run_cli_args({"build", artifacts(), "--config", cfg.string()}, nullptr, &err) == kExitUsage);
    CHECK(err.find("framework.p") != std::string::npos);

    write(cfg, R"({"colour": "blue"})");
    CHECK(run_cli_args({"build", artifacts(), "--config", cfg.string()}, nullptr, &err) == kExitUsage);
    CHECK(err.find("colour") != std::string::npos);

    ::unsetenv("INTENTSIM_TEST_MISSING_KEY");
    write(cfg, R"({"roles": {"builder": {"backend": "openai", "base_url": "http://127.0.0.1:9",
                                         "api_key_env": "INTENTSIM_TEST_MISSING_KEY"}}})");
    CHECK(run_cli_args({"build", artifacts(), "--config", cfg.string(), "--out", (dir.path() / "o").string()},
                       nullptr, &err) == kExitUsage);
    CHECK(err.find("INTENTSIM_TEST_MISSING_KEY") != std::string::npos);
}

TEST_CASE("build, simulate, evaluate, synthesize and analyze end to end") {
    TempDir dir("intentsim-cli-flow");
    const auto out = dir.path();
    std::string log;
    REQUIRE(run_cli_args({"build", artifacts(), "--out", out.string(), "--artifact-type", "text"}, &log) == kExitOk);
    CHECK(fs::exists(out / "hierarchies" / "harbor_story.json"));
    CHECK(fs::exists(out / "hierarchies" / "budget_email.json"));
    CHECK(fs::exists(out / "build_logs" / "harbor_story.json"));
    CHECK(log.find("built harbor_story") != std::string::npos);

    const auto hier = (out / "hierarchies").string();
    for (const char* policy : {"oracle", "null"}) {
        const auto sub = out / policy;
        REQUIRE(run_cli_args({"simulate", hier, "--policy", policy, "--out", sub.string(), "--jobs", "2"}) == kExitOk);
        const auto summary = Json::parse(read_text_file(sub / "simulate_summary.json"));
        CHECK(summary["schema"] == "intentsim.simulate_summary");
        CHECK(summary["hierarchies"]["budget_email"]["completed"] == 3);
        CHECK(fs::exists(sub / "transcripts" / "harbor_story.t2.json"));
    }
    CHECK(run_cli_args({"simulate", hier, "--policy", "wizard", "--out", (out / "w").string()}) == kExitUsage);

    const std::string oracle_dir = "oracle=" + (out / "oracle" / "transcripts").string();
    const std::string null_dir = "null=" + (out / "null" / "transcripts").string();
    CHECK(run_cli_args({"evaluate", oracle_dir, "--out", (out / "e1").string()}) == kExitUsage);
    CHECK(run_cli_args({"evaluate", oracle_dir, "--unnormalized", "--out", (out / "e1").string()}) == kExitOk);
    REQUIRE(run_cli_args({"evaluate", oracle_dir, null_dir, "--out", (out / "e2").string()}) == kExitOk);
    const auto report = Json::parse(read_text_file(out / "e2" / "report.json"));
    CHECK(report["schema"] == "intentsim.report");
    CHECK(report["models"]["oracle"]["discovery"] == 1.0);
    CHECK(report["models"]["null"]["discovery"] == 0.0);

    REQUIRE(run_cli_args({"synthesize", hier, "--policy-a", "oracle", "--policy-b", "null", "--out",
                          (out / "s").string()}) == kExitOk);
    const auto sft = sft_from_jsonl(read_text_file(out / "s" / "sft.jsonl"));
    const auto dpo = dpo_from_jsonl(read_text_file(out / "s" / "dpo.jsonl"));
    CHECK_FALSE(sft.empty());
    CHECK_FALSE(dpo.empty());
    for (const auto& p : dpo) CHECK(p.chosen_reward.total >= p.rejected_reward.total);

    REQUIRE(run_cli_args({"synthesize", hier, "--policy-a", "null", "--policy-b", "null", "--out",
                          (out / "same").string()}) == kExitOk);
    for (const auto& p : dpo_from_jsonl(read_text_file(out / "same" / "dpo.jsonl"))) {
        CHECK(p.chosen_policy == "null:a");
        CHECK(p.chosen_reward.total == p.rejected_reward.total);
    }

    REQUIRE(run_cli_args({"analyze", oracle_dir, null_dir, "--out", (out / "a").string()}) == kExitOk);
    CHECK(fs::exists(out / "a" / "behavior.json"));
}

TEST_CASE("replay reproduces a recorded run byte for byte") {
    TempDir dir("intentsim-cli-replay");
    const auto cassette = (dir.path() / "cassette.jsonl").string();
    const auto rec = dir.path() / "rec";
    const auto rep = dir.path() / "rep";
    REQUIRE(run_cli_args({"build", artifacts(), "--mode", "record", "--cassette", cassette, "--out", rec.string()}) ==
            kExitOk);
    REQUIRE(run_cli_args({"simulate", (rec / "hierarchies").string(), "--policy", "oracle", "--mode", "record",
                          "--cassette", cassette, "--out", (rec / "sim").string()}) == kExitOk);

    REQUIRE(run_cli_args({"build", artifacts(), "--mode", "replay", "--cassette", cassette, "--out", rep.string()}) ==
            kExitOk);
    REQUIRE(run_cli_args({"simulate", (rep / "hierarchies").string(), "--policy", "oracle", "--mode", "replay",
                          "--cassette", cassette, "--out", (rep / "sim").string()}) == kExitOk);
    const auto a = snapshot_tree(rec);
    const auto b = snapshot_tree(rep);
    CHECK(a.size() == b.size());
    CHECK(a == b);

    std::string err;
    std::string log;
    CHECK(run_cli_args({"build", artifacts(), "--mode", "replay", "--cassette", cassette, "--artifact-type", "poem",
                        "--out", (dir.path() / "miss").string()},
                       &log, &err) == kExitFailure);
    CHECK(log.find("replay miss") != std::string::npos);
}
