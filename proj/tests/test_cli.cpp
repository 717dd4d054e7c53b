/*
   Copyright 2026 The stridepow authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <string>

#include "json.hpp"

#ifndef STRIDEPOW_CLI_PATH
#error "STRIDEPOW_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(STRIDEPOW_CLI_PATH) + " " + args + " 2>&1";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) res.output.append(buf.data(), got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

nlohmann::json run_json(const std::string& args, int expect_exit = 0) {
    RunResult res = run_cli(args + " --output json");
    REQUIRE(res.exit_code == expect_exit);
    return nlohmann::json::parse(res.output);
}

}  // namespace

TEST_CASE("solve: constant over F_7") {
    auto j = run_json("solve --field F:7 --n 2 --targets 4");
    CHECK(j["schema"] == 1);
    CHECK(j["method"] == "n2-constructive");
    CHECK(j["residual"] == 0.0);
    CHECK(j["verified"] == true);
    const std::string a0 = j["alpha"][0];
    CHECK((a0 == "2" || a0 == "5"));
}

TEST_CASE("solve: zero target over C") {
    auto j = run_json("solve --field C --n 2 --targets 0,0,0");
    CHECK(j["verified"] == true);
    for (const auto& a : j["alpha"]) CHECK(a == "0");
}

TEST_CASE("solve: hypothesis violation exits 3") {
    RunResult res = run_cli("solve --field F:3 --n 12 --targets 1,1");
    CHECK(res.exit_code == 3);
    CHECK(res.output.find("n' < p") != std::string::npos);
}

TEST_CASE("solve: unsupported exact n' over finite field exits 3") {
    RunResult res = run_cli("solve --field F:5 --n 3 --targets 1,2");
    CHECK(res.exit_code == 3);
}

TEST_CASE("parse error names the offending token and exits 1") {
    RunResult res = run_cli("solve --field F:3 --n 2 --targets 2,x");
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("'x'") != std::string::npos);

    RunResult bad_field = run_cli("solve --field G:3 --n 2 --targets 1");
    CHECK(bad_field.exit_code == 1);
    CHECK(bad_field.output.find("G:3") != std::string::npos);
}

TEST_CASE("reduce") {
    auto j = run_json("reduce --field F:3 --n 6 --targets 2,1");
    CHECK(j["nPrime"] == 2);
    CHECK(j["s"] == 1);
    CHECK(j["reduced"][0] == "2");
    CHECK(j["reduced"][1] == "1");

    RunResult res = run_cli("reduce --field F:3 --n 12 --targets 1,1");
    CHECK(res.exit_code == 3);
}

TEST_CASE("oracle") {
    auto j = run_json("oracle --field F:3 --m 1 --n 2 --targets 1,1");
    CHECK(j["count"] == 4);
    auto empty = run_json("oracle --field F:3 --m 1 --n 2 --targets 2,1");
    CHECK(empty["count"] == 0);
}

TEST_CASE("structure") {
    auto j = run_json("structure --field C --m 2 --n 3");
    CHECK(j["invertible"] == true);
    CHECK(j["diagonal"][0] == "3");
    CHECK(j["diagonal"][1] == "6");
    CHECK(j["diagonal"][2] == "3");
    CHECK(j["permutation"][0] == 1);  // 1-based rows

    auto singular = run_json("structure --field C --m 2 --n 2");
    CHECK(singular["invertible"] == false);
    CHECK(!singular.contains("permutation"));

    auto identity = run_json("structure --field C --m 1 --n 1");
    CHECK(identity["invertible"] == true);
    CHECK(identity["matrix"][0][0] == "1");
    CHECK(identity["matrix"][1][1] == "1");
}

TEST_CASE("count finds the full (1,2) fiber and is seed-deterministic") {
    RunResult a = run_cli("count --field C --m 1 --n 2 --targets 4,9 --trials 64 --seed 1 --output json");
    RunResult b = run_cli("count --field C --m 1 --n 2 --targets 4,9 --trials 64 --seed 1 --output json");
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);  // byte-identical under a fixed seed
    auto j = nlohmann::json::parse(a.output);
    CHECK(j["count"] == 4);
    CHECK(j["seed"] == 1);

    RunResult c = run_cli("count --field C --m 1 --n 2 --targets 4,9 --trials 64 --seed 2 --output json");
    auto jc = nlohmann::json::parse(c.output);
    CHECK(jc["count"] == 4);
}

TEST_CASE("verify") {
    RunResult good = run_cli("verify --field F:7 --n 2 --targets 1,2,1 --alpha 1,0,1");
    CHECK(good.exit_code == 0);
    RunResult bad = run_cli("verify --field F:7 --n 2 --targets 1,0 --alpha 1,1");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("jacobian at a point") {
    auto j = run_json("jacobian --field F:7 --n 2 --point 1,1");
    CHECK(j["m"] == 1);
    CHECK(j["matrix"][0][0] == "2");
    CHECK(j["matrix"][1][1] == "2");
    CHECK(j["invertible"] == true);
}

TEST_CASE("solve trace and extension reporting") {
    auto j = run_json("solve --field F:3 --n 6 --targets 2,1 --trace");
    CHECK(j["method"] == "charp-reduction");
    CHECK(j["residual"] == 0.0);
    const std::string ext = j["extension"];
    CHECK(ext.rfind("F:3", 0) == 0);
    bool has_reduction_note = false;
    for (const auto& t : j["trace"])
        has_reduction_note = has_reduction_note || std::string(t).find("n' = 2") != std::string::npos;
    CHECK(has_reduction_note);
}

TEST_CASE("targets from file") {
    const std::string path = "/tmp/stridepow_targets.txt";
    {
        FILE* f = fopen(path.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs("4,9", f);
        fclose(f);
    }
    auto j = run_json("solve --field C --n 2 --targets @" + path);
    CHECK(j["verified"] == true);
}
