// Copyright 2026 The caalloc Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "catch_amalgamated.hpp"
#include "caalloc/cli.hpp"
#include "support/reference.hpp"

using namespace caalloc;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string kb(const std::string& name) { return reference::fixture(name); }

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("caalloc_test_" + name)).string();
}

}  // namespace

TEST_CASE("format_number", "[cli]") {
    CHECK(cli::format_number(0.0) == "0");
    CHECK(cli::format_number(-0.0) == "0");
    CHECK(cli::format_number(52.0) == "52");
    CHECK(cli::format_number(13.0 / 14.0) == "0.928571428571");
    CHECK(cli::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(cli::format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
    CHECK(cli::round_significant(13.0 / 14.0) == 0.928571428571);
}

TEST_CASE("solve prints the threshold allocation as json", "[cli]") {
    const auto r = run({"solve", "--kb", kb("two_machine.json"), "--output", "json"});
    REQUIRE(r.code == cli::kOk);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["objective"] == "cobb-douglas");
    CHECK(doc["strategy"] == "ca");
    const auto& u = doc["allocation"]["u"];
    CHECK(u[0][0].get<double>() == Approx(0.9286).margin(1e-4));
    CHECK(u[0][1].get<double>() == Approx(0.0714).margin(1e-4));
    CHECK(u[1][0].get<double>() == 0.0);
    CHECK(u[1][1].get<double>() == 1.0);
    CHECK(doc["total"].get<double>() == 52.0);
    CHECK(doc["diagnostics"]["threshold"]["position"] == 1);
    CHECK(doc["diagnostics"]["structure"]["holds"] == true);
}

TEST_CASE("solve table output", "[cli]") {
    auto r = run({"solve", "--kb", kb("two_machine.json"), "--strategy", "even", "--utility", "linear", "--weights", "1,1"});
    REQUIRE(r.code == cli::kOk);
    CHECK_THAT(r.out, ContainsSubstring("total             46 kpps"));

    r = run({"solve", "--kb", kb("two_machine.json"), "--utility", "linear", "--weights", "1,1"});
    REQUIRE(r.code == cli::kOk);
    CHECK_THAT(r.out, ContainsSubstring("total             51 kpps"));

    r = run({"solve", "--kb", kb("paradox.json"), "--output", "csv"});
    REQUIRE(r.code == cli::kOk);
    CHECK_THAT(r.out, ContainsSubstring("allocation,machine1,vnf1,0.75"));
}

TEST_CASE("solve with unreachable requirements", "[cli]") {
    const auto r = run({"solve", "--kb", kb("two_machine.json"), "--utility", "linear", "--weights", "1,1",
                        "--requirements", "100,100"});
    CHECK(r.code == cli::kInfeasible);
    CHECK_THAT(r.err, ContainsSubstring("vnf1") && ContainsSubstring("27"));

    const auto ok = run({"solve", "--kb", kb("two_machine.json"), "--utility", "linear", "--weights", "1,1",
                         "--requirements", "19.5,0", "--output", "json"});
    REQUIRE(ok.code == cli::kOk);
    CHECK(nlohmann::json::parse(ok.out)["total"].get<double>() == Approx(52));
}

TEST_CASE("compare orders the strategies", "[cli]") {
    SECTION("linear") {
        const auto r = run({"compare", "--kb", kb("two_machine.json"), "--utility", "linear", "--weights", "1,1",
                            "--output", "json"});
        REQUIRE(r.code == cli::kOk);
        const auto doc = nlohmann::json::parse(r.out);
        std::map<std::string, double> total;
        for (const auto& s : doc["strategies"]) total[s["strategy"]] = s["total"].get<double>();
        CHECK(total["absolute"] == 65);
        CHECK(total["ca"] == 51);
        CHECK(total["even"] == 46);
        CHECK(doc["strategies"].back()["strategy"] == "even");
    }
    SECTION("cobb-douglas") {
        const auto r = run({"compare", "--kb", kb("two_machine.json")});
        REQUIRE(r.code == cli::kOk);
        CHECK(r.out.find("ca ") < r.out.find("even "));
        CHECK_THAT(r.out, ContainsSubstring("-inf"));
        const auto csv = run({"compare", "--kb", kb("two_machine.json"), "--output", "csv"});
        CHECK_THAT(csv.out, ContainsSubstring("absolute,vnf2,65,65,-inf"));
    }
    SECTION("symmetric capacities tie") {
        const auto r = run({"compare", "--kb", kb("symmetric.json"), "--utility", "linear", "--weights", "1,1",
                            "--output", "json"});
        REQUIRE(r.code == cli::kOk);
        const auto doc = nlohmann::json::parse(r.out);
        const double first = doc["strategies"][0]["utility"].get<double>();
        for (const auto& s : doc["strategies"]) CHECK(s["utility"].get<double>() == Approx(first).margin(1e-9));
    }
}

TEST_CASE("validate", "[cli]") {
    auto r = run({"validate", "--kb", kb("two_machine.json")});
    CHECK(r.code == cli::kOk);
    CHECK_THAT(r.out, ContainsSubstring("valid, 2 machines, 2 vnfs, linear"));

    r = run({"validate", "--kb", kb("two_machine_sampled.json")});
    CHECK(r.code == cli::kOk);
    CHECK_THAT(r.out, ContainsSubstring("curves"));

    r = run({"validate", "--kb", kb("bad_nonmonotone.json")});
    CHECK(r.code == cli::kInvalid);
    CHECK_THAT(r.err, ContainsSubstring("machine1") && ContainsSubstring("vnf1"));

    for (const char* bad : {"bad_dangling.json", "bad_duplicate.json", "bad_version.json", "bad_syntax.json",
                            "incomplete.json"}) {
        CAPTURE(bad);
        CHECK(run({"validate", "--kb", kb(bad)}).code == cli::kInvalid);
    }

    r = run({"validate", "--kb", kb("two_machine.json"), "--allocation", kb("allocation_overfull.json")});
    CHECK(r.code == cli::kInvalid);
    CHECK_THAT(r.out + r.err, ContainsSubstring("row 0"));

    r = run({"validate", "--kb", kb("two_machine.json"), "--allocation", kb("allocation_specialized.json")});
    CHECK(r.code == cli::kOk);
    CHECK_THAT(r.out, ContainsSubstring("total 51 kpps"));
}

TEST_CASE("a solve report validates against its knowledgebase", "[cli]") {
    const auto path = temp_path("report.json");
    auto r = run({"solve", "--kb", kb("three_machines.json"), "--output", "json", "--out-file", path});
    REQUIRE(r.code == cli::kOk);
    r = run({"validate", "--kb", kb("three_machines.json"), "--allocation", path});
    CHECK(r.code == cli::kOk);
    CHECK_THAT(r.out, ContainsSubstring("allocation feasible"));
    std::remove(path.c_str());
}

TEST_CASE("output is deterministic", "[cli]") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"solve", "--kb", "random:3x3", "--seed", "9", "--strategy", "general", "--output",
                                   "json"},
          std::vector<std::string>{"compare", "--kb", "random:2x3", "--seed", "4", "--output", "csv"},
          std::vector<std::string>{"solve", "--kb", kb("two_machine.json")}}) {
        const auto a = run(args);
        const auto b = run(args);
        CHECK(a.code == cli::kOk);
        CHECK(a.out == b.out);
    }
    CHECK(run({"solve", "--kb", "random:3x3", "--seed", "1"}).out !=
          run({"solve", "--kb", "random:3x3", "--seed", "2"}).out);
}

TEST_CASE("formats agree on the numbers", "[cli]") {
    const std::vector<std::string> base{"solve", "--kb", kb("three_machines.json")};
    auto with = [&](const std::string& format) {
        auto args = base;
        args.insert(args.end(), {"--output", format});
        return run(args);
    };
    const auto json = nlohmann::json::parse(with("json").out);
    const auto csv = with("csv").out;
    const auto table = with("table").out;
    for (const auto& value : json["throughput"]) {
        const auto text = cli::format_number(value.get<double>());
        CHECK_THAT(csv, ContainsSubstring(text));
        CHECK_THAT(table, ContainsSubstring(text));
    }
}

TEST_CASE("argument errors", "[cli]") {
    CHECK(run({}).code == cli::kInvalid);
    CHECK(run({"solve"}).code == cli::kInvalid);
    CHECK(run({"solve", "--kb", kb("two_machine.json"), "--bogus"}).code == cli::kInvalid);
    CHECK(run({"solve", "--kb", kb("two_machine.json"), "--strategy", "magic"}).code == cli::kInvalid);
    CHECK(run({"solve", "--kb", kb("two_machine.json"), "--alpha", "0.5"}).code == cli::kInvalid);
    CHECK(run({"solve", "--kb", kb("two_machine.json"), "--alpha", "-1,2"}).code == cli::kInvalid);
    CHECK(run({"solve", "--kb", kb("two_machine.json"), "--machines", "machine7"}).code == cli::kInvalid);
    CHECK(run({"solve", "--kb", "random:0x2"}).code == cli::kInvalid);
    CHECK(run({"solve", "--kb", kb("two_machine.json"), "--strategy", "oracle", "--oracle-step", "0.3"}).code ==
          cli::kInvalid);

    const auto r = run({"solve", "--kb", kb("two_machine.json"), "--alpha", "1,3", "--output", "json"});
    CHECK(r.code == cli::kOk);
    CHECK_THAT(r.err, ContainsSubstring("normaliz"));
    CHECK(nlohmann::json::parse(r.out)["weights"][1].get<double>() == Approx(0.75));
}

TEST_CASE("subsets from the command line", "[cli]") {
    const auto r = run({"solve", "--kb", kb("three_machines.json"), "--machines", "m1,m3", "--output", "json"});
    REQUIRE(r.code == cli::kOk);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["allocation"]["machines"] == nlohmann::json::array({"m1", "m3"}));
    CHECK(doc["allocation"]["u"][0][0].get<double>() == 1.0);
    CHECK(doc["allocation"]["u"][1][1].get<double>() == 1.0);
}

TEST_CASE("load_allocation", "[cli]") {
    auto doc = cli::load_allocation(R"({"machines": ["a"], "vnfs": ["x", "y"], "u": [[0.25, 0.75]]})");
    CHECK(doc.u(0, 1) == 0.75);
    doc = cli::load_allocation(R"({"allocation": {"machines": ["a"], "vnfs": ["x"], "u": [[1]]}})");
    CHECK(doc.machines == std::vector<std::string>{"a"});
    CHECK_THROWS(cli::load_allocation(R"({"machines": ["a"], "vnfs": ["x"], "u": [[1, 2]]})"));
    CHECK_THROWS(cli::load_allocation(R"({"machines": ["a"], "vnfs": ["x"]})"));
    CHECK_THROWS(cli::load_allocation("not json"));
}
