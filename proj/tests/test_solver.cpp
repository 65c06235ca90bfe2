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

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "catch_amalgamated.hpp"
#include "caalloc/ca_core.hpp"
#include "caalloc/errors.hpp"
#include "caalloc/knowledgebase.hpp"
#include "caalloc/solver.hpp"
#include "support/reference.hpp"

using namespace caalloc;
using Catch::Approx;

namespace {

const auto kEven = UtilitySpec::cobb_douglas({0.5, 0.5});
const auto kSum = UtilitySpec::linear({1, 1});

CapacityModel linear(const reference::Table& b) { return CapacityModel::linear(reference::to_matrix(b)); }

}  // namespace

TEST_CASE("project_onto_simplex", "[solver]") {
    std::vector<double> v{0.2, 0.3, 0.5};
    project_onto_simplex(v);
    CHECK(v == std::vector<double>{0.2, 0.3, 0.5});

    v = {2.0, 0.0};
    project_onto_simplex(v);
    CHECK(v == std::vector<double>{1.0, 0.0});

    v = {0.5, 0.5, -3.0};
    project_onto_simplex(v);
    CHECK(v[0] == Approx(0.5));
    CHECK(v[2] == 0.0);

    v = {1.0, 1.0};
    project_onto_simplex(v);
    CHECK(v[0] == Approx(0.5));

    std::mt19937_64 rng(2);
    std::normal_distribution<double> dist(0.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> w(1 + trial % 7);
        for (auto& x : w) x = dist(rng);
        const auto original = w;
        project_onto_simplex(w);
        CHECK(std::accumulate(w.begin(), w.end(), 0.0) == Approx(1.0).margin(1e-12));
        for (double x : w) CHECK(x >= 0.0);
        // optimality: (v - P(v)) . (z - P(v)) <= 0 for every vertex z
        for (std::size_t k = 0; k < w.size(); ++k) {
            double inner = 0.0;
            for (std::size_t l = 0; l < w.size(); ++l) {
                inner += (original[l] - w[l]) * ((l == k ? 1.0 : 0.0) - w[l]);
            }
            CHECK(inner <= 1e-9);
        }
    }
}

TEST_CASE("solve_general matches the closed form", "[solver]") {
    const auto model = linear({{21, 35}, {6, 30}});
    const auto report = solve_general(model, kEven);
    CHECK(report.strategy == "general");
    CHECK(report.diagnostics.converged);
    REQUIRE(report.diagnostics.projected_gradient_norm);
    CHECK(*report.diagnostics.projected_gradient_norm < 1e-8);
    CHECK(report.utility == Approx(3.225827277452696).margin(1e-9));
    CHECK(report.allocation(0, 0) == Approx(13.0 / 14.0).margin(1e-6));
    CHECK(report.allocation(1, 0) <= 1e-6);
}

TEST_CASE("solve_general single machine single vnf", "[solver]") {
    const auto report = solve_general(linear({{7}}), UtilitySpec::cobb_douglas({1.0}));
    CHECK(report.allocation(0, 0) == 1.0);
    CHECK(report.utility == Approx(std::log(7.0)));
    CHECK(report.diagnostics.converged);
}

TEST_CASE("solve_general ascends and stays feasible", "[solver][property]") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto b = reference::random_int_table(rng, 3, 3, 1, 10);
        const auto model = linear(b);
        double previous = -std::numeric_limits<double>::infinity();
        bool monotone = true;
        bool feasible = true;
        SolverConfig config;
        config.on_iterate = [&](const IterationState& state) {
            if (state.utility < previous - 1e-12) monotone = false;
            previous = state.utility;
            if (!validate_allocation(state.allocation, model).valid()) feasible = false;
        };
        const auto spec = UtilitySpec::cobb_douglas({0.2, 0.3, 0.5});
        const auto report = solve_general(model, spec, config);
        CHECK(monotone);
        CHECK(feasible);
        CHECK(report.diagnostics.converged);

        const auto oracle = reference::enumerate(b, {0.2, 0.3, 0.5}, 10);
        CHECK(report.utility >= oracle.value - 1e-9);

        // KKT: on each row, active entries share the maximal gradient
        const auto& x = report.x;
        for (std::size_t i = 0; i < 3; ++i) {
            double top = 0.0;
            for (std::size_t j = 0; j < 3; ++j) top = std::max(top, spec.weights()[j] * b[i][j] / x[j]);
            for (std::size_t j = 0; j < 3; ++j) {
                if (report.allocation(i, j) > 1e-4) {
                    CHECK(spec.weights()[j] * b[i][j] / x[j] == Approx(top).epsilon(1e-5));
                }
            }
        }
    }
}

TEST_CASE("solve_general optimum is monotone in capacity", "[solver][property]") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> bump(0.0, 4.0);
    const auto spec = UtilitySpec::cobb_douglas({0.3, 0.3, 0.4});
    for (int trial = 0; trial < 15; ++trial) {
        auto b = reference::random_table(rng, 3, 3, 1.0, 10.0);
        const double before = solve_general(linear(b), spec).utility;
        b[trial % 3][(trial / 3) % 3] += bump(rng);
        const double after = solve_general(linear(b), spec).utility;
        CHECK(after >= before - 1e-8);
    }
}

TEST_CASE("solve_general rejects an unserviceable vnf", "[solver]") {
    CHECK_THROWS_AS(solve_general(linear({{1, 0}, {2, 0}}), kEven), InfeasibleObjective);
    try {
        solve_general(linear({{1, 0}, {2, 0}}), kEven);
    } catch (const InfeasibleObjective& e) {
        CHECK(e.vnfs() == std::vector<std::size_t>{1});
    }
}

TEST_CASE("solve_general reports an honest non-converged state", "[solver]") {
    SolverConfig config;
    config.max_iterations = 1;
    const auto report = solve_general(linear({{3, 1, 2}, {1, 3, 2}, {2, 2, 3}}),
                                      UtilitySpec::cobb_douglas({0.3, 0.3, 0.4}), config);
    CHECK_FALSE(report.diagnostics.converged);
    CHECK_FALSE(report.diagnostics.notes.empty());
}

TEST_CASE("solve_requirements_lp", "[solver][lp]") {
    const auto model = linear({{21, 35}, {6, 30}});
    SECTION("no requirements: everything on the better vnf") {
        const auto report = solve_requirements_lp(model, UtilitySpec::linear({1, 1}, std::vector<double>{0, 0}));
        CHECK(report.utility == Approx(65));
        CHECK(report.x[1] == Approx(65));
    }
    SECTION("a binding requirement") {
        const auto report = solve_requirements_lp(model, UtilitySpec::linear({1, 1}, std::vector<double>{19.5, 0}));
        CHECK(report.utility == Approx(52));
        CHECK(report.x[0] == Approx(19.5));
        CHECK(report.allocation(0, 0) == Approx(13.0 / 14.0));
        CHECK(report.diagnostics.requirements_met == std::optional<bool>(true));
        const auto& binding = report.diagnostics.binding;
        CHECK(std::find(binding.begin(), binding.end(), "requirement:vnf1") != binding.end());
        CHECK(std::find(binding.begin(), binding.end(), "machine:machine1") != binding.end());
    }
    SECTION("unreachable requirements") {
        try {
            solve_requirements_lp(model, UtilitySpec::linear({1, 1}, std::vector<double>{100, 100}));
            FAIL("expected InfeasibleRequirements");
        } catch (const InfeasibleRequirements& e) {
            const std::string message = e.what();
            CHECK(message.find("vnf1") != std::string::npos);
            CHECK(message.find("27") != std::string::npos);
            REQUIRE_FALSE(e.unreachable().empty());
            CHECK(e.unreachable()[0].name == "vnf1");
            CHECK(e.unreachable()[0].max_achievable == Approx(27));
        }
    }
}

TEST_CASE("lp without requirements gives sum of row maxima", "[solver][lp][property]") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const std::size_t m = 1 + (trial / 4) % 4;
        const auto b = reference::random_table(rng, n, m, 0.0, 10.0);
        const auto report = solve_requirements_lp(
            linear(b), UtilitySpec::linear(std::vector<double>(m, 1.0), std::vector<double>(m, 0.0)));
        double expected = 0.0;
        for (const auto& row : b) expected += *std::max_element(row.begin(), row.end());
        CHECK(report.utility == Approx(expected).epsilon(1e-9));
        CHECK(validate_allocation(report.allocation, linear(b)).valid());
    }
}

TEST_CASE("brute_force_oracle", "[solver][oracle]") {
    SECTION("two-machine illustration on a fine grid") {
        const auto report = brute_force_oracle(linear({{21, 35}, {6, 30}}), kEven, {.grid_step = 0.01});
        CHECK(report.strategy == "oracle");
        CHECK(report.utility == Approx(3.225827277452696).margin(1e-3));
        CHECK(report.allocation(0, 0) == Approx(13.0 / 14.0).margin(0.01));
        CHECK(report.utility <= 3.225827277452696 + 1e-12);
    }
    SECTION("exact ties keep the lexicographically smallest allocation") {
        const auto report = brute_force_oracle(linear({{3, 3}}), kSum, {.grid_step = 0.5});
        CHECK(report.allocation == Allocation{{0, 1}});
    }
    SECTION("idle capacity when allowed") {
        const auto idle = brute_force_oracle(linear({{21, 35}, {6, 30}}), kSum, {.grid_step = 0.25, .allow_idle = true});
        CHECK(idle.utility == 65);
        CHECK(oracle_grid_size(linear({{1, 1}}), {.grid_step = 0.25, .allow_idle = true}) == 15);
        CHECK(oracle_grid_size(linear({{1, 1}}), {.grid_step = 0.25}) == 5);
    }
    SECTION("grid size") {
        CHECK(oracle_grid_size(linear({{21, 35}, {6, 30}}), {.grid_step = 0.05}) == 21 * 21);
        CHECK(oracle_grid_size(linear({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}), {.grid_step = 0.05}) == 231.0 * 231 * 231);
    }
    SECTION("budget") {
        try {
            brute_force_oracle(linear({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}), UtilitySpec::cobb_douglas({0.3, 0.3, 0.4}),
                               {.grid_step = 0.01, .max_points = 1000});
            FAIL("expected BudgetExceeded");
        } catch (const BudgetExceeded& e) {
            CHECK(e.count() > 1000);
        }
    }
    SECTION("bad step") {
        CHECK_THROWS_AS(oracle_grid_size(linear({{1}}), {.grid_step = 0.3}), InvalidInput);
        CHECK_THROWS_AS(oracle_grid_size(linear({{1}}), {.grid_step = 0.0}), InvalidInput);
        CHECK_THROWS_AS(oracle_grid_size(linear({{1}}), {.grid_step = 0.7}), InvalidInput);
    }
    SECTION("requirements prune the grid") {
        const auto report = brute_force_oracle(linear({{21, 35}, {6, 30}}),
                                               UtilitySpec::linear({1, 1}, std::vector<double>{19.5, 0}),
                                               {.grid_step = 0.01});
        CHECK(report.x[0] >= 19.5);
        CHECK(report.utility <= 52 + 1e-9);
        CHECK(report.utility == Approx(52).margin(0.5));
    }
}

TEST_CASE("oracle on overhead curves", "[solver][oracle]") {
    const auto model = build_model(load_document_file(reference::fixture("two_machine_overhead.json")));
    const auto even = evaluate_throughput(baseline_even_split(model), model);
    CHECK(even[0] + even[1] == Approx(36.8));

    const auto cd = brute_force_oracle(model, kEven, {.grid_step = 0.05});
    REQUIRE(cd.diagnostics.structure);
    CHECK(cd.diagnostics.structure->holds);
    CHECK(cd.x[0] + cd.x[1] > even[0] + even[1]);

    // under a plain sum the best grid point puts everything on the second vnf
    const auto sum = brute_force_oracle(model, kSum, {.grid_step = 0.05});
    CHECK(sum.utility == Approx(65));
}

TEST_CASE("oracle agrees with the enumeration reference", "[solver][oracle][property]") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        const auto b = reference::random_int_table(rng, 3, 3, 1, 10);
        const auto report = brute_force_oracle(linear(b), UtilitySpec::cobb_douglas({0.2, 0.3, 0.5}), {.grid_step = 0.1});
        const auto expected = reference::enumerate(b, {0.2, 0.3, 0.5}, 10);
        CHECK(report.utility == Approx(expected.value).epsilon(1e-12));
    }
}

TEST_CASE("compare_strategies", "[solver][compare]") {
    const auto model = linear({{21, 35}, {6, 30}});
    SECTION("linear utility") {
        const auto outcomes = compare_strategies(model, kSum);
        REQUIRE(outcomes.size() == 4);
        std::map<std::string, double> value;
        for (const auto& o : outcomes) {
            REQUIRE(o.report);
            value[o.strategy] = o.report->utility;
        }
        CHECK(value["ca"] == 51);
        CHECK(value["even"] == 46);
        CHECK(value["absolute"] == 65);
        CHECK(outcomes[0].strategy == "absolute");
        CHECK(outcomes.back().strategy == "even");
        for (std::size_t k = 1; k < outcomes.size(); ++k) {
            CHECK(outcomes[k - 1].report->utility >= outcomes[k].report->utility);
        }
    }
    SECTION("cobb-douglas") {
        const auto outcomes = compare_strategies(model, kEven);
        CHECK(outcomes[0].strategy == "ca");
        CHECK(outcomes.back().strategy == "absolute");
        CHECK(std::isinf(outcomes.back().report->utility));
    }
    SECTION("oracle skipped over budget") {
        CompareOptions options;
        options.oracle.max_points = 10;
        const auto outcomes = compare_strategies(model, kEven, options);
        CHECK(outcomes.size() == 3);
        for (const auto& o : outcomes) CHECK(o.strategy != "oracle");
    }
    SECTION("symmetric capacities") {
        const auto outcomes = compare_strategies(linear({{1, 1}, {1, 1}}), kSum);
        for (const auto& o : outcomes) CHECK(o.report->utility == Approx(2).margin(1e-9));
    }
}
