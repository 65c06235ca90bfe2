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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "caalloc/model.hpp"
#include "caalloc/report.hpp"

namespace caalloc {

/// State handed to SolverConfig::on_iterate after every accepted step (and once for the start point).
struct IterationState {
    std::size_t iteration = 0;
    const Allocation& allocation;
    double utility = 0.0;
    double step = 0.0;
};

struct SolverConfig {
    std::size_t max_iterations = 100000;
    double initial_step = 1.0;
    /// Each iteration starts its line search from the last accepted step times this factor.
    double step_growth = 2.0;
    double backtrack = 0.5;
    /// Sufficient-increase constant of the Armijo test.
    double armijo = 1e-4;
    double min_step = 1e-20;
    double relative_tolerance = 1e-10;
    double gradient_tolerance = 1e-8;
    std::function<void(const IterationState&)> on_iterate;
};

/// Euclidean projection of v onto { w >= 0, sum(w) = 1 }, in place.
void project_onto_simplex(std::span<double> v);

/// Projected gradient ascent of sum_j alpha_j log x_j over the product of machine simplices.
/// Throws InfeasibleObjective when some VNF column is all zero.
SolveReport solve_general(const CapacityModel& model, const UtilitySpec& spec, const SolverConfig& config = {});

/// Maximizes sum_j w_j x_j subject to x_j >= r_j with a two-phase dense simplex.
/// Throws InfeasibleRequirements naming the unreachable VNFs.
SolveReport solve_requirements_lp(const CapacityModel& model, const UtilitySpec& spec);

struct OracleConfig {
    double grid_step = 0.05;
    std::uint64_t max_points = 50'000'000;
    /// Rows sum to exactly 1 unless relaxed to <= 1.
    bool allow_idle = false;
};

/// Number of allocations the oracle would enumerate; throws InvalidInput on a bad step.
double oracle_grid_size(const CapacityModel& model, const OracleConfig& config);

/// Exhaustive search over the fraction grid. Works with curve models. Exact ties keep the
/// lexicographically smallest allocation. Throws BudgetExceeded past max_points.
SolveReport brute_force_oracle(const CapacityModel& model, const UtilitySpec& spec, const OracleConfig& config);

struct CompareOptions {
    SolverConfig solver;
    OracleConfig oracle;
    bool include_oracle = true;
};

struct StrategyOutcome {
    std::string strategy;
    std::optional<SolveReport> report;
    std::string error;
    /// Error class of a failed strategy: "invalid", "infeasible", "budget".
    std::string error_kind;
};

/// Runs ca, even, absolute and (within budget) oracle. Successes sorted by utility, descending; failures last.
std::vector<StrategyOutcome> compare_strategies(const CapacityModel& model, const UtilitySpec& spec,
                                                const CompareOptions& options = {});

}  // namespace caalloc
