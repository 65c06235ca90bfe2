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

/**
 * Comparative-advantage machinery.
 *
 * Machine i1 has a comparative advantage over machine i2 for VNF j1 (against
 * j2) when b(i1, j1) / b(i2, j1) > b(i1, j2) / b(i2, j2). All comparisons here
 * are done on cross products so that zero capacities and exact ties behave.
 *
 * With two VNFs (or two machines) the optimum of a Cobb-Douglas objective has
 * a threshold form: sort the other axis by comparative advantage, everything
 * before the threshold goes to the first VNF (machine), everything after to
 * the second, and a single entity at the threshold may split.
 */

#include <cstddef>

#include "caalloc/model.hpp"
#include "caalloc/report.hpp"
#include "caalloc/solver.hpp"

namespace caalloc {

enum class Advantage { first, second, tie };

/// Compares machines i1 and i2 on VNFs j1 and j2. `first` means i1 holds the advantage for j1.
/// Throws UndefinedComparison when b(i2, j1) and b(i2, j2) are both zero.
Advantage has_comparative_advantage(const CapacityModel& model, std::size_t i1, std::size_t i2, std::size_t j1,
                                    std::size_t j2);

/// Sorts machines by b(i, 0) / b(i, 1) (requires m == 2) or VNFs by b(0, j) / b(1, j)
/// (requires n == 2), non-increasing, ties by original index.
CaOrdering sort_by_ca(const CapacityModel& model, Axis axis);

/// Closed-form threshold solver for two VNFs under Cobb-Douglas.
SolveReport solve_n_by_2(const CapacityModel& model, const UtilitySpec& spec);

/// The 2 x 2 case; same machinery as solve_n_by_2.
SolveReport solve_2x2(const CapacityModel& model, const UtilitySpec& spec);

/// Two machines, m VNFs: general concave solve, then threshold extraction and verification.
SolveReport solve_2_by_m(const CapacityModel& model, const UtilitySpec& spec, const SolverConfig& config = {});

/// Verifies the threshold zero-pattern of u after CA sorting. Entries below 1e-6 count as zero.
/// Uses full-allocation capacities, so curve models are accepted.
StructureCheck check_ca_structure(const Allocation& u, const CapacityModel& model);

Allocation baseline_even_split(const CapacityModel& model);

/// Each machine fully on its highest-capacity VNF, ties to the lowest VNF index.
Allocation baseline_absolute_advantage(const CapacityModel& model);

/**
 * The comparative-advantage strategy, dispatched on shape and objective.
 *
 * Cobb-Douglas: solve_n_by_2 for m == 2, solve_2_by_m for n == 2, the general
 * solver otherwise. Linear with positive requirements: the requirements LP.
 * Linear without requirements: CA specialization, i.e. the Cobb-Douglas
 * optimum for alpha proportional to the weights with every machine then
 * dedicated to the VNF holding its largest share.
 */
SolveReport solve_comparative_advantage(const CapacityModel& model, const UtilitySpec& spec,
                                        const SolverConfig& config = {});

}  // namespace caalloc
