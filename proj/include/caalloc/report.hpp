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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "caalloc/model.hpp"

namespace caalloc {

/// Which side of an n x 2 or 2 x m problem gets sorted by comparative advantage.
enum class Axis { machines, vnfs };

/// Permutation of the sorted axis, by non-increasing capacity ratio.
struct CaOrdering {
    Axis axis = Axis::machines;
    std::vector<std::size_t> order;
    /// Ratio at each position of `order` (may be +inf when the denominator is zero).
    std::vector<double> ratios;
    /// Adjacent (original index) pairs whose ratios are exactly equal.
    std::vector<std::pair<std::size_t, std::size_t>> ties;
};

/// The split point of a threshold allocation.
struct ThresholdSolution {
    /// 1-based position in the CA ordering.
    std::size_t position = 1;
    /// 0-based original index of the splitting machine (n x 2) or VNF (2 x m).
    std::size_t index = 0;
    /// Share of the splitting machine given to VNF 1 (n x 2 only).
    std::optional<double> theta;
    /// Set when no candidate had an interior split and theta was clamped.
    bool boundary = false;
};

struct StructureViolation {
    std::size_t machine = 0;
    std::size_t vnf = 0;
    double value = 0.0;
};

struct StructureCheck {
    bool holds = true;
    std::vector<StructureViolation> violations;
    /// 1-based position in the CA ordering.
    std::optional<std::size_t> inferred_threshold;
    std::vector<std::pair<std::size_t, std::size_t>> ties;
};

struct Diagnostics {
    std::size_t iterations = 0;
    bool converged = true;
    std::optional<double> foc_residual;
    std::optional<double> projected_gradient_norm;
    std::optional<ThresholdSolution> threshold;
    std::optional<ShadowPrices> shadow_prices;
    std::optional<StructureCheck> structure;
    std::optional<CaOrdering> ordering;
    /// Labels of LP constraints active at the optimum, e.g. "machine:m1".
    std::vector<std::string> binding;
    std::optional<bool> requirements_met;
    std::vector<std::string> notes;
};

struct SolveReport {
    std::string strategy;
    Allocation allocation;
    ThroughputVector x;
    double utility = 0.0;
    Diagnostics diagnostics;
};

/// Fills x, utility, requirement status and (for Cobb-Douglas with x > 0) shadow prices.
SolveReport make_report(std::string strategy, const CapacityModel& model, const UtilitySpec& spec,
                        Allocation allocation);

}  // namespace caalloc
