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

// Dense two-phase tableau simplex with Bland's anti-cycling rule.
// Problems are of the form  max c'x  s.t.  A x {<=, >=, =} b,  x >= 0.

#include <cstddef>
#include <vector>

namespace caalloc::lp {

enum class Relation { less_equal, greater_equal, equal };

struct Constraint {
    std::vector<double> coefficients;
    Relation relation = Relation::less_equal;
    double rhs = 0.0;
};

struct Problem {
    std::vector<double> objective;
    std::vector<Constraint> constraints;
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
    Status status = Status::optimal;
    /// Primal values. For an infeasible problem, the phase-1 point.
    std::vector<double> values;
    double objective = 0.0;
    /// A_k x for every constraint k, in input order.
    std::vector<double> activity;
    /// Sum of artificial variables left at the end of phase 1.
    double infeasibility = 0.0;
    std::size_t pivots = 0;
};

Solution solve(const Problem& problem, double tolerance = 1e-9);

}  // namespace caalloc::lp
