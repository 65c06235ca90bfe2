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

#include "caalloc/report.hpp"

#include <algorithm>

namespace caalloc {

SolveReport make_report(std::string strategy, const CapacityModel& model, const UtilitySpec& spec,
                        Allocation allocation) {
    SolveReport report;
    report.strategy = std::move(strategy);
    report.x = evaluate_throughput(allocation, model);
    report.allocation = std::move(allocation);
    report.utility = evaluate_utility(report.x, spec);
    if (spec.is_cobb_douglas() && std::all_of(report.x.begin(), report.x.end(), [](double v) { return v > 0.0; })) {
        report.diagnostics.shadow_prices = shadow_prices(report.x, spec);
    }
    if (spec.is_linear() && spec.linear().requirements) {
        report.diagnostics.requirements_met = meets_requirements(report.x, spec);
    }
    return report;
}

}  // namespace caalloc
