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

#include "caalloc/ca_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "caalloc/errors.hpp"

namespace caalloc {

namespace {

constexpr double kStructureZero = 1e-6;

// Numerator and denominator of the ratio that orders entity k along `axis`.
struct RatioTerms {
    double num;
    double den;
};

RatioTerms ratio_terms(const CapacityModel& model, Axis axis, std::size_t k) {
    if (axis == Axis::machines) {
        return {model.capacity(k, 0), model.capacity(k, 1)};
    }
    return {model.capacity(0, k), model.capacity(1, k)};
}

void require_cobb_douglas(const CapacityModel& model, const UtilitySpec& spec) {
    if (!spec.is_cobb_douglas()) {
        throw InvalidInput("this solver needs a cobb-douglas utility");
    }
    if (spec.size() != model.vnfs()) {
        throw InvalidInput("utility has " + std::to_string(spec.size()) + " weights but the model has " +
                           std::to_string(model.vnfs()) + " vnfs");
    }
}

void require_linear_model(const CapacityModel& model) {
    if (!model.linear_only()) {
        throw InvalidInput("this solver needs a linear capacity model; use the grid oracle for curves");
    }
}

void require_no_dead_vnf(const CapacityModel& model) {
    auto dead = model.dead_vnfs();
    if (!dead.empty()) {
        std::string names;
        for (auto j : dead) {
            names += (names.empty() ? "" : ", ") + model.vnf_name(j);
        }
        throw InfeasibleObjective("no machine can run vnf " + names + "; every allocation has utility -inf",
                                  std::move(dead));
    }
}

void require_positive(const CapacityModel& model) {
    for (std::size_t i = 0; i < model.machines(); ++i) {
        for (std::size_t j = 0; j < model.vnfs(); ++j) {
            if (!(model.capacity(i, j) > 0.0)) {
                throw InvalidInput("closed-form solver needs every capacity positive; b(" + model.machine_name(i) +
                                   ", " + model.vnf_name(j) + ") is zero");
            }
        }
    }
}

std::size_t argmax_lowest(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] > values[best]) best = k;
    }
    return best;
}

}  // namespace

Advantage has_comparative_advantage(const CapacityModel& model, std::size_t i1, std::size_t i2, std::size_t j1,
                                    std::size_t j2) {
    if (i1 >= model.machines() || i2 >= model.machines() || j1 >= model.vnfs() || j2 >= model.vnfs()) {
        throw InvalidInput("machine or vnf index out of range");
    }
    if (model.capacity(i2, j1) == 0.0 && model.capacity(i2, j2) == 0.0) {
        throw UndefinedComparison("comparative advantage undefined: machine " + model.machine_name(i2) +
                                  " has zero capacity for both vnfs");
    }
    const double lhs = model.capacity(i1, j1) * model.capacity(i2, j2);
    const double rhs = model.capacity(i1, j2) * model.capacity(i2, j1);
    if (lhs > rhs) return Advantage::first;
    if (lhs < rhs) return Advantage::second;
    return Advantage::tie;
}

CaOrdering sort_by_ca(const CapacityModel& model, Axis axis) {
    std::size_t count = 0;
    if (axis == Axis::machines) {
        if (model.vnfs() != 2) {
            throw UnsupportedShape("sorting machines by comparative advantage needs exactly 2 vnfs, got " +
                                   std::to_string(model.vnfs()) + "; use the general solver");
        }
        count = model.machines();
    } else {
        if (model.machines() != 2) {
            throw UnsupportedShape("sorting vnfs by comparative advantage needs exactly 2 machines, got " +
                                   std::to_string(model.machines()) + "; use the general solver");
        }
        count = model.vnfs();
    }

    std::vector<RatioTerms> terms;
    terms.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        terms.push_back(ratio_terms(model, axis, k));
        if (terms.back().num == 0.0 && terms.back().den == 0.0) {
            throw UndefinedComparison(std::string(axis == Axis::machines ? "machine " : "vnf ") +
                                      (axis == Axis::machines ? model.machine_name(k) : model.vnf_name(k)) +
                                      " has zero capacity on both sides; its ratio is undefined");
        }
    }
    // a before b iff num_a / den_a > num_b / den_b, cross-multiplied.
    auto ahead = [&](std::size_t a, std::size_t b) {
        return terms[a].num * terms[b].den > terms[b].num * terms[a].den;
    };

    CaOrdering ordering;
    ordering.axis = axis;
    ordering.order.resize(count);
    std::iota(ordering.order.begin(), ordering.order.end(), std::size_t{0});
    std::stable_sort(ordering.order.begin(), ordering.order.end(), ahead);
    for (std::size_t pos = 0; pos < count; ++pos) {
        const auto& t = terms[ordering.order[pos]];
        ordering.ratios.push_back(t.den == 0.0 ? std::numeric_limits<double>::infinity() : t.num / t.den);
        if (pos > 0) {
            const auto a = ordering.order[pos - 1];
            const auto b = ordering.order[pos];
            if (!ahead(a, b) && !ahead(b, a)) {
                ordering.ties.emplace_back(a, b);
            }
        }
    }
    return ordering;
}

SolveReport solve_n_by_2(const CapacityModel& model, const UtilitySpec& spec) {
    if (model.vnfs() != 2) {
        throw UnsupportedShape("the threshold solver needs exactly 2 vnfs, got " + std::to_string(model.vnfs()));
    }
    require_cobb_douglas(model, spec);
    require_linear_model(model);
    require_no_dead_vnf(model);
    require_positive(model);

    const auto ordering = sort_by_ca(model, Axis::machines);
    const auto& order = ordering.order;
    const std::size_t n = order.size();
    const double a1 = spec.cobb_douglas().weights[0];
    const double a2 = spec.cobb_douglas().weights[1];

    // before[k]: VNF-1 capacity of machines ahead of position k; after[k]: VNF-2 capacity behind it.
    std::vector<double> before(n, 0.0);
    std::vector<double> after(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        before[k] = before[k - 1] + model.capacity(order[k - 1], 0);
    }
    for (std::size_t k = n - 1; k-- > 0;) {
        after[k] = after[k + 1] + model.capacity(order[k + 1], 1);
    }

    // The first-order condition at position k is linear in theta:
    //   a1 b1 ((1 - theta) b2 + after) = a2 b2 (before + theta b1)
    auto interior_theta = [&](std::size_t k) {
        const double b1 = model.capacity(order[k], 0);
        const double b2 = model.capacity(order[k], 1);
        return (a1 * (b2 + after[k]) / b2 - a2 * before[k] / b1) / (a1 + a2);
    };
    auto log_utility = [&](std::size_t k, double theta) {
        const double x1 = before[k] + theta * model.capacity(order[k], 0);
        const double x2 = (1.0 - theta) * model.capacity(order[k], 1) + after[k];
        if (!(x1 > 0.0) || !(x2 > 0.0)) return -std::numeric_limits<double>::infinity();
        return a1 * std::log(x1) + a2 * std::log(x2);
    };

    std::optional<std::size_t> chosen;
    double theta = 0.0;
    bool boundary = false;
    for (std::size_t k = 0; k < n && !chosen; ++k) {
        const double t = interior_theta(k);
        if (t >= 0.0 && t <= 1.0) {
            chosen = k;
            theta = t;
        }
    }
    if (!chosen) {
        boundary = true;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n; ++k) {
            for (double t : {0.0, 1.0}) {
                const double value = log_utility(k, t);
                if (!chosen || value > best) {
                    chosen = k;
                    theta = t;
                    best = value;
                }
            }
        }
    }
    std::size_t threshold = *chosen;
    // A full split at k is the same allocation as an empty split at k + 1; keep theta < 1 where possible.
    if (theta == 1.0 && threshold + 1 < n) {
        ++threshold;
        theta = 0.0;
    }

    Allocation u(model.machines(), 2);
    for (std::size_t k = 0; k < n; ++k) {
        const auto i = order[k];
        if (k < threshold) {
            u(i, 0) = 1.0;
        } else if (k > threshold) {
            u(i, 1) = 1.0;
        } else {
            u(i, 0) = theta;
            u(i, 1) = 1.0 - theta;
        }
    }

    auto report = make_report("ca-n-by-2", model, spec, std::move(u));
    const auto splitter = order[threshold];
    report.diagnostics.threshold = ThresholdSolution{threshold + 1, splitter, theta, boundary};
    if (report.diagnostics.shadow_prices) {
        const auto& p = *report.diagnostics.shadow_prices;
        const double lhs = p[0] * model.capacity(splitter, 0);
        const double rhs = p[1] * model.capacity(splitter, 1);
        report.diagnostics.foc_residual = std::abs(lhs - rhs) / lhs;
    }
    report.diagnostics.structure = check_ca_structure(report.allocation, model);
    report.diagnostics.ordering = ordering;
    return report;
}

SolveReport solve_2x2(const CapacityModel& model, const UtilitySpec& spec) {
    if (model.machines() != 2 || model.vnfs() != 2) {
        throw UnsupportedShape("solve_2x2 needs a 2x2 model");
    }
    auto report = solve_n_by_2(model, spec);
    report.strategy = "ca-2x2";
    return report;
}

SolveReport solve_2_by_m(const CapacityModel& model, const UtilitySpec& spec, const SolverConfig& config) {
    if (model.machines() != 2) {
        throw UnsupportedShape("the two-machine solver needs exactly 2 machines, got " +
                               std::to_string(model.machines()));
    }
    require_cobb_douglas(model, spec);
    require_linear_model(model);
    require_no_dead_vnf(model);
    require_positive(model);

    auto report = solve_general(model, spec, config);
    report.strategy = "ca-2-by-m";
    auto ordering = sort_by_ca(model, Axis::vnfs);
    auto structure = check_ca_structure(report.allocation, model);
    if (structure.inferred_threshold) {
        const auto position = *structure.inferred_threshold;
        report.diagnostics.threshold = ThresholdSolution{position, ordering.order[position - 1], std::nullopt, false};
    }
    report.diagnostics.structure = std::move(structure);
    report.diagnostics.ordering = std::move(ordering);
    return report;
}

StructureCheck check_ca_structure(const Allocation& u, const CapacityModel& model) {
    if (u.rows() != model.machines() || u.cols() != model.vnfs()) {
        throw InvalidInput("allocation shape does not match the model");
    }
    Axis axis;
    if (model.vnfs() == 2) {
        axis = Axis::machines;
    } else if (model.machines() == 2) {
        axis = Axis::vnfs;
    } else {
        throw UnsupportedShape("the threshold structure is defined for n x 2 and 2 x m models only");
    }
    const auto ordering = sort_by_ca(model, axis);
    const auto& order = ordering.order;

    // Entry of entity e on the "first" side (VNF 1 / machine 1) and on the "second" side.
    auto cell = [&](std::size_t e, int side) -> StructureViolation {
        if (axis == Axis::machines) {
            return {e, static_cast<std::size_t>(side), u(e, static_cast<std::size_t>(side))};
        }
        return {static_cast<std::size_t>(side), e, u(static_cast<std::size_t>(side), e)};
    };
    auto active = [&](std::size_t e, int side) { return cell(e, side).value >= kStructureZero; };

    std::optional<std::size_t> last_first;
    std::optional<std::size_t> first_second;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        if (active(order[pos], 0)) last_first = pos;
        if (!first_second && active(order[pos], 1)) first_second = pos;
    }

    StructureCheck check;
    check.ties = ordering.ties;
    if (last_first && first_second && *last_first > *first_second) {
        for (std::size_t pos = 0; pos < *last_first; ++pos) {
            if (active(order[pos], 1)) check.violations.push_back(cell(order[pos], 1));
        }
        for (std::size_t pos = *first_second + 1; pos < order.size(); ++pos) {
            if (active(order[pos], 0)) check.violations.push_back(cell(order[pos], 0));
        }
    }
    check.holds = check.violations.empty();
    if (check.holds) {
        if (first_second) {
            check.inferred_threshold = *first_second + 1;
        } else if (last_first) {
            check.inferred_threshold = order.size();
        }
    }
    return check;
}

Allocation baseline_even_split(const CapacityModel& model) {
    return Allocation(model.machines(), model.vnfs(), 1.0 / static_cast<double>(model.vnfs()));
}

Allocation baseline_absolute_advantage(const CapacityModel& model) {
    const auto b = model.capacities();
    Allocation u(model.machines(), model.vnfs());
    for (std::size_t i = 0; i < model.machines(); ++i) {
        u(i, argmax_lowest(b.row(i))) = 1.0;
    }
    return u;
}

SolveReport solve_comparative_advantage(const CapacityModel& model, const UtilitySpec& spec,
                                        const SolverConfig& config) {
    SolveReport report;
    if (spec.is_cobb_douglas()) {
        if (model.vnfs() == 2) {
            report = solve_n_by_2(model, spec);
        } else if (model.machines() == 2) {
            report = solve_2_by_m(model, spec, config);
        } else {
            report = solve_general(model, spec, config);
        }
    } else if (spec.has_requirements()) {
        report = solve_requirements_lp(model, spec);
    } else {
        if (spec.size() != model.vnfs()) {
            throw InvalidInput("utility has " + std::to_string(spec.size()) + " weights but the model has " +
                               std::to_string(model.vnfs()) + " vnfs");
        }
        const auto w = spec.weights();
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        std::vector<double> alpha;
        for (double v : w) alpha.push_back(v / total);
        const auto counterpart = UtilitySpec::cobb_douglas(std::move(alpha));
        const auto inner = solve_comparative_advantage(model, counterpart, config);

        Allocation u(model.machines(), model.vnfs());
        for (std::size_t i = 0; i < model.machines(); ++i) {
            u(i, argmax_lowest(inner.allocation.row(i))) = 1.0;
        }
        report = make_report("ca-specialized", model, spec, std::move(u));
        report.diagnostics.iterations = inner.diagnostics.iterations;
        report.diagnostics.converged = inner.diagnostics.converged;
        if (model.vnfs() == 2 || model.machines() == 2) {
            report.diagnostics.structure = check_ca_structure(report.allocation, model);
        }
        report.diagnostics.notes.push_back("specialized from the cobb-douglas optimum with alpha proportional to w");
    }
    report.diagnostics.notes.insert(report.diagnostics.notes.begin(), "method: " + report.strategy);
    report.strategy = "ca";
    return report;
}

}  // namespace caalloc
