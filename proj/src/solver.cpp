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

#include "caalloc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include "caalloc/ca_core.hpp"
#include "caalloc/errors.hpp"
#include "caalloc/simplex.hpp"

namespace caalloc {

namespace {

constexpr double kActiveEntry = 1e-6;
constexpr double kMaxStep = 1e12;

void require_matching_spec(const CapacityModel& model, const UtilitySpec& spec) {
    if (spec.size() != model.vnfs()) {
        throw InvalidInput("utility has " + std::to_string(spec.size()) + " weights but the model has " +
                           std::to_string(model.vnfs()) + " vnfs");
    }
}

void require_linear_model(const CapacityModel& model, const char* who) {
    if (!model.linear_only()) {
        throw InvalidInput(std::string(who) + " needs a linear capacity model; use the grid oracle for curves");
    }
}

std::string format_number(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

// Gradient of sum_j alpha_j log x_j with respect to u(i, j).
void log_utility_gradient(const CapacityMatrix& b, std::span<const double> alpha, std::span<const double> x,
                          Allocation& gradient) {
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            gradient(i, j) = alpha[j] * b(i, j) / x[j];
        }
    }
}

double log_utility(std::span<const double> alpha, std::span<const double> x) {
    double value = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] > 0.0)) return -std::numeric_limits<double>::infinity();
        value += alpha[j] * std::log(x[j]);
    }
    return value;
}

void linear_throughput(const CapacityMatrix& b, const Allocation& u, std::vector<double>& x) {
    std::fill(x.begin(), x.end(), 0.0);
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            x[j] += b(i, j) * u(i, j);
        }
    }
}

// u + step * gradient, row-wise projected back onto the simplex.
void projected_step(const Allocation& u, const Allocation& gradient, double step, Allocation& out) {
    for (std::size_t i = 0; i < u.rows(); ++i) {
        auto row = out.row(i);
        for (std::size_t j = 0; j < u.cols(); ++j) row[j] = u(i, j) + step * gradient(i, j);
        project_onto_simplex(row);
    }
}

double distance(const Allocation& a, const Allocation& b) {
    double sum = 0.0;
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t k = 0; k < va.size(); ++k) sum += (va[k] - vb[k]) * (va[k] - vb[k]);
    return std::sqrt(sum);
}

// Worst per-machine gap between the best marginal value and the weakest active entry, relative.
// g . (to - from) with g shifted by its mean over the support of `to`. Rows of `to - from`
// sum to zero, so the shift changes nothing exactly; it keeps the sum from cancelling and
// drops the rounding left in the row sums by the projection.
double row_centered_dot(const Allocation& g, const Allocation& to, const Allocation& from) {
    double total = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) {
        double mean = 0.0;
        std::size_t support = 0;
        for (std::size_t j = 0; j < g.cols(); ++j) {
            if (to(i, j) > 0.0) {
                mean += g(i, j);
                ++support;
            }
        }
        if (support > 0) mean /= static_cast<double>(support);
        for (std::size_t j = 0; j < g.cols(); ++j) total += (g(i, j) - mean) * (to(i, j) - from(i, j));
    }
    return total;
}

double kkt_residual(const Allocation& u, const Allocation& gradient) {
    double worst = 0.0;
    for (std::size_t i = 0; i < u.rows(); ++i) {
        const auto g = gradient.row(i);
        const double top = *std::max_element(g.begin(), g.end());
        if (!(top > 0.0)) continue;
        for (std::size_t j = 0; j < u.cols(); ++j) {
            if (u(i, j) > kActiveEntry) worst = std::max(worst, (top - g[j]) / top);
        }
    }
    return worst;
}

// Compositions of `total` into `parts` non-negative integers, in lexicographic order.
void compositions(std::size_t total, std::size_t parts, bool exact, std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> current(parts, 0);
    std::function<void(std::size_t, std::size_t)> fill = [&](std::size_t pos, std::size_t remaining) {
        if (pos + 1 == parts) {
            if (exact) {
                current[pos] = remaining;
                out.push_back(current);
            } else {
                for (std::size_t c = 0; c <= remaining; ++c) {
                    current[pos] = c;
                    out.push_back(current);
                }
            }
            return;
        }
        for (std::size_t c = 0; c <= remaining; ++c) {
            current[pos] = c;
            fill(pos + 1, remaining - c);
        }
    };
    fill(0, total);
}

double binomial(double n, double k) {
    double result = 1.0;
    for (double t = 1.0; t <= k; t += 1.0) result = result * (n - k + t) / t;
    return result;
}

std::size_t grid_divisions(double step) {
    if (!(step > 0.0) || step > 0.5) {
        throw InvalidInput("oracle grid step must lie in (0, 0.5], got " + format_number(step));
    }
    const double divisions = std::round(1.0 / step);
    if (std::abs(divisions * step - 1.0) > 1e-12) {
        throw InvalidInput("oracle grid step " + format_number(step) + " does not divide 1");
    }
    return static_cast<std::size_t>(divisions);
}

void attach_structure(SolveReport& report, const CapacityModel& model) {
    if (report.diagnostics.structure) return;
    if (model.vnfs() != 2 && model.machines() != 2) return;
    try {
        report.diagnostics.structure = check_ca_structure(report.allocation, model);
    } catch (const InvalidInput&) {
        // undefined ratios (all-zero rows): no structure to speak of
    }
}

}  // namespace

void project_onto_simplex(std::span<double> v) {
    if (v.empty()) return;
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (sorted[k] - candidate > 0.0) tau = candidate;
    }
    for (double& value : v) value = std::max(value - tau, 0.0);
}

SolveReport solve_general(const CapacityModel& model, const UtilitySpec& spec, const SolverConfig& config) {
    if (!spec.is_cobb_douglas()) {
        throw InvalidInput("the general solver needs a cobb-douglas utility; linear objectives go to the lp");
    }
    require_matching_spec(model, spec);
    require_linear_model(model, "the general solver");
    if (auto dead = model.dead_vnfs(); !dead.empty()) {
        auto message = "no machine can run vnf " + model.vnf_name(dead.front()) + "; every allocation has utility -inf";
        throw InfeasibleObjective(std::move(message), std::move(dead));
    }

    const auto b = model.capacities();
    const auto alpha = spec.weights();
    const std::size_t n = model.machines();
    const std::size_t m = model.vnfs();

    Allocation u = baseline_even_split(model);
    Allocation gradient(n, m);
    Allocation candidate(n, m);
    Allocation unit_step(n, m);
    Allocation candidate_gradient(n, m);
    std::vector<double> x(m);
    std::vector<double> x_candidate(m);

    linear_throughput(b, u, x);
    double value = log_utility(alpha, x);
    if (config.on_iterate) config.on_iterate({0, u, value, 0.0});

    double step = config.initial_step;
    double improvement = std::numeric_limits<double>::infinity();
    double pg_norm = std::numeric_limits<double>::infinity();
    bool converged = false;
    std::size_t iteration = 0;

    for (;;) {
        log_utility_gradient(b, alpha, x, gradient);
        projected_step(u, gradient, 1.0, unit_step);
        pg_norm = distance(unit_step, u);
        if (pg_norm < config.gradient_tolerance && improvement < config.relative_tolerance) {
            converged = true;
            break;
        }
        if (iteration >= config.max_iterations) break;

        // Backtracking from a grown step until the Armijo condition holds.
        double trial = iteration == 0 ? step : std::min(step * config.step_growth, kMaxStep);
        bool accepted = false;
        double trial_value = value;
        while (trial >= config.min_step) {
            projected_step(u, gradient, trial, candidate);
            linear_throughput(b, candidate, x_candidate);
            trial_value = log_utility(alpha, x_candidate);
            const double ascent = row_centered_dot(gradient, candidate, u);
            if (!std::isfinite(trial_value) || !(ascent > 0.0)) {
                trial *= config.backtrack;
                continue;
            }
            const double noise = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(value));
            if (trial_value - value > noise) {
                if (trial_value >= value + config.armijo * ascent) {
                    accepted = true;
                    break;
                }
            } else if (trial_value - value >= -noise) {
                // The value difference is rounding. The objective is concave, so a non-negative
                // slope at the candidate along the step still certifies ascent.
                log_utility_gradient(b, alpha, x_candidate, candidate_gradient);
                if (row_centered_dot(candidate_gradient, candidate, u) >= 0.0) {
                    accepted = true;
                    break;
                }
            }
            trial *= config.backtrack;
        }
        if (!accepted) {
            // No representable ascent left; stationarity decides.
            converged = pg_norm < config.gradient_tolerance;
            break;
        }

        ++iteration;
        improvement = (trial_value - value) / std::max(1.0, std::abs(value));
        std::swap(u, candidate);
        std::swap(x, x_candidate);
        value = trial_value;
        step = trial;
        if (config.on_iterate) config.on_iterate({iteration, u, value, step});
    }

    auto report = make_report("general", model, spec, u);
    report.diagnostics.iterations = iteration;
    report.diagnostics.converged = converged;
    report.diagnostics.projected_gradient_norm = pg_norm;
    log_utility_gradient(b, alpha, report.x, gradient);
    report.diagnostics.foc_residual = kkt_residual(report.allocation, gradient);
    if (!converged) {
        report.diagnostics.notes.push_back("stopped after " + std::to_string(iteration) +
                                           " iterations with projected-gradient norm " + format_number(pg_norm));
    }
    return report;
}

SolveReport solve_requirements_lp(const CapacityModel& model, const UtilitySpec& spec) {
    if (!spec.is_linear()) {
        throw InvalidInput("the requirements lp needs a linear utility");
    }
    require_matching_spec(model, spec);
    require_linear_model(model, "the requirements lp");

    const std::size_t n = model.machines();
    const std::size_t m = model.vnfs();
    const auto b = model.capacities();
    const auto& w = spec.linear().weights;
    const std::vector<double> r = spec.linear().requirements.value_or(std::vector<double>(m, 0.0));

    lp::Problem problem;
    problem.objective.assign(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) problem.objective[i * m + j] = w[j] * b(i, j);
    }
    for (std::size_t i = 0; i < n; ++i) {
        lp::Constraint row{std::vector<double>(n * m, 0.0), lp::Relation::less_equal, 1.0};
        for (std::size_t j = 0; j < m; ++j) row.coefficients[i * m + j] = 1.0;
        problem.constraints.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < m; ++j) {
        lp::Constraint floor{std::vector<double>(n * m, 0.0), lp::Relation::greater_equal, r[j]};
        for (std::size_t i = 0; i < n; ++i) floor.coefficients[i * m + j] = b(i, j);
        problem.constraints.push_back(std::move(floor));
    }

    const auto solution = lp::solve(problem);
    if (solution.status == lp::Status::infeasible) {
        std::vector<UnreachableVnf> unreachable;
        for (std::size_t j = 0; j < m; ++j) {
            double bound = 0.0;
            for (std::size_t i = 0; i < n; ++i) bound += b(i, j);
            if (r[j] > bound + 1e-9) unreachable.push_back({j, model.vnf_name(j), r[j], bound});
        }
        std::string message = "throughput requirements are infeasible";
        if (unreachable.empty()) {
            // Each floor is reachable alone; report the ones the phase-1 point still misses.
            for (std::size_t j = 0; j < m; ++j) {
                if (solution.activity[n + j] < r[j] - 1e-9) {
                    unreachable.push_back({j, model.vnf_name(j), r[j], solution.activity[n + j]});
                }
            }
            message += " jointly";
        }
        for (const auto& v : unreachable) {
            message += "; " + v.name + " requires " + format_number(v.required) + " but at most " +
                       format_number(v.max_achievable) + " is achievable";
        }
        throw InfeasibleRequirements(message, std::move(unreachable));
    }
    if (solution.status == lp::Status::unbounded) {
        throw Error("requirements lp reported unbounded; the allocation polytope is bounded so this is a bug");
    }

    Allocation u(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) u(i, j) = std::max(0.0, solution.values[i * m + j]);
    }
    auto report = make_report("lp", model, spec, std::move(u));
    report.diagnostics.iterations = solution.pivots;
    for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
        const double slack = std::abs(solution.activity[k] - problem.constraints[k].rhs);
        if (slack <= 1e-9 * std::max(1.0, std::abs(problem.constraints[k].rhs))) {
            report.diagnostics.binding.push_back(k < n ? "machine:" + model.machine_name(k)
                                                       : "requirement:" + model.vnf_name(k - n));
        }
    }
    return report;
}

double oracle_grid_size(const CapacityModel& model, const OracleConfig& config) {
    const auto divisions = static_cast<double>(grid_divisions(config.grid_step));
    const auto m = static_cast<double>(model.vnfs());
    const double per_row = config.allow_idle ? binomial(divisions + m, m) : binomial(divisions + m - 1.0, m - 1.0);
    return std::pow(per_row, static_cast<double>(model.machines()));
}

SolveReport brute_force_oracle(const CapacityModel& model, const UtilitySpec& spec, const OracleConfig& config) {
    require_matching_spec(model, spec);
    const std::size_t divisions = grid_divisions(config.grid_step);
    const double count = oracle_grid_size(model, config);
    if (count > static_cast<double>(config.max_points)) {
        std::ostringstream msg;
        msg.precision(6);
        msg << "oracle grid has " << count << " points, over the budget of " << config.max_points;
        throw BudgetExceeded(msg.str(), count);
    }

    const std::size_t n = model.machines();
    const std::size_t m = model.vnfs();
    std::vector<std::vector<std::size_t>> rows;
    compositions(divisions, m, !config.allow_idle, rows);

    // contribution[i][c * m + j]: throughput machine i adds to VNF j under row pattern c.
    std::vector<std::vector<double>> contribution(n, std::vector<double>(rows.size() * m));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < rows.size(); ++c) {
            for (std::size_t j = 0; j < m; ++j) {
                const double fraction = static_cast<double>(rows[c][j]) / static_cast<double>(divisions);
                contribution[i][c * m + j] = model.curve(i, j).at(fraction);
            }
        }
    }

    std::vector<std::size_t> choice(n, 0);
    std::vector<std::size_t> best_choice;
    double best = -std::numeric_limits<double>::infinity();
    bool found = false;
    std::vector<std::vector<double>> partial(n + 1, std::vector<double>(m, 0.0));

    // Machine 0 outermost and lexicographic row patterns: visiting order is lexicographic in u.
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        if (i == n) {
            const auto& x = partial[n];
            if (!meets_requirements(x, spec)) return;
            const double value = evaluate_utility(x, spec);
            const bool better = std::isfinite(best) ? value > best + 1e-12 * std::max(1.0, std::abs(best)) : value > best;
            if (!found || better) {
                best = value;
                best_choice = choice;
                found = true;
            }
            return;
        }
        for (std::size_t c = 0; c < rows.size(); ++c) {
            choice[i] = c;
            const double* add = &contribution[i][c * m];
            for (std::size_t j = 0; j < m; ++j) partial[i + 1][j] = partial[i][j] + add[j];
            visit(i + 1);
        }
    };
    visit(0);

    if (!found) {
        std::vector<UnreachableVnf> unreachable;
        const auto& r = *spec.linear().requirements;
        for (std::size_t j = 0; j < m; ++j) {
            double bound = 0.0;
            for (std::size_t i = 0; i < n; ++i) bound += model.capacity(i, j);
            if (r[j] > bound + 1e-9) unreachable.push_back({j, model.vnf_name(j), r[j], bound});
        }
        throw InfeasibleRequirements("no grid allocation meets the throughput requirements", std::move(unreachable));
    }

    Allocation u(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            u(i, j) = static_cast<double>(rows[best_choice[i]][j]) / static_cast<double>(divisions);
        }
    }
    auto report = make_report("oracle", model, spec, std::move(u));
    report.diagnostics.iterations = static_cast<std::size_t>(count);
    report.diagnostics.notes.push_back("grid step " + format_number(config.grid_step) +
                                       (config.allow_idle ? ", idle capacity allowed" : ", rows sum to 1"));
    attach_structure(report, model);
    return report;
}

std::vector<StrategyOutcome> compare_strategies(const CapacityModel& model, const UtilitySpec& spec,
                                                const CompareOptions& options) {
    std::vector<StrategyOutcome> outcomes;
    auto run = [&](std::string name, const std::function<SolveReport()>& body) {
        StrategyOutcome outcome;
        outcome.strategy = std::move(name);
        try {
            outcome.report = body();
            outcome.report->strategy = outcome.strategy;
            attach_structure(*outcome.report, model);
        } catch (const InfeasibleObjective& e) {
            outcome.error = e.what();
            outcome.error_kind = "infeasible";
        } catch (const InfeasibleRequirements& e) {
            outcome.error = e.what();
            outcome.error_kind = "infeasible";
        } catch (const BudgetExceeded& e) {
            outcome.error = e.what();
            outcome.error_kind = "budget";
        } catch (const Error& e) {
            outcome.error = e.what();
            outcome.error_kind = "invalid";
        }
        outcomes.push_back(std::move(outcome));
    };

    run("ca", [&] { return solve_comparative_advantage(model, spec, options.solver); });
    run("even", [&] { return make_report("even", model, spec, baseline_even_split(model)); });
    run("absolute", [&] { return make_report("absolute", model, spec, baseline_absolute_advantage(model)); });
    if (options.include_oracle) {
        bool within_budget = false;
        try {
            within_budget = oracle_grid_size(model, options.oracle) <= static_cast<double>(options.oracle.max_points);
        } catch (const InvalidInput&) {
            within_budget = true;  // let the run below record the bad step
        }
        if (within_budget) {
            run("oracle", [&] { return brute_force_oracle(model, spec, options.oracle); });
        }
    }

    std::stable_sort(outcomes.begin(), outcomes.end(), [](const StrategyOutcome& a, const StrategyOutcome& b) {
        if (a.report.has_value() != b.report.has_value()) return a.report.has_value();
        if (!a.report) return false;
        return a.report->utility > b.report->utility;
    });
    return outcomes;
}

}  // namespace caalloc
