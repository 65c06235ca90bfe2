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

#include "caalloc/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "caalloc/errors.hpp"

namespace caalloc::lp {

namespace {

class Tableau {
 public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * (cols + 1), 0.0) {}

    double& at(std::size_t r, std::size_t c) { return cells_[r * (cols_ + 1) + c]; }
    double at(std::size_t r, std::size_t c) const { return cells_[r * (cols_ + 1) + c]; }
    double& rhs(std::size_t r) { return at(r, cols_); }
    double rhs(std::size_t r) const { return at(r, cols_); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double scale = at(pr, pc);
        for (std::size_t c = 0; c <= cols_; ++c) at(pr, c) /= scale;
        at(pr, pc) = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            const double factor = at(r, pc);
            if (factor == 0.0) continue;
            for (std::size_t c = 0; c <= cols_; ++c) at(r, c) -= factor * at(pr, c);
            at(r, pc) = 0.0;
        }
    }

 private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> cells_;
};

struct Runner {
    Tableau& tableau;
    std::vector<std::size_t>& basis;
    std::vector<bool> allowed;
    double tolerance;
    std::size_t pivots = 0;

    // Maximizes cost'x from the current basis. Returns false when unbounded.
    bool optimize(const std::vector<double>& cost) {
        for (;;) {
            std::optional<std::size_t> entering;
            for (std::size_t c = 0; c < tableau.cols() && !entering; ++c) {
                if (!allowed[c]) continue;
                double reduced = cost[c];
                for (std::size_t r = 0; r < tableau.rows(); ++r) reduced -= cost[basis[r]] * tableau.at(r, c);
                if (reduced > tolerance) entering = c;
            }
            if (!entering) return true;

            std::optional<std::size_t> leaving;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < tableau.rows(); ++r) {
                const double a = tableau.at(r, *entering);
                if (a <= tolerance) continue;
                const double ratio = tableau.rhs(r) / a;
                if (!leaving || ratio < best_ratio - tolerance ||
                    (std::abs(ratio - best_ratio) <= tolerance && basis[r] < basis[*leaving])) {
                    leaving = r;
                    best_ratio = ratio;
                }
            }
            if (!leaving) return false;
            tableau.pivot(*leaving, *entering);
            basis[*leaving] = *entering;
            ++pivots;
        }
    }
};

}  // namespace

Solution solve(const Problem& problem, double tolerance) {
    const std::size_t nvars = problem.objective.size();
    const std::size_t ncons = problem.constraints.size();

    std::size_t nslack = 0;
    std::size_t nart = 0;
    for (const auto& con : problem.constraints) {
        if (con.coefficients.size() != nvars) {
            throw InvalidInput("lp constraint has " + std::to_string(con.coefficients.size()) +
                               " coefficients, expected " + std::to_string(nvars));
        }
        auto rel = con.relation;
        if (con.rhs < 0.0 && rel != Relation::equal) {
            rel = rel == Relation::less_equal ? Relation::greater_equal : Relation::less_equal;
        }
        if (rel != Relation::equal) ++nslack;
        if (rel != Relation::less_equal) ++nart;
    }

    const std::size_t ncols = nvars + nslack + nart;
    const std::size_t first_art = nvars + nslack;
    Tableau tableau(ncons, ncols);
    std::vector<std::size_t> basis(ncons);

    std::size_t next_slack = nvars;
    std::size_t next_art = first_art;
    for (std::size_t k = 0; k < ncons; ++k) {
        const auto& con = problem.constraints[k];
        const double sign = con.rhs < 0.0 ? -1.0 : 1.0;
        auto rel = con.relation;
        if (sign < 0.0 && rel != Relation::equal) {
            rel = rel == Relation::less_equal ? Relation::greater_equal : Relation::less_equal;
        }
        for (std::size_t v = 0; v < nvars; ++v) tableau.at(k, v) = sign * con.coefficients[v];
        tableau.rhs(k) = sign * con.rhs;
        if (rel == Relation::less_equal) {
            tableau.at(k, next_slack) = 1.0;
            basis[k] = next_slack++;
        } else {
            if (rel == Relation::greater_equal) tableau.at(k, next_slack++) = -1.0;
            tableau.at(k, next_art) = 1.0;
            basis[k] = next_art++;
        }
    }

    Runner runner{tableau, basis, std::vector<bool>(ncols, true), tolerance};
    Solution solution;

    auto extract = [&] {
        std::vector<double> all(ncols, 0.0);
        for (std::size_t r = 0; r < ncons; ++r) all[basis[r]] = tableau.rhs(r);
        solution.values.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(nvars));
        solution.infeasibility = 0.0;
        for (std::size_t c = first_art; c < ncols; ++c) solution.infeasibility += all[c];
        solution.activity.assign(ncons, 0.0);
        for (std::size_t k = 0; k < ncons; ++k) {
            for (std::size_t v = 0; v < nvars; ++v) {
                solution.activity[k] += problem.constraints[k].coefficients[v] * solution.values[v];
            }
        }
        solution.objective = 0.0;
        for (std::size_t v = 0; v < nvars; ++v) solution.objective += problem.objective[v] * solution.values[v];
    };

    if (nart > 0) {
        std::vector<double> phase1(ncols, 0.0);
        for (std::size_t c = first_art; c < ncols; ++c) phase1[c] = -1.0;
        runner.optimize(phase1);
        extract();
        double scale = 1.0;
        for (const auto& con : problem.constraints) scale = std::max(scale, std::abs(con.rhs));
        if (solution.infeasibility > tolerance * scale) {
            solution.status = Status::infeasible;
            solution.pivots = runner.pivots;
            return solution;
        }
        // Artificials still basic sit at zero; swap them out where a real column allows it.
        for (std::size_t r = 0; r < ncons; ++r) {
            if (basis[r] < first_art) continue;
            for (std::size_t c = 0; c < first_art; ++c) {
                if (std::abs(tableau.at(r, c)) > tolerance) {
                    tableau.pivot(r, c);
                    basis[r] = c;
                    ++runner.pivots;
                    break;
                }
            }
        }
        for (std::size_t c = first_art; c < ncols; ++c) runner.allowed[c] = false;
    }

    std::vector<double> phase2(ncols, 0.0);
    for (std::size_t v = 0; v < nvars; ++v) phase2[v] = problem.objective[v];
    const bool bounded = runner.optimize(phase2);
    extract();
    solution.pivots = runner.pivots;
    solution.status = bounded ? Status::optimal : Status::unbounded;
    return solution;
}

}  // namespace caalloc::lp
