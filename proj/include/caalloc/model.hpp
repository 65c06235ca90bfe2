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
 * Domain model for allocating fractions of heterogeneous machines to VNFs.
 *
 * An instance has n machines and m VNFs. Machine i devotes a fraction
 * u(i, j) of itself to VNF j; each machine row lives on the simplex
 * { u >= 0, sum_j u(i, j) <= 1 }. The throughput of VNF j is the sum over
 * machines of curve(i, j) evaluated at u(i, j); for linear curves that is
 * sum_i b(i, j) * u(i, j).
 *
 * The operator's objective is either Cobb-Douglas (evaluated as
 * sum_j alpha_j * log x_j) or linear (sum_j w_j * x_j, optionally with
 * per-VNF throughput floors).
 */

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace caalloc {

/// Absolute tolerance on the allocation constraints.
inline constexpr double kFeasibilityTolerance = 1e-9;

/// Dense row-major matrix. The tag keeps allocations and capacities apart.
template <typename Tag>
class Grid {
 public:
    Grid() = default;
    Grid(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Grid(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::span<const double> values() const noexcept { return data_; }

    bool operator==(const Grid&) const = default;

 private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

template <typename Tag>
Grid<Tag>::Grid(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            data_.clear();
            rows_ = cols_ = 0;
            return;
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

struct AllocationTag {};
struct CapacityTag {};

/// u(i, j): fraction of machine i given to VNF j.
using Allocation = Grid<AllocationTag>;
/// b(i, j): throughput of machine i fully dedicated to VNF j.
using CapacityMatrix = Grid<CapacityTag>;

/// x_j, packets per unit time.
using ThroughputVector = std::vector<double>;
/// p_j, marginal log-utility per unit of throughput.
using ShadowPrices = std::vector<double>;

struct CurveSample {
    double fraction = 0.0;
    double capacity = 0.0;

    bool operator==(const CurveSample&) const = default;
};

/// Capacity as a function of the allocated fraction, piecewise linear between samples.
class CapacityCurve {
 public:
    /// Throws InvalidInput when the samples break the curve invariants.
    explicit CapacityCurve(std::vector<CurveSample> samples);

    /// The two-sample curve (0, 0), (1, full_capacity).
    static CapacityCurve linear(double full_capacity);

    /// Reason the samples cannot form a curve, or nullopt when they can.
    static std::optional<std::string> check(std::span<const CurveSample> samples);

    /// Interpolated capacity; the fraction is clamped to [0, 1].
    double at(double fraction) const;

    double full_capacity() const noexcept { return samples_.back().capacity; }
    bool is_linear() const noexcept { return samples_.size() == 2; }
    std::span<const CurveSample> samples() const noexcept { return samples_; }

    bool operator==(const CapacityCurve&) const = default;

 private:
    std::vector<CurveSample> samples_;
};

/// Dense n x m grid of capacity curves plus the names of both axes.
class CapacityModel {
 public:
    CapacityModel(std::vector<std::string> machines, std::vector<std::string> vnfs,
                  std::vector<CapacityCurve> curves);

    /// Linear model from a capacity matrix; names default to "machine<k>" / "vnf<k>".
    static CapacityModel linear(const CapacityMatrix& b, std::vector<std::string> machines = {},
                                std::vector<std::string> vnfs = {});

    std::size_t machines() const noexcept { return machine_names_.size(); }
    std::size_t vnfs() const noexcept { return vnf_names_.size(); }

    const std::string& machine_name(std::size_t i) const { return machine_names_.at(i); }
    const std::string& vnf_name(std::size_t j) const { return vnf_names_.at(j); }
    std::span<const std::string> machine_names() const noexcept { return machine_names_; }
    std::span<const std::string> vnf_names() const noexcept { return vnf_names_; }

    const CapacityCurve& curve(std::size_t i, std::size_t j) const { return curves_.at(i * vnfs() + j); }

    /// b(i, j), the capacity at full allocation.
    double capacity(std::size_t i, std::size_t j) const { return curve(i, j).full_capacity(); }
    CapacityMatrix capacities() const;

    bool linear_only() const noexcept { return linear_only_; }

    /// VNFs whose whole column is zero.
    std::vector<std::size_t> dead_vnfs() const;

 private:
    std::vector<std::string> machine_names_;
    std::vector<std::string> vnf_names_;
    std::vector<CapacityCurve> curves_;
    bool linear_only_ = true;
};

struct CobbDouglas {
    std::vector<double> weights;
};

struct Linear {
    std::vector<double> weights;
    std::optional<std::vector<double>> requirements;
};

/// Operator objective. Build through the factories, which enforce the invariants.
class UtilitySpec {
 public:
    /// Weights must be strictly positive and sum to 1 within 1e-9.
    static UtilitySpec cobb_douglas(std::vector<double> weights);
    /// Weights strictly positive; requirements, if given, non-negative and of the same length.
    static UtilitySpec linear(std::vector<double> weights,
                              std::optional<std::vector<double>> requirements = std::nullopt);

    bool is_cobb_douglas() const noexcept { return std::holds_alternative<CobbDouglas>(variant_); }
    bool is_linear() const noexcept { return std::holds_alternative<Linear>(variant_); }

    const CobbDouglas& cobb_douglas() const { return std::get<CobbDouglas>(variant_); }
    const Linear& linear() const { return std::get<Linear>(variant_); }

    std::span<const double> weights() const;
    std::size_t size() const { return weights().size(); }

    /// True when a linear spec carries at least one positive requirement.
    bool has_requirements() const;

 private:
    explicit UtilitySpec(std::variant<CobbDouglas, Linear> v) : variant_(std::move(v)) {}

    std::variant<CobbDouglas, Linear> variant_;
};

struct EntryViolation {
    std::size_t machine = 0;
    std::size_t vnf = 0;
    double value = 0.0;
};

struct RowViolation {
    std::size_t machine = 0;
    double sum = 0.0;
};

struct AllocationValidation {
    std::vector<EntryViolation> negative_entries;
    std::vector<RowViolation> overfull_rows;
    std::vector<EntryViolation> non_finite_entries;

    bool valid() const noexcept {
        return negative_entries.empty() && overfull_rows.empty() && non_finite_entries.empty();
    }
};

/// Checks u >= -0 and row sums <= 1 + kFeasibilityTolerance. Throws InvalidInput on a shape mismatch.
AllocationValidation validate_allocation(const Allocation& u, const CapacityModel& model);

/// x_j = sum_i curve(i, j)(u(i, j)). Throws InvalidInput on a shape mismatch.
ThroughputVector evaluate_throughput(const Allocation& u, const CapacityModel& model);

/// sum_j alpha_j log x_j (may be -inf) or sum_j w_j x_j.
double evaluate_utility(std::span<const double> x, const UtilitySpec& spec);

/// p_j = alpha_j / x_j. Requires a Cobb-Douglas spec and strictly positive x.
ShadowPrices shadow_prices(std::span<const double> x, const UtilitySpec& spec);

/// Whether x meets every requirement of a linear spec (always true otherwise).
bool meets_requirements(std::span<const double> x, const UtilitySpec& spec, double tolerance = 1e-9);

}  // namespace caalloc
